// Brute-force LP oracle for small instances: enumerates every candidate
// basic solution (tight row subsets x bound assignments), keeps the
// feasible minimum. Exponential, fine for n <= 6, m <= 8.
#ifndef HYGRID_TESTS_LP_ORACLE_HPP
#define HYGRID_TESTS_LP_ORACLE_HPP

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "hygrid/lp.hpp"

namespace lp_oracle {

struct OracleLP {
    int n = 0;
    std::vector<double> lo, hi, c;
    struct Row {
        std::vector<double> a;
        hygrid::lp::Sense s;
        double rhs;
    };
    std::vector<Row> rows;

    hygrid::lp::Problem to_problem() const {
        hygrid::lp::Problem p;
        std::vector<hygrid::lp::VarHandle> v;
        for (int j = 0; j < n; ++j) v.push_back(p.add_var(lo[j], hi[j], c[j]));
        for (const Row& r : rows) {
            std::vector<std::pair<hygrid::lp::VarHandle, double>> terms;
            for (int j = 0; j < n; ++j)
                if (r.a[j] != 0.0) terms.emplace_back(v[j], r.a[j]);
            p.add_constraint(terms, r.s, r.rhs);
        }
        return p;
    }
};

// k x k dense solve, partial pivoting; false if (near) singular
inline bool dense_solve(std::vector<std::vector<double>> A, std::vector<double>& b) {
    int k = static_cast<int>(b.size());
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        if (std::abs(A[piv][col]) < 1e-10) return false;
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        for (int r = 0; r < k; ++r) {
            if (r == col) continue;
            double f = A[r][col] / A[col][col];
            if (f == 0.0) continue;
            for (int cc = col; cc < k; ++cc) A[r][cc] -= f * A[col][cc];
            b[r] -= f * b[col];
        }
    }
    for (int i = 0; i < k; ++i) b[i] /= A[i][i];
    return true;
}

inline bool feasible(const OracleLP& p, const std::vector<double>& x, double tol = 1e-7) {
    for (int j = 0; j < p.n; ++j)
        if (x[j] < p.lo[j] - tol || x[j] > p.hi[j] + tol) return false;
    for (const auto& r : p.rows) {
        double ax = 0;
        for (int j = 0; j < p.n; ++j) ax += r.a[j] * x[j];
        switch (r.s) {
            case hygrid::lp::Sense::le: if (ax > r.rhs + tol) return false; break;
            case hygrid::lp::Sense::ge: if (ax < r.rhs - tol) return false; break;
            case hygrid::lp::Sense::eq: if (std::abs(ax - r.rhs) > tol) return false; break;
        }
    }
    return true;
}

// minimum objective over all vertices; +inf if nothing feasible found
inline double oracle_min(const OracleLP& p) {
    const double inf = std::numeric_limits<double>::infinity();
    int m = static_cast<int>(p.rows.size());
    double best = inf;

    for (int rowmask = 0; rowmask < (1 << m); ++rowmask) {
        std::vector<int> tight;
        for (int i = 0; i < m; ++i)
            if (rowmask & (1 << i)) tight.push_back(i);
        int k = static_cast<int>(tight.size());
        if (k > p.n) continue;

        // choose k free variables, the rest pinned to a bound
        for (int varmask = 0; varmask < (1 << p.n); ++varmask) {
            if (__builtin_popcount(varmask) != k) continue;
            std::vector<int> free_vars;
            for (int j = 0; j < p.n; ++j)
                if (varmask & (1 << j)) free_vars.push_back(j);
            int nfixed = p.n - k;
            for (int bmask = 0; bmask < (1 << nfixed); ++bmask) {
                std::vector<double> x(p.n);
                int bi = 0;
                bool ok = true;
                for (int j = 0; j < p.n; ++j) {
                    if (varmask & (1 << j)) continue;
                    bool up = bmask & (1 << bi);
                    ++bi;
                    double v = up ? p.hi[j] : p.lo[j];
                    if (!std::isfinite(v)) { ok = false; break; }
                    x[j] = v;
                }
                if (!ok) continue;
                if (k > 0) {
                    std::vector<std::vector<double>> A(k, std::vector<double>(k));
                    std::vector<double> b(k);
                    for (int r = 0; r < k; ++r) {
                        const auto& row = p.rows[tight[r]];
                        b[r] = row.rhs;
                        for (int j = 0; j < p.n; ++j)
                            if (!(varmask & (1 << j))) b[r] -= row.a[j] * x[j];
                        for (int cidx = 0; cidx < k; ++cidx)
                            A[r][cidx] = row.a[free_vars[cidx]];
                    }
                    if (!dense_solve(A, b)) continue;
                    for (int cidx = 0; cidx < k; ++cidx) x[free_vars[cidx]] = b[cidx];
                }
                if (!feasible(p, x)) continue;
                double obj = 0;
                for (int j = 0; j < p.n; ++j) obj += p.c[j] * x[j];
                best = std::min(best, obj);
            }
        }
    }
    return best;
}

// random instance that is feasible by construction (a random interior
// point satisfies every row) and bounded (finite box)
inline OracleLP random_lp(std::mt19937& rng, int max_vars = 6, int max_rows = 8) {
    auto unit = [&] { return (rng() >> 8) * (1.0 / 16777216.0); };
    OracleLP p;
    p.n = 2 + static_cast<int>(unit() * (max_vars - 1));
    if (p.n > max_vars) p.n = max_vars;
    int m = 1 + static_cast<int>(unit() * max_rows);
    if (m > max_rows) m = max_rows;
    p.lo.resize(p.n);
    p.hi.resize(p.n);
    p.c.resize(p.n);
    std::vector<double> x0(p.n);
    for (int j = 0; j < p.n; ++j) {
        p.lo[j] = -2.0 * unit();
        p.hi[j] = p.lo[j] + 0.5 + 3.0 * unit();
        p.c[j] = 2.0 * unit() - 1.0;
        x0[j] = p.lo[j] + unit() * (p.hi[j] - p.lo[j]);
    }
    for (int i = 0; i < m; ++i) {
        OracleLP::Row r;
        r.a.resize(p.n);
        double ax = 0;
        for (int j = 0; j < p.n; ++j) {
            r.a[j] = 2.0 * unit() - 1.0;
            ax += r.a[j] * x0[j];
        }
        double pick = unit();
        if (pick < 0.4) { r.s = hygrid::lp::Sense::le; r.rhs = ax + 2.0 * unit(); }
        else if (pick < 0.8) { r.s = hygrid::lp::Sense::ge; r.rhs = ax - 2.0 * unit(); }
        else { r.s = hygrid::lp::Sense::eq; r.rhs = ax; }
        p.rows.push_back(std::move(r));
    }
    return p;
}

}  // namespace lp_oracle

#endif
