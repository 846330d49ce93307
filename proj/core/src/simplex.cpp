#include "hygrid/lp.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdarg>
#include <cstdlib>
#include <queue>
#include <stdexcept>

namespace hygrid::lp {

namespace {

enum class VarState : uint8_t { basic, at_lower, at_upper, free_zero, fixed };

struct Eta {
    int pos;                                   // basis position replaced
    double pivot;                              // w[pos]
    std::vector<std::pair<int, double>> nz;    // nonzeros of w, excluding pos
};

// Internal column universe: [0,n) structural, [n,n+m) slacks, [n+m,n+2m) artificials.
class Simplex {
public:
    Simplex(const Problem& p, const SimplexOptions& o) : p_(p), o_(o) {
        n_ = p.num_vars();
        m_ = p.num_rows();
        ncols_ = n_ + 2 * m_;
        build_columns();
    }

    Solution run() {
        Solution sol;
        init_basis();
        refactor();
        if (!factor_ok_) { sol.status = SolveStatus::numerical_failure; return sol; }

        if (any_artificial_basic()) {
            Outcome r = iterate(/*phase1=*/true);
            if (r == Outcome::iter_limit) { sol.status = SolveStatus::iteration_limit; return sol; }
            if (r == Outcome::numerical) { sol.status = SolveStatus::numerical_failure; return sol; }
            double infeas = phase1_objective();
            if (infeas > 1e3 * o_.feas_tol) { sol.status = SolveStatus::infeasible; sol.iterations = iters_; return sol; }
            for (int i = 0; i < m_; ++i) {
                int a = n_ + m_ + i;
                lb_[a] = ub_[a] = 0.0;
                if (state_[a] != VarState::basic) state_[a] = VarState::fixed;
            }
        }

        Outcome r = iterate(/*phase1=*/false);
        switch (r) {
            case Outcome::optimal: break;
            case Outcome::unbounded: sol.status = SolveStatus::unbounded; sol.iterations = iters_; return sol;
            case Outcome::iter_limit: sol.status = SolveStatus::iteration_limit; sol.iterations = iters_; return sol;
            case Outcome::numerical: sol.status = SolveStatus::numerical_failure; sol.iterations = iters_; return sol;
        }
        assemble(sol);
        return sol;
    }

private:
    enum class Outcome { optimal, unbounded, iter_limit, numerical };

    const Problem& p_;
    SimplexOptions o_;
    int n_ = 0, m_ = 0, ncols_ = 0;

    // column-major matrix over the internal universe
    std::vector<std::vector<std::pair<int, double>>> cols_;
    std::vector<double> lb_, ub_, cost_;

    std::vector<int> basis_;          // position -> column
    std::vector<int> basis_pos_;      // column -> position or -1
    std::vector<VarState> state_;
    std::vector<double> xb_;          // basic values by position
    std::vector<double> xn_;          // nonbasic values by column (bound or 0)

    // mutable: SparseLU::adjoint() is a non-const view over const state
    mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
    std::vector<Eta> etas_;
    std::vector<double> devex_;  // reference weights, one per column
    bool factor_ok_ = false;
    long iters_ = 0;
    bool bland_ = false;
    int degen_run_ = 0;

    static void debug(const char* fmt, ...) {
        static const bool on = std::getenv("HYGRID_SIMPLEX_DEBUG") != nullptr;
        if (!on) return;
        va_list ap;
        va_start(ap, fmt);
        std::fprintf(stderr, "simplex: ");
        std::vfprintf(stderr, fmt, ap);
        std::fprintf(stderr, "\n");
        va_end(ap);
    }

    void build_columns() {
        cols_.resize(ncols_);
        lb_.assign(ncols_, 0.0);
        ub_.assign(ncols_, 0.0);
        cost_.assign(ncols_, 0.0);
        for (int j = 0; j < n_; ++j) {
            lb_[j] = p_.lower(j);
            ub_[j] = p_.upper(j);
            cost_[j] = p_.cost(j);
        }
        for (int i = 0; i < m_; ++i)
            for (auto [j, c] : p_.row(i)) cols_[j].emplace_back(i, c);
        for (int i = 0; i < m_; ++i) {
            int s = n_ + i;
            cols_[s] = {{i, 1.0}};
            switch (p_.row_sense(i)) {
                case Sense::le: lb_[s] = 0.0; ub_[s] = kInf; break;
                case Sense::ge: lb_[s] = -kInf; ub_[s] = 0.0; break;
                case Sense::eq: lb_[s] = 0.0; ub_[s] = 0.0; break;
            }
        }
        // artificial columns get their sign once residuals are known
    }

    void init_basis() {
        basis_.assign(m_, -1);
        basis_pos_.assign(ncols_, -1);
        state_.assign(ncols_, VarState::at_lower);
        xn_.assign(ncols_, 0.0);
        xb_.assign(m_, 0.0);

        for (int j = 0; j < ncols_; ++j) {
            if (lb_[j] == ub_[j]) {
                state_[j] = VarState::fixed;
                xn_[j] = lb_[j];
            } else if (std::isfinite(lb_[j])) {
                state_[j] = VarState::at_lower;
                xn_[j] = lb_[j];
            } else if (std::isfinite(ub_[j])) {
                state_[j] = VarState::at_upper;
                xn_[j] = ub_[j];
            } else {
                state_[j] = VarState::free_zero;
                xn_[j] = 0.0;
            }
        }

        std::vector<double> resid(m_, 0.0);
        for (int i = 0; i < m_; ++i) resid[i] = p_.row_rhs(i);
        for (int j = 0; j < n_; ++j) {
            if (xn_[j] == 0.0) continue;
            for (auto [i, c] : cols_[j]) resid[i] -= c * xn_[j];
        }

        for (int i = 0; i < m_; ++i) {
            int s = n_ + i, a = n_ + m_ + i;
            bool slack_fits;
            switch (p_.row_sense(i)) {
                case Sense::le: slack_fits = resid[i] >= -o_.feas_tol; break;
                case Sense::ge: slack_fits = resid[i] <= o_.feas_tol; break;
                default: slack_fits = std::abs(resid[i]) <= o_.feas_tol; break;
            }
            if (slack_fits) {
                basis_[i] = s;
                basis_pos_[s] = i;
                state_[s] = VarState::basic;
                xb_[i] = resid[i];
                cols_[a] = {{i, 1.0}};
                lb_[a] = ub_[a] = 0.0;
                state_[a] = VarState::fixed;
            } else {
                double sgn = resid[i] >= 0.0 ? 1.0 : -1.0;
                cols_[a] = {{i, sgn}};
                lb_[a] = 0.0;
                ub_[a] = kInf;
                cost_[a] = 0.0;  // phase-1 pricing handles the unit cost
                basis_[i] = a;
                basis_pos_[a] = i;
                state_[a] = VarState::basic;
                xb_[i] = std::abs(resid[i]);
                // slack stays nonbasic at its zero bound
            }
        }
    }

    bool any_artificial_basic() const {
        for (int i = 0; i < m_; ++i)
            if (basis_[i] >= n_ + m_) return true;
        return false;
    }

    double phase1_objective() const {
        double v = 0.0;
        for (int i = 0; i < m_; ++i)
            if (basis_[i] >= n_ + m_) v += std::abs(xb_[i]);
        return v;
    }

    double cost_of(int j, bool phase1) const {
        if (phase1) return j >= n_ + m_ ? 1.0 : 0.0;
        return cost_[j];
    }

    void refactor() {
        Eigen::SparseMatrix<double> B(m_, m_);
        std::vector<Eigen::Triplet<double>> trips;
        for (int k = 0; k < m_; ++k)
            for (auto [i, c] : cols_[basis_[k]]) trips.emplace_back(i, k, c);
        B.setFromTriplets(trips.begin(), trips.end());
        lu_.compute(B);
        factor_ok_ = lu_.info() == Eigen::Success;
        if (!factor_ok_) debug("singular basis at iter %ld", iters_);
        etas_.clear();
        if (!factor_ok_) return;
        recompute_basics();
    }

    void recompute_basics() {
        Eigen::VectorXd r(m_);
        for (int i = 0; i < m_; ++i) r[i] = p_.row_rhs(i);
        for (int j = 0; j < ncols_; ++j) {
            if (state_[j] == VarState::basic) continue;
            double v = xn_[j];
            if (v == 0.0) continue;
            for (auto [i, c] : cols_[j]) r[i] -= c * v;
        }
        Eigen::VectorXd x = lu_.solve(r);  // fresh factor: no etas
        for (int k = 0; k < m_; ++k) xb_[k] = x[k];
    }

    Eigen::VectorXd ftran(int col) const {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(m_);
        for (auto [i, c] : cols_[col]) a[i] = c;
        Eigen::VectorXd w = lu_.solve(a);
        for (const Eta& e : etas_) {
            double t = w[e.pos] / e.pivot;
            if (t != 0.0) {
                for (auto [i, v] : e.nz) w[i] -= v * t;
            }
            w[e.pos] = t;
        }
        return w;
    }

    Eigen::VectorXd btran(const Eigen::VectorXd& c) const {
        Eigen::VectorXd y = c;
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            double s = y[it->pos];
            for (auto [i, v] : it->nz) s -= v * y[i];
            y[it->pos] = s / it->pivot;
        }
        return lu_.adjoint().solve(y).eval();
    }

    double reduced_cost(int j, const Eigen::VectorXd& y, bool phase1) const {
        double d = cost_of(j, phase1);
        for (auto [i, c] : cols_[j]) d -= y[i] * c;
        return d;
    }

    Outcome iterate(bool phase1) {
        int cleanup_rounds = 0;
        devex_.assign(ncols_, 1.0);  // fresh reference framework per phase
        for (;;) {
            if (iters_ >= o_.max_iterations) return Outcome::iter_limit;
            if (phase1 && phase1_objective() <= 1e-11) return Outcome::optimal;
            if (static_cast<int>(etas_.size()) >= o_.refactor_interval) {
                refactor();
                if (!factor_ok_) return Outcome::numerical;
            }

            Eigen::VectorXd cb(m_);
            for (int k = 0; k < m_; ++k) cb[k] = cost_of(basis_[k], phase1);
            Eigen::VectorXd y = btran(cb);

            int q = -1;
            double dq = 0.0, best = 0.0;
            for (int j = 0; j < ncols_; ++j) {
                VarState st = state_[j];
                if (st == VarState::basic || st == VarState::fixed) continue;
                double d = reduced_cost(j, y, phase1);
                double tol = o_.opt_tol * (1.0 + std::abs(cost_of(j, phase1)));
                double score = 0.0;
                if (st == VarState::at_lower && d < -tol) score = -d;
                else if (st == VarState::at_upper && d > tol) score = d;
                else if (st == VarState::free_zero && std::abs(d) > tol) score = std::abs(d);
                if (score > 0.0) {
                    if (bland_) { q = j; dq = d; break; }
                    // Devex pricing: largest |d|^2 / reference weight
                    double sc = score * score / devex_[j];
                    if (sc > best) { best = sc; q = j; dq = d; }
                }
            }
            if (q < 0) {
                // re-verify against a fresh factorization before declaring optimality
                if (!etas_.empty() && cleanup_rounds < 3) {
                    ++cleanup_rounds;
                    refactor();
                    if (!factor_ok_) return Outcome::numerical;
                    continue;
                }
                return Outcome::optimal;
            }

            double dir = 1.0;
            if (state_[q] == VarState::at_upper) dir = -1.0;
            else if (state_[q] == VarState::free_zero) dir = dq < 0.0 ? 1.0 : -1.0;

            Eigen::VectorXd w = ftran(q);

            // two-pass (Harris) ratio test: the own bound range competes
            // with the basic-variable bounds; among rows whose limit lands
            // within a feasibility-tolerance band of the minimum, take the
            // one with the largest pivot for numerical stability
            double own_range =
                (std::isfinite(ub_[q]) && std::isfinite(lb_[q])) ? ub_[q] - lb_[q] : kInf;

            auto row_limit = [&](int k, double slack, bool* to_upper) -> double {
                double wk = w[k];
                if (std::abs(wk) <= o_.pivot_tol) return kInf;
                double rate = -dir * wk;  // d(xb_k)/dt
                if (rate > 0.0) {
                    if (!std::isfinite(ub_[basis_[k]])) return kInf;
                    if (to_upper) *to_upper = true;
                    return std::max(0.0, (ub_[basis_[k]] + slack - xb_[k]) / rate);
                }
                if (!std::isfinite(lb_[basis_[k]])) return kInf;
                if (to_upper) *to_upper = false;
                return std::max(0.0, (lb_[basis_[k]] - slack - xb_[k]) / rate);
            };

            // pass 1: minimum step with bounds relaxed by feas_tol
            double t_relaxed = own_range;
            for (int k = 0; k < m_; ++k)
                t_relaxed = std::min(t_relaxed, row_limit(k, o_.feas_tol, nullptr));

            // pass 2: among rows whose strict limit fits under t_relaxed,
            // pick the stability winner (or the Bland candidate)
            int leave = -1;
            double t = own_range;
            double leave_pivot = 0.0;
            bool leave_to_upper = false;
            if (std::isfinite(t_relaxed)) {
                for (int k = 0; k < m_; ++k) {
                    bool to_upper = false;
                    double limit = row_limit(k, 0.0, &to_upper);
                    if (limit > t_relaxed) continue;
                    bool take = leave < 0 ||
                                (bland_ ? basis_[k] < basis_[leave]
                                        : std::abs(w[k]) > std::abs(leave_pivot));
                    if (take) {
                        leave = k;
                        t = limit;
                        leave_pivot = w[k];
                        leave_to_upper = to_upper;
                    }
                }
                // nothing binds more tightly than the entering bound flip
                if (leave >= 0 && own_range <= t_relaxed && own_range < t) {
                    leave = -1;
                    t = own_range;
                }
            }
            bool flip = leave < 0 && std::isfinite(t);

            if (leave < 0 && !flip) {
                if (phase1) {
                    debug("phase-1 ray: col %d dir %g iter %ld infeas %g", q, dir,
                          iters_, phase1_objective());
                    return Outcome::numerical;  // phase-1 objective is bounded below
                }
                return Outcome::unbounded;
            }

            ++iters_;
            if (t <= 1e-12) ++degen_run_; else degen_run_ = 0;
            if (degen_run_ > 500) bland_ = true;
            if (bland_ && t > 1e-9) { bland_ = false; degen_run_ = 0; }

            if (t > 0.0) {
                for (int k = 0; k < m_; ++k) xb_[k] -= dir * w[k] * t;
            }

            if (flip) {
                state_[q] = state_[q] == VarState::at_lower ? VarState::at_upper : VarState::at_lower;
                xn_[q] = state_[q] == VarState::at_lower ? lb_[q] : ub_[q];
                continue;
            }

            int out = basis_[leave];
            double enter_value = xn_[q] + dir * t;

            // Devex reference-weight update (Forrest-Goldfarb); the pivot
            // row in nonbasic coordinates comes from one extra BTRAN
            if (!bland_) {
                Eigen::VectorXd er = Eigen::VectorXd::Zero(m_);
                er[leave] = 1.0;
                Eigen::VectorXd rho = btran(er);
                double piv2 = w[leave] * w[leave];
                double wq = devex_[q];
                double wmax = 1.0;
                for (int j = 0; j < ncols_; ++j) {
                    VarState st = state_[j];
                    if (st == VarState::basic || st == VarState::fixed || j == q)
                        continue;
                    double arj = 0.0;
                    for (auto [i, c] : cols_[j]) arj += rho[i] * c;
                    if (arj != 0.0) {
                        double cand = arj * arj / piv2 * wq;
                        if (cand > devex_[j]) devex_[j] = cand;
                    }
                    if (devex_[j] > wmax) wmax = devex_[j];
                }
                devex_[out] = std::max(wq / piv2, 1.0);
                if (wmax > 1e7) devex_.assign(ncols_, 1.0);
            }

            Eta e;
            e.pos = leave;
            e.pivot = w[leave];
            for (int k = 0; k < m_; ++k)
                if (k != leave && std::abs(w[k]) > 1e-13) e.nz.emplace_back(k, w[k]);
            etas_.push_back(std::move(e));

            basis_[leave] = q;
            basis_pos_[q] = leave;
            basis_pos_[out] = -1;
            state_[q] = VarState::basic;
            xb_[leave] = enter_value;

            if (out >= n_ + m_) {
                // artificial never re-enters
                lb_[out] = ub_[out] = 0.0;
                xn_[out] = 0.0;
                state_[out] = VarState::fixed;
            } else if (leave_to_upper) {
                state_[out] = VarState::at_upper;
                xn_[out] = ub_[out];
            } else {
                state_[out] = VarState::at_lower;
                xn_[out] = lb_[out];
            }
        }
    }

    void assemble(Solution& sol) {
        refactor();
        if (!factor_ok_) { sol.status = SolveStatus::numerical_failure; return; }

        sol.status = SolveStatus::optimal;
        sol.iterations = iters_;
        sol.primal.assign(n_, 0.0);
        for (int j = 0; j < n_; ++j)
            sol.primal[j] = state_[j] == VarState::basic ? xb_[basis_pos_[j]] : xn_[j];

        Eigen::VectorXd cb(m_);
        for (int k = 0; k < m_; ++k) cb[k] = cost_[basis_[k]];
        Eigen::VectorXd y = btran(cb);
        sol.duals.assign(m_, 0.0);
        for (int i = 0; i < m_; ++i) sol.duals[i] = y[i];

        double obj = p_.objective_constant();
        for (int j = 0; j < n_; ++j) obj += p_.cost(j) * sol.primal[j];
        sol.objective = obj;

        // primal residual against the original rows
        double res = 0.0;
        for (int i = 0; i < m_; ++i) {
            double ax = 0.0;
            for (auto [j, c] : p_.row(i)) ax += c * sol.primal[j];
            double v = ax - p_.row_rhs(i);
            switch (p_.row_sense(i)) {
                case Sense::le: res = std::max(res, v); break;
                case Sense::ge: res = std::max(res, -v); break;
                case Sense::eq: res = std::max(res, std::abs(v)); break;
            }
        }
        sol.primal_residual = std::max(res, 0.0);

        // dual objective: y'b plus reduced-cost terms of nonbasic structurals at bound
        double dual_obj = 0.0;
        for (int i = 0; i < m_; ++i) dual_obj += y[i] * p_.row_rhs(i);
        for (int j = 0; j < n_; ++j) {
            if (state_[j] == VarState::basic) continue;
            double d = reduced_cost(j, y, false);
            dual_obj += d * sol.primal[j];
        }
        double primal_obj = obj - p_.objective_constant();
        sol.duality_gap = std::abs(primal_obj - dual_obj) / (1.0 + std::abs(primal_obj));
    }
};

}  // namespace

Solution solve_lp(const Problem& p, const SimplexOptions& opts) {
    if (p.num_rows() == 0) {
        // pure box problem: each variable sits at the cheap bound
        Solution sol;
        sol.primal.assign(p.num_vars(), 0.0);
        double obj = p.objective_constant();
        for (int j = 0; j < p.num_vars(); ++j) {
            double c = p.cost(j);
            double v;
            if (c > 0.0) v = p.lower(j);
            else if (c < 0.0) v = p.upper(j);
            else v = std::isfinite(p.lower(j)) ? p.lower(j)
                   : (std::isfinite(p.upper(j)) ? p.upper(j) : 0.0);
            if (!std::isfinite(v)) { sol.status = SolveStatus::unbounded; return sol; }
            sol.primal[j] = v;
            obj += c * v;
        }
        sol.status = SolveStatus::optimal;
        sol.objective = obj;
        return sol;
    }
    Simplex s(p, opts);
    Solution sol = s.run();
    if (sol.status == SolveStatus::numerical_failure) {
        // one conservative retry: tighter refactorization, stricter pivots
        SimplexOptions retry = opts;
        retry.refactor_interval = std::max(10, opts.refactor_interval / 4);
        retry.pivot_tol = std::max(opts.pivot_tol, 1e-9);
        Simplex s2(p, retry);
        sol = s2.run();
    }
    return sol;
}

namespace {

struct Node {
    double bound;
    long seq;
    std::vector<std::pair<int, double>> fixings;
    bool operator>(const Node& o) const {
        if (bound != o.bound) return bound > o.bound;
        return seq > o.seq;
    }
};

Solution solve_with_fixings(const Problem& base,
                            const std::vector<std::pair<int, double>>& fixings,
                            const SimplexOptions& o) {
    Problem p = base;
    for (auto [j, v] : fixings) p.set_bounds(VarHandle{j}, v, v);
    return solve_lp(p, o);
}

int most_fractional(const Solution& s, const std::vector<int>& bins) {
    int pick = -1;
    double best = 1e-6;
    for (int j : bins) {
        double v = s.primal[j];
        double frac = std::min(v - std::floor(v), std::ceil(v) - v);
        if (frac > best) { best = frac; pick = j; }
    }
    return pick;
}

}  // namespace

Solution solve_milp(const Problem& p, const MilpOptions& opts) {
    std::vector<int> bins = p.binary_vars();
    if (bins.empty()) return solve_lp(p, opts.lp);

    std::priority_queue<Node, std::vector<Node>, std::greater<Node>> open;
    long seq = 0, nodes = 0;
    Solution incumbent;
    incumbent.status = SolveStatus::infeasible;
    double incumbent_obj = kInf;

    Solution root = solve_lp(p, opts.lp);
    if (root.status != SolveStatus::optimal) return root;
    open.push(Node{root.objective, seq++, {}});

    double best_bound = root.objective;
    while (!open.empty() && nodes < opts.node_limit) {
        Node nd = open.top();
        open.pop();
        best_bound = nd.bound;
        double gap = (incumbent_obj - best_bound) / std::max(1.0, std::abs(incumbent_obj));
        if (incumbent_obj < kInf && gap <= opts.gap_tol) break;

        ++nodes;
        Solution s = nd.fixings.empty() ? root : solve_with_fixings(p, nd.fixings, opts.lp);
        if (s.status != SolveStatus::optimal) continue;
        if (s.objective >= incumbent_obj - 1e-12) continue;

        int branch = most_fractional(s, bins);
        if (branch < 0) {
            incumbent = s;
            incumbent_obj = s.objective;
            incumbent.restricted_duals = true;
            continue;
        }
        for (double v : {0.0, 1.0}) {
            auto fixings = nd.fixings;
            fixings.emplace_back(branch, v);
            open.push(Node{s.objective, seq++, std::move(fixings)});
        }
    }

    if (incumbent_obj == kInf) {
        Solution s;
        s.status = nodes >= opts.node_limit ? SolveStatus::node_limit : SolveStatus::infeasible;
        s.nodes = nodes;
        return s;
    }
    double final_bound = open.empty() ? incumbent_obj : std::min(open.top().bound, incumbent_obj);

    // re-solve with every binary pinned so the reported duals belong to a
    // plain LP, then flag them as restricted
    std::vector<std::pair<int, double>> all_fixed;
    for (int j : bins) all_fixed.emplace_back(j, std::round(incumbent.primal[j]));
    Solution fixed = solve_with_fixings(p, all_fixed, opts.lp);
    if (fixed.status == SolveStatus::optimal) incumbent = fixed;
    incumbent.restricted_duals = true;
    incumbent.mip_gap =
        (incumbent_obj - final_bound) / std::max(1.0, std::abs(incumbent_obj));
    incumbent.nodes = nodes;
    if (nodes >= opts.node_limit && incumbent.mip_gap > opts.gap_tol)
        incumbent.status = SolveStatus::node_limit;
    return incumbent;
}

}  // namespace hygrid::lp
