#include "hygrid/lp.hpp"

#include <cstdio>

namespace hygrid::lp {

namespace {

std::string vname(const Problem& p, int j) {
    const std::string& n = p.var_name(j);
    return n.empty() ? "x" + std::to_string(j) : n;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_expr(std::ostream& os, const Problem& p,
                const std::vector<std::pair<int, double>>& terms) {
    bool first = true;
    for (auto [j, c] : terms) {
        if (first) {
            os << (c < 0 ? "- " : "") << num(std::abs(c));
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ") << num(std::abs(c));
        }
        os << ' ' << vname(p, j);
    }
    if (first) os << "0";
}

}  // namespace

void Problem::write_lp(std::ostream& os) const {
    os << "Minimize\n obj: ";
    std::vector<std::pair<int, double>> obj;
    for (int j = 0; j < num_vars(); ++j)
        if (cost_[j] != 0.0) obj.emplace_back(j, cost_[j]);
    write_expr(os, *this, obj);
    os << "\nSubject To\n";
    for (int i = 0; i < num_rows(); ++i) {
        os << ' ' << (tags_[i].empty() ? "c" + std::to_string(i) : tags_[i]) << ": ";
        write_expr(os, *this, rows_[i]);
        switch (sense_[i]) {
            case Sense::le: os << " <= "; break;
            case Sense::eq: os << " = "; break;
            case Sense::ge: os << " >= "; break;
        }
        os << num(rhs_[i]) << '\n';
    }
    os << "Bounds\n";
    for (int j = 0; j < num_vars(); ++j) {
        const std::string n = vname(*this, j);
        if (lower_[j] == upper_[j]) {
            os << ' ' << n << " = " << num(lower_[j]) << '\n';
        } else {
            os << ' ';
            if (lower_[j] == -kInf)
                os << "-inf";
            else
                os << num(lower_[j]);
            os << " <= " << n << " <= ";
            if (upper_[j] == kInf)
                os << "+inf";
            else
                os << num(upper_[j]);
            os << '\n';
        }
    }
    bool any_bin = false;
    for (int j = 0; j < num_vars(); ++j)
        if (kind_[j] == VarKind::binary) {
            if (!any_bin) os << "Binaries\n";
            any_bin = true;
            os << ' ' << vname(*this, j) << '\n';
        }
    os << "End\n";
}

}  // namespace hygrid::lp
