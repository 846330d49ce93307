#include "hygrid/lp.hpp"

#include <cmath>
#include <stdexcept>

namespace hygrid::lp {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::unbounded: return "unbounded";
        case SolveStatus::iteration_limit: return "iteration_limit";
        case SolveStatus::node_limit: return "node_limit";
        case SolveStatus::numerical_failure: return "numerical_failure";
    }
    return "?";
}

VarHandle Problem::add_var(double lower, double upper, double cost, VarKind kind,
                           std::string name) {
    if (lower > upper) throw std::invalid_argument("variable bounds crossed: " + name);
    if (kind == VarKind::binary && (lower < 0.0 || upper > 1.0))
        throw std::invalid_argument("binary variable bounds outside [0,1]: " + name);
    lower_.push_back(lower);
    upper_.push_back(upper);
    cost_.push_back(cost);
    kind_.push_back(kind);
    names_.push_back(std::move(name));
    return VarHandle{num_vars() - 1};
}

int Problem::add_constraint(const std::vector<std::pair<VarHandle, double>>& terms,
                            Sense sense, double rhs, std::string tag) {
    std::vector<std::pair<int, double>> row;
    row.reserve(terms.size());
    for (auto [v, c] : terms) {
        if (!v.valid() || v.idx >= num_vars())
            throw std::invalid_argument("unbound variable handle in constraint");
        if (!std::isfinite(c)) throw std::invalid_argument("non-finite coefficient");
        if (c == 0.0) continue;
        for (auto& [j, _] : row)
            if (j == v.idx) throw std::invalid_argument("duplicate variable in row");
        row.emplace_back(v.idx, c);
    }
    rows_.push_back(std::move(row));
    sense_.push_back(sense);
    rhs_.push_back(rhs);
    int idx = num_rows() - 1;
    if (!tag.empty()) tag_index_.emplace(tag, idx);
    tags_.push_back(std::move(tag));
    return idx;
}

void Problem::set_cost(VarHandle v, double cost) { cost_.at(v.idx) = cost; }
void Problem::set_rhs(int row, double rhs) { rhs_.at(row) = rhs; }

void Problem::set_bounds(VarHandle v, double lower, double upper) {
    if (lower > upper) throw std::invalid_argument("variable bounds crossed");
    lower_.at(v.idx) = lower;
    upper_.at(v.idx) = upper;
}

int Problem::row_by_tag(const std::string& tag) const {
    auto it = tag_index_.find(tag);
    return it == tag_index_.end() ? -1 : it->second;
}

std::vector<int> Problem::binary_vars() const {
    std::vector<int> out;
    for (int j = 0; j < num_vars(); ++j)
        if (kind_[j] == VarKind::binary) out.push_back(j);
    return out;
}

double dual_of(const Problem& p, const Solution& s, const std::string& tag) {
    if (!s.optimal()) throw std::runtime_error("dual_of: solution not optimal");
    int row = p.row_by_tag(tag);
    if (row < 0) throw std::out_of_range("dual_of: unknown tag " + tag);
    return s.duals[row];
}

}  // namespace hygrid::lp
