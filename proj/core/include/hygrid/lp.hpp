#ifndef HYGRID_LP_HPP
#define HYGRID_LP_HPP

#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hygrid::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { continuous, binary };
enum class Sense { le, eq, ge };

enum class SolveStatus {
    optimal,
    infeasible,
    unbounded,
    iteration_limit,
    node_limit,
    numerical_failure,
};

const char* to_string(SolveStatus s);

struct VarHandle {
    int idx = -1;
    bool valid() const { return idx >= 0; }
};

/// Sparse minimization LP/MILP in natural form: bounded variables,
/// rows with <= / = / >= sense. Rows carry an optional string tag so
/// callers can locate them again (nodal balance rows for DLMP).
class Problem {
public:
    VarHandle add_var(double lower, double upper, double cost = 0.0,
                      VarKind kind = VarKind::continuous, std::string name = {});

    /// Terms must not repeat a variable within one row.
    int add_constraint(const std::vector<std::pair<VarHandle, double>>& terms,
                       Sense sense, double rhs, std::string tag = {});

    void set_cost(VarHandle v, double cost);
    void add_objective_constant(double c) { obj_constant_ += c; }
    void set_rhs(int row, double rhs);
    void set_bounds(VarHandle v, double lower, double upper);

    int num_vars() const { return static_cast<int>(lower_.size()); }
    int num_rows() const { return static_cast<int>(rhs_.size()); }
    double lower(int j) const { return lower_[j]; }
    double upper(int j) const { return upper_[j]; }
    double cost(int j) const { return cost_[j]; }
    VarKind kind(int j) const { return kind_[j]; }
    const std::string& var_name(int j) const { return names_[j]; }
    double objective_constant() const { return obj_constant_; }
    Sense row_sense(int i) const { return sense_[i]; }
    double row_rhs(int i) const { return rhs_[i]; }
    const std::string& row_tag(int i) const { return tags_[i]; }
    const std::vector<std::pair<int, double>>& row(int i) const { return rows_[i]; }

    /// -1 when no row carries the tag.
    int row_by_tag(const std::string& tag) const;

    std::vector<int> binary_vars() const;

    /// Plain-text dump (CPLEX LP interchange format) for debugging
    /// against external solvers.
    void write_lp(std::ostream& os) const;

private:
    std::vector<double> lower_, upper_, cost_;
    std::vector<VarKind> kind_;
    std::vector<std::string> names_;
    std::vector<std::vector<std::pair<int, double>>> rows_;
    std::vector<Sense> sense_;
    std::vector<double> rhs_;
    std::vector<std::string> tags_;
    std::unordered_map<std::string, int> tag_index_;
    double obj_constant_ = 0.0;
};

struct Solution {
    SolveStatus status = SolveStatus::numerical_failure;
    std::vector<double> primal;  // per variable
    std::vector<double> duals;   // per row; d(obj)/d(rhs) for a minimization
    double objective = 0.0;
    // post-solve diagnostics
    double primal_residual = 0.0;  // max |Ax - b| violation over rows
    double duality_gap = 0.0;      // |c'x - dual objective| / (1 + |c'x|)
    long iterations = 0;
    // MILP extras
    double mip_gap = 0.0;
    long nodes = 0;
    bool restricted_duals = false;  // duals from the LP with binaries fixed

    bool optimal() const { return status == SolveStatus::optimal; }
};

struct SimplexOptions {
    double feas_tol = 1e-7;      // bound/row feasibility
    double opt_tol = 1e-9;       // reduced-cost optimality
    double pivot_tol = 1e-10;    // minimum acceptable pivot magnitude
    int refactor_interval = 100; // eta vectors between basis refactorizations
    long max_iterations = 2'000'000;
};

/// Bounded-variable revised primal simplex, two phases, with exact
/// duals. Deterministic: identical Problem gives an identical Solution.
Solution solve_lp(const Problem& p, const SimplexOptions& opts = {});

struct MilpOptions {
    double gap_tol = 1e-4;
    long node_limit = 100'000;
    SimplexOptions lp;
};

/// Best-first branch and bound over the binary variables; branches on
/// the most fractional one, ties to the lowest index.
Solution solve_milp(const Problem& p, const MilpOptions& opts = {});

/// Dual value of the row carrying `tag`; throws std::out_of_range on an
/// unknown tag. Requires an optimal solution.
double dual_of(const Problem& p, const Solution& s, const std::string& tag);

}  // namespace hygrid::lp

#endif
