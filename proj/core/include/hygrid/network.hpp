#ifndef HYGRID_NETWORK_HPP
#define HYGRID_NETWORK_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hygrid/lp.hpp"

namespace hygrid::net {

enum class LoadClass { critical, moderately_critical, non_critical };

LoadClass load_class_from_string(const std::string& s);
const char* to_string(LoadClass c);

struct Bus {
    int id = 0;            // 1-based node index
    double p_load_kw = 0;  // real demand base
    double q_load_kvar = 0;
    LoadClass load_class = LoadClass::non_critical;
};

struct Line {
    int from_bus = 0;
    int to_bus = 0;
    double r_ohm = 0;
    double x_ohm = 0;
    double r_pu = 0;  // on (v_base, s_base)
    double x_pu = 0;
    double flow_limit_kva = lp::kInf;
};

/// Validated radial feeder. Immutable after parse; safe to share
/// read-only across concurrent case runs.
struct Network {
    std::vector<Bus> buses;   // sorted by id
    std::vector<Line> lines;  // oriented parent -> child after validation
    double v_base_kv = 12.66;
    double s_base_mva = 10.0;
    double v_min = 0.95;
    double v_max = 1.05;
    int slack_bus = 1;

    int num_buses() const { return static_cast<int>(buses.size()); }
    int bus_index(int id) const;  // position in buses, -1 if absent
    double total_p_load_kw() const;
    double total_q_load_kvar() const;
    /// parent bus id per bus id (slack -> 0), in BFS order from the slack
    std::vector<int> parent_of() const;
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Format: first non-comment line "v_base_kv,s_base_mva", then one line
/// per branch: from,to,r_ohm,x_ohm,p_kw,q_kvar,load_class. The load on
/// a row belongs to the `to` bus; the slack bus is the one that never
/// appears as `to`.
Network parse_network(std::istream& source);
Network parse_network_file(const std::string& path);

/// The canonical 33-bus feeder, embedded.
Network builtin_ieee33();
const char* builtin_ieee33_text();

/// True iff the lines form a spanning tree rooted at the slack bus.
bool validate_radial(const Network& net);

/// Per-bus per-hour voltage magnitudes (p.u.), buses in net order.
struct VoltageProfile {
    std::vector<std::vector<double>> v;  // [hour][bus]
    double min_v = 1.0, max_v = 1.0;
};

/// Linear terms contributing to each bus-hour net injection (MW /
/// MVAr, positive = generation) of an LP under construction.
struct InjectionVars {
    using Terms = std::vector<std::pair<lp::VarHandle, double>>;
    std::vector<std::vector<Terms>> p;  // [hour][bus]
    std::vector<std::vector<Terms>> q;
};

/// Variables created by build_lindistflow, for unpacking a solution.
struct LinDistFlowVars {
    std::vector<std::vector<lp::VarHandle>> v_sq;    // [hour][bus], squared p.u.
    std::vector<std::vector<lp::VarHandle>> fp, fq;  // [hour][line], MW / MVAr
};

/// Emits lossless LinDistFlow in squared-voltage form: per hour, nodal
/// real/reactive balance rows (tagged "nbal:<bus>:<hour>" /
/// "nqbal:<bus>:<hour>"), the voltage recursion
/// v_child = v_parent - 2(r.P + x.Q) in per-unit, the [v_min^2, v_max^2]
/// band as bounds, and the slack voltage pinned at 1.
/// p_load_mw/q_load_mvar are [hour][bus] demands.
LinDistFlowVars build_lindistflow(lp::Problem& prob, const Network& net,
                                  const InjectionVars& inj,
                                  const std::vector<std::vector<double>>& p_load_mw,
                                  const std::vector<std::vector<double>>& q_load_mvar);

/// Independent forward sweep: recomputes voltages from per-bus net
/// injections (MW/MVAr, [hour][bus]) without touching the solver path.
VoltageProfile verify_voltages(const Network& net,
                               const std::vector<std::vector<double>>& p_inj_mw,
                               const std::vector<std::vector<double>>& q_inj_mvar);

}  // namespace hygrid::net

#endif
