#include "hygrid/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

namespace hygrid::net {

LoadClass load_class_from_string(const std::string& s) {
    if (s == "critical") return LoadClass::critical;
    if (s == "moderately-critical") return LoadClass::moderately_critical;
    if (s == "non-critical") return LoadClass::non_critical;
    throw ParseError("unknown load class: " + s);
}

const char* to_string(LoadClass c) {
    switch (c) {
        case LoadClass::critical: return "critical";
        case LoadClass::moderately_critical: return "moderately-critical";
        case LoadClass::non_critical: return "non-critical";
    }
    return "?";
}

int Network::bus_index(int id) const {
    for (int i = 0; i < num_buses(); ++i)
        if (buses[i].id == id) return i;
    return -1;
}

double Network::total_p_load_kw() const {
    double s = 0;
    for (const Bus& b : buses) s += b.p_load_kw;
    return s;
}

double Network::total_q_load_kvar() const {
    double s = 0;
    for (const Bus& b : buses) s += b.q_load_kvar;
    return s;
}

std::vector<int> Network::parent_of() const {
    std::map<int, std::vector<std::pair<int, int>>> adj;  // bus -> (neighbor, line)
    for (size_t l = 0; l < lines.size(); ++l) {
        adj[lines[l].from_bus].emplace_back(lines[l].to_bus, static_cast<int>(l));
        adj[lines[l].to_bus].emplace_back(lines[l].from_bus, static_cast<int>(l));
    }
    int max_id = 0;
    for (const Bus& b : buses) max_id = std::max(max_id, b.id);
    std::vector<int> parent(max_id + 1, -1);
    std::queue<int> q;
    q.push(slack_bus);
    parent[slack_bus] = 0;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (auto [v, _] : adj[u])
            if (parent[v] == -1) {
                parent[v] = u;
                q.push(v);
            }
    }
    return parent;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        // trim
        size_t a = field.find_first_not_of(" \t\r");
        size_t b = field.find_last_not_of(" \t\r");
        out.push_back(a == std::string::npos ? "" : field.substr(a, b - a + 1));
    }
    return out;
}

void validate(Network& net) {
    std::map<int, int> seen;
    for (const Bus& b : net.buses) {
        if (++seen[b.id] > 1)
            throw ParseError("duplicate bus id " + std::to_string(b.id));
        if (b.p_load_kw < 0) throw ParseError("negative load at bus " + std::to_string(b.id));
    }
    for (const Line& l : net.lines) {
        if (l.r_ohm < 0 || l.x_ohm < 0)
            throw ParseError("negative impedance on line " + std::to_string(l.from_bus) +
                             "-" + std::to_string(l.to_bus));
        if (!seen.count(l.from_bus) || !seen.count(l.to_bus))
            throw ParseError("line references unknown bus");
    }
    if (!seen.count(net.slack_bus)) throw ParseError("missing slack bus");
    if (!validate_radial(net))
        throw ParseError("network is not a spanning tree rooted at the slack bus");

    // orient every line parent -> child
    std::vector<int> parent = net.parent_of();
    for (Line& l : net.lines)
        if (parent[l.from_bus] == l.to_bus) std::swap(l.from_bus, l.to_bus);

    double z_base = net.v_base_kv * net.v_base_kv / net.s_base_mva;
    for (Line& l : net.lines) {
        l.r_pu = l.r_ohm / z_base;
        l.x_pu = l.x_ohm / z_base;
    }
    std::sort(net.buses.begin(), net.buses.end(),
              [](const Bus& a, const Bus& b) { return a.id < b.id; });
}

}  // namespace

bool validate_radial(const Network& net) {
    if (net.lines.size() + 1 != net.buses.size()) return false;
    if (net.bus_index(net.slack_bus) < 0) return false;
    std::vector<int> parent = net.parent_of();
    for (const Bus& b : net.buses)
        if (parent[b.id] == -1) return false;  // disconnected
    return true;
}

Network parse_network(std::istream& source) {
    Network net;
    std::string line;
    bool have_header = false;
    std::map<int, Bus> buses;
    int lineno = 0;
    while (std::getline(source, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto f = split_csv(line);
        try {
            if (!have_header) {
                if (f.size() != 2) throw ParseError("header must be v_base_kv,s_base_mva");
                net.v_base_kv = std::stod(f[0]);
                net.s_base_mva = std::stod(f[1]);
                have_header = true;
                continue;
            }
            if (f.size() != 7)
                throw ParseError("expected from,to,r_ohm,x_ohm,p_kw,q_kvar,load_class");
            Line l;
            l.from_bus = std::stoi(f[0]);
            l.to_bus = std::stoi(f[1]);
            l.r_ohm = std::stod(f[2]);
            l.x_ohm = std::stod(f[3]);
            Bus b;
            b.id = l.to_bus;
            b.p_load_kw = std::stod(f[4]);
            b.q_load_kvar = std::stod(f[5]);
            b.load_class = load_class_from_string(f[6]);
            // a repeated `to` bus means a loop-closing line: keep the line,
            // radiality validation rejects the topology with a clear message
            buses.try_emplace(b.id, b);
            buses.try_emplace(l.from_bus, Bus{l.from_bus, 0, 0, LoadClass::non_critical});
            net.lines.push_back(l);
        } catch (const std::invalid_argument&) {
            throw ParseError("line " + std::to_string(lineno) + ": bad number");
        }
    }
    if (!have_header) throw ParseError("empty network file");
    // slack: the bus that never appears as `to`
    std::vector<int> slack_candidates;
    for (auto& [id, b] : buses) {
        bool is_to = false;
        for (const Line& l : net.lines)
            if (l.to_bus == id) { is_to = true; break; }
        if (!is_to) slack_candidates.push_back(id);
    }
    if (slack_candidates.size() != 1)
        throw ParseError("missing slack bus (expected exactly one root, found " +
                         std::to_string(slack_candidates.size()) + ")");
    net.slack_bus = slack_candidates[0];
    for (auto& [_, b] : buses) net.buses.push_back(b);
    validate(net);
    return net;
}

Network parse_network_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open network file: " + path);
    return parse_network(f);
}

Network builtin_ieee33() {
    std::istringstream ss(builtin_ieee33_text());
    return parse_network(ss);
}

LinDistFlowVars build_lindistflow(lp::Problem& prob, const Network& net,
                                  const InjectionVars& inj,
                                  const std::vector<std::vector<double>>& p_load_mw,
                                  const std::vector<std::vector<double>>& q_load_mvar) {
    const int nb = net.num_buses();
    const int nl = static_cast<int>(net.lines.size());
    const int horizon = static_cast<int>(p_load_mw.size());
    const double s_mva = net.s_base_mva;
    const int slack_idx = net.bus_index(net.slack_bus);

    LinDistFlowVars out;
    out.v_sq.resize(horizon);
    out.fp.resize(horizon);
    out.fq.resize(horizon);

    // per bus: incident lines, split by direction
    std::vector<std::vector<int>> in_lines(nb), out_lines(nb);
    for (int l = 0; l < nl; ++l) {
        in_lines[net.bus_index(net.lines[l].to_bus)].push_back(l);
        out_lines[net.bus_index(net.lines[l].from_bus)].push_back(l);
    }

    for (int h = 0; h < horizon; ++h) {
        auto& vs = out.v_sq[h];
        auto& fp = out.fp[h];
        auto& fq = out.fq[h];
        vs.resize(nb);
        fp.resize(nl);
        fq.resize(nl);
        for (int b = 0; b < nb; ++b) {
            double lo = net.v_min * net.v_min, hi = net.v_max * net.v_max;
            if (b == slack_idx) lo = hi = 1.0;
            vs[b] = prob.add_var(lo, hi, 0.0, lp::VarKind::continuous,
                                 "vsq:" + std::to_string(net.buses[b].id) + ":" + std::to_string(h));
        }
        for (int l = 0; l < nl; ++l) {
            fp[l] = prob.add_var(-lp::kInf, lp::kInf, 0.0, lp::VarKind::continuous,
                                 "fp:" + std::to_string(l) + ":" + std::to_string(h));
            fq[l] = prob.add_var(-lp::kInf, lp::kInf, 0.0, lp::VarKind::continuous,
                                 "fq:" + std::to_string(l) + ":" + std::to_string(h));
        }

        for (int b = 0; b < nb; ++b) {
            std::vector<std::pair<lp::VarHandle, double>> prow, qrow;
            for (int l : in_lines[b]) {
                prow.emplace_back(fp[l], 1.0);
                qrow.emplace_back(fq[l], 1.0);
            }
            for (int l : out_lines[b]) {
                prow.emplace_back(fp[l], -1.0);
                qrow.emplace_back(fq[l], -1.0);
            }
            if (h < static_cast<int>(inj.p.size()) && b < static_cast<int>(inj.p[h].size()))
                for (auto& t : inj.p[h][b]) prow.push_back(t);
            if (h < static_cast<int>(inj.q.size()) && b < static_cast<int>(inj.q[h].size()))
                for (auto& t : inj.q[h][b]) qrow.push_back(t);
            int id = net.buses[b].id;
            prob.add_constraint(prow, lp::Sense::eq, p_load_mw[h][b],
                                "nbal:" + std::to_string(id) + ":" + std::to_string(h));
            prob.add_constraint(qrow, lp::Sense::eq, q_load_mvar[h][b],
                                "nqbal:" + std::to_string(id) + ":" + std::to_string(h));
        }

        // v_child = v_parent - 2 (r P + x Q), all per-unit
        for (int l = 0; l < nl; ++l) {
            const Line& ln = net.lines[l];
            int pi = net.bus_index(ln.from_bus), ci = net.bus_index(ln.to_bus);
            prob.add_constraint({{vs[ci], 1.0},
                                 {vs[pi], -1.0},
                                 {fp[l], 2.0 * ln.r_pu / s_mva},
                                 {fq[l], 2.0 * ln.x_pu / s_mva}},
                                lp::Sense::eq, 0.0);
        }
    }
    return out;
}

VoltageProfile verify_voltages(const Network& net,
                               const std::vector<std::vector<double>>& p_inj_mw,
                               const std::vector<std::vector<double>>& q_inj_mvar) {
    const int nb = net.num_buses();
    const int horizon = static_cast<int>(p_inj_mw.size());
    if (horizon > 0 && static_cast<int>(p_inj_mw[0].size()) != nb)
        throw std::invalid_argument("injection set incomplete");

    // order lines so that children come after parents (BFS from slack)
    std::vector<int> parent = net.parent_of();
    std::vector<int> order;  // line indices, parent-first
    {
        std::vector<std::vector<int>> children(nb);
        for (size_t l = 0; l < net.lines.size(); ++l)
            children[net.bus_index(net.lines[l].from_bus)].push_back(static_cast<int>(l));
        std::queue<int> q;
        q.push(net.bus_index(net.slack_bus));
        while (!q.empty()) {
            int b = q.front();
            q.pop();
            for (int l : children[b]) {
                order.push_back(l);
                q.push(net.bus_index(net.lines[l].to_bus));
            }
        }
    }

    VoltageProfile vp;
    vp.v.assign(horizon, std::vector<double>(nb, 1.0));
    vp.min_v = 1.0;
    vp.max_v = 1.0;
    for (int h = 0; h < horizon; ++h) {
        // line flow = net downstream consumption (lossless): accumulate leaf-first
        std::vector<double> sub_p(nb), sub_q(nb);
        for (int b = 0; b < nb; ++b) {
            sub_p[b] = -p_inj_mw[h][b];
            sub_q[b] = -q_inj_mvar[h][b];
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const Line& ln = net.lines[*it];
            int pi = net.bus_index(ln.from_bus), ci = net.bus_index(ln.to_bus);
            sub_p[pi] += sub_p[ci];
            sub_q[pi] += sub_q[ci];
        }
        std::vector<double> vsq(nb, 1.0);
        for (int l : order) {
            const Line& ln = net.lines[l];
            int pi = net.bus_index(ln.from_bus), ci = net.bus_index(ln.to_bus);
            double p_pu = sub_p[ci] / net.s_base_mva;  // flow toward child
            double q_pu = sub_q[ci] / net.s_base_mva;
            vsq[ci] = vsq[pi] - 2.0 * (ln.r_pu * p_pu + ln.x_pu * q_pu);
        }
        for (int b = 0; b < nb; ++b) {
            double v = std::sqrt(std::max(vsq[b], 0.0));
            vp.v[h][b] = v;
            vp.min_v = std::min(vp.min_v, v);
            vp.max_v = std::max(vp.max_v, v);
        }
    }
    return vp;
}

}  // namespace hygrid::net
