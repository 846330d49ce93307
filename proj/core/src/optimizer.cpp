#include "hygrid/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hygrid::opt {

using lp::kInf;
using lp::Problem;
using lp::Sense;
using lp::VarHandle;
using lp::VarKind;

const std::vector<std::string>& CaseConfig::all_case_ids() {
    static const std::vector<std::string> ids = {"1",  "2",  "3",  "4",  "5a",
                                                 "5b", "6a", "6b", "7a", "7b"};
    return ids;
}

CaseConfig CaseConfig::for_case(const std::string& id) {
    CaseConfig c;
    c.case_id = id;
    if (id == "1") return c;
    c.has_pv = true;
    if (id == "2") return c;
    if (id == "3") { c.battery = BatteryKind::liion_4h; return c; }
    if (id == "4") { c.battery = BatteryKind::flow_10h; return c; }
    if (id == "5a") { c.has_h2 = true; return c; }
    if (id == "5b") { c.has_h2 = true; c.update_dg_lcoe = true; return c; }
    if (id == "6a") { c.has_h2 = true; c.battery = BatteryKind::liion_4h; return c; }
    if (id == "6b") {
        c.has_h2 = true;
        c.battery = BatteryKind::liion_4h;
        c.curtail_penalty = 50.0;
        return c;
    }
    if (id == "7a" || id == "7b") {
        c.has_h2 = true;
        c.battery = BatteryKind::flow_10h;
        c.pv_penetration = 1.5;
        c.dgs_priced_out = true;
        // fossil-free scenario: grid import is a fossil source too, so it is
        // priced at the same cap as the DGs rather than removed outright
        c.import_price = c.lcoe_price_cap;
        if (id == "7b") { c.tank_init_frac = 0.5; c.tank_final_frac = 0.5; }
        return c;
    }
    throw std::invalid_argument("unknown case id: " + id);
}

AssetSet default_assets(const CaseConfig& cfg) {
    AssetSet a;
    if (cfg.has_dgs) a.dgs = assets::default_dgs();
    if (cfg.dgs_priced_out)
        for (auto& g : a.dgs) g.lcoe = cfg.lcoe_price_cap;
    a.pv = assets::default_pv();
    a.pv.penetration = cfg.pv_penetration;
    switch (cfg.battery) {
        case BatteryKind::liion_4h: a.battery = assets::liion_4h(); break;
        case BatteryKind::flow_10h: a.battery = assets::flow_10h(); break;
        case BatteryKind::none: break;
    }
    a.h2 = assets::default_h2();
    a.h2.init_frac = cfg.tank_init_frac;
    a.h2.final_frac = cfg.tank_final_frac;
    return a;
}

double update_lcoe(const assets::DgSpec& spec, double actual_cf, double price_cap) {
    if (actual_cf < 0.001) return price_cap;
    return std::min(spec.nrel_cf / actual_cf * spec.lcoe, price_cap);
}

double ScheduleResult::power_balance_residual() const {
    double worst = 0;
    for (int h = 0; h < horizon; ++h) {
        double in = pv_disp_mw.empty() ? 0 : pv_disp_mw[h];
        for (const auto& g : dg_mw) in += g[h];
        if (!batt_dis_mw.empty()) in += batt_dis_mw[h];
        if (!fc_mw.empty()) in += fc_mw[h];
        in += import_mw[h];
        double out = load_mw[h];
        if (!batt_ch_mw.empty()) out += batt_ch_mw[h];
        if (!ez_mw.empty()) out += ez_mw[h];
        worst = std::max(worst, std::abs(in - out));
    }
    return worst;
}

std::vector<int> ScheduleResult::simultaneous_flow_hours() const {
    std::vector<int> hours;
    for (int h = 0; h < horizon; ++h) {
        bool batt = !batt_ch_mw.empty() && batt_ch_mw[h] > 1e-6 && batt_dis_mw[h] > 1e-6;
        bool h2 = !ez_mw.empty() && ez_mw[h] > 1e-6 && fc_mw[h] > 1e-6;
        if (batt || h2) hours.push_back(h);
    }
    return hours;
}

namespace {

struct Builder {
    const CaseConfig& cfg;
    const net::Network& network;
    const AssetSet& a;
    const profiles::ProfileSet& prof;
    Problem prob;
    VarMap vars;
    int H;
    bool full;
    net::InjectionVars inj;  // full mode accumulation

    Builder(const CaseConfig& c, const net::Network& n, const AssetSet& sp,
            const profiles::ProfileSet& p)
        : cfg(c), network(n), a(sp), prof(p) {
        H = std::min(cfg.horizon, prof.horizon());
        if (H <= 0) throw std::invalid_argument("empty profile set");
        full = cfg.network == NetworkMode::full;
        if (full) {
            inj.p.assign(H, std::vector<net::InjectionVars::Terms>(network.num_buses()));
            inj.q.assign(H, std::vector<net::InjectionVars::Terms>(network.num_buses()));
        }
    }

    void add_injection(int bus_id, int h, VarHandle v, double coef) {
        if (!full) return;
        int b = network.bus_index(bus_id);
        if (b < 0) throw std::invalid_argument("asset bus not in network: " + std::to_string(bus_id));
        inj.p[h][b].emplace_back(v, coef);
    }

    void add_reactive(int bus_id, int h, VarHandle v, double coef) {
        if (!full) return;
        inj.q[h][network.bus_index(bus_id)].emplace_back(v, coef);
    }

    double capex_coef_mw(double per_kw, double lifetime) const {
        return assets::horizon_capex(1000.0, per_kw, lifetime, a.fin);
    }

    void build() {
        build_dgs();
        build_pv();
        build_import();
        build_battery();
        build_h2();
        if (full) build_network();
        else build_copperplate_balance();
    }

    // per-hour balance terms collected for copperplate mode
    std::vector<std::vector<std::pair<VarHandle, double>>> balance;

    void add_balance(int h, VarHandle v, double coef) { balance[h].emplace_back(v, coef); }

    void build_dgs() {
        balance.assign(H, {});
        int ndg = static_cast<int>(a.dgs.size());
        vars.dg_p.resize(ndg);
        vars.dg_u.resize(ndg);
        for (int g = 0; g < ndg; ++g) {
            const auto& spec = a.dgs[g];
            bool commit = spec.no_load_cost > 0 || spec.min_output_mw > 0;
            VarKind ukind = cfg.commitment == CommitmentMode::exact
                                ? VarKind::binary
                                : VarKind::continuous;
            for (int h = 0; h < H; ++h) {
                VarHandle p = prob.add_var(0, spec.capacity_mw, spec.lcoe,
                                           VarKind::continuous,
                                           "dg:" + spec.name + ":" + std::to_string(h));
                vars.dg_p[g].push_back(p);
                add_balance(h, p, 1.0);
                add_injection(spec.bus, h, p, 1.0);
                if (commit) {
                    VarHandle u = prob.add_var(0, 1, spec.no_load_cost, ukind,
                                               "u:" + spec.name + ":" + std::to_string(h));
                    vars.dg_u[g].push_back(u);
                    prob.add_constraint({{p, 1.0}, {u, -spec.capacity_mw}}, Sense::le, 0);
                    if (spec.min_output_mw > 0)
                        prob.add_constraint({{p, 1.0}, {u, -spec.min_output_mw}}, Sense::ge, 0);
                }
                if (h > 0 && spec.ramp_mw_per_h > 0 && std::isfinite(spec.ramp_mw_per_h)) {
                    VarHandle rs = prob.add_var(-spec.ramp_mw_per_h, spec.ramp_mw_per_h, 0);
                    prob.add_constraint(
                        {{p, 1.0}, {vars.dg_p[g][h - 1], -1.0}, {rs, -1.0}}, Sense::eq, 0);
                }
                if (full) {
                    VarHandle q = prob.add_var(-spec.capacity_mw, spec.capacity_mw, 0);
                    add_reactive(spec.bus, h, q, 1.0);
                }
            }
        }
    }

    void build_pv() {
        if (!cfg.has_pv) return;
        int nu = static_cast<int>(a.pv.buses.size());
        vars.pv_disp.resize(nu);
        double unit_peak = 0;
        for (int h = 0; h < H; ++h)
            unit_peak = std::max(unit_peak, prof.pv_avail_mw[h] / nu);
        for (int u = 0; u < nu; ++u) {
            for (int h = 0; h < H; ++h) {
                double avail = prof.pv_avail_mw[h] / nu;
                VarHandle p = prob.add_var(0, avail, a.pv.lcoe - cfg.curtail_penalty,
                                           VarKind::continuous,
                                           "pv:" + std::to_string(u) + ":" + std::to_string(h));
                prob.add_objective_constant(cfg.curtail_penalty * avail);
                vars.pv_disp[u].push_back(p);
                add_balance(h, p, 1.0);
                add_injection(a.pv.buses[u], h, p, 1.0);
                if (full) {
                    VarHandle q = prob.add_var(-unit_peak, unit_peak, 0);
                    add_reactive(a.pv.buses[u], h, q, 1.0);
                }
            }
        }
    }

    void build_import() {
        for (int h = 0; h < H; ++h) {
            VarHandle p = prob.add_var(0, kInf, cfg.import_price, VarKind::continuous,
                                       "imp:" + std::to_string(h));
            vars.import_mw.push_back(p);
            add_balance(h, p, 1.0);
            add_injection(network.slack_bus, h, p, 1.0);
            if (full) {
                VarHandle q = prob.add_var(-kInf, kInf, 0);
                add_reactive(network.slack_bus, h, q, 1.0);
            }
        }
    }

    void build_battery() {
        if (cfg.battery == BatteryKind::none) return;
        const auto& b = a.battery;
        double eta = std::sqrt(b.rte);
        vars.batt_power = prob.add_var(0, kInf, capex_coef_mw(b.capex_per_kw, b.lifetime_yr),
                                       VarKind::continuous, "batt_power");
        for (int h = 0; h < H; ++h) {
            VarHandle ch = prob.add_var(0, kInf, 0, VarKind::continuous,
                                        "ch:" + std::to_string(h));
            VarHandle dis = prob.add_var(0, kInf, 0, VarKind::continuous,
                                         "dis:" + std::to_string(h));
            VarHandle soc = prob.add_var(0, kInf, 0, VarKind::continuous,
                                         "soc:" + std::to_string(h));
            vars.batt_ch.push_back(ch);
            vars.batt_dis.push_back(dis);
            vars.soc.push_back(soc);
            add_balance(h, ch, -1.0);
            add_balance(h, dis, 1.0);
            add_injection(b.bus, h, ch, -1.0);
            add_injection(b.bus, h, dis, 1.0);
            // soc_h - soc_{h-1} = eta*ch - dis/eta; battery starts empty
            std::vector<std::pair<VarHandle, double>> dyn = {
                {soc, 1.0}, {ch, -eta}, {dis, 1.0 / eta}};
            if (h > 0) dyn.push_back({vars.soc[h - 1], -1.0});
            prob.add_constraint(dyn, Sense::eq, 0);
            prob.add_constraint({{soc, 1.0}, {vars.batt_power, -b.duration_h}}, Sense::le, 0);
            prob.add_constraint({{ch, 1.0}, {vars.batt_power, -1.0}}, Sense::le, 0);
            prob.add_constraint({{dis, 1.0}, {vars.batt_power, -1.0}}, Sense::le, 0);
            if (full) {
                VarHandle q = prob.add_var(-kInf, kInf, 0);
                add_reactive(b.bus, h, q, 1.0);
                prob.add_constraint({{q, 1.0}, {vars.batt_power, -1.0}}, Sense::le, 0);
                prob.add_constraint({{q, -1.0}, {vars.batt_power, -1.0}}, Sense::le, 0);
            }
        }
    }

    void build_h2() {
        if (!cfg.has_h2) return;
        const auto& h2 = a.h2;
        double kin = h2.kg_per_mwh_in();    // kg produced per MWh into the electrolyzer
        double kout = h2.kg_per_mwh_out();  // kg consumed per MWh out of the fuel cell
        vars.ez_cap = prob.add_var(
            0, kInf,
            capex_coef_mw(h2.ez_capex_per_kw + h2.comp_capex_per_kw, h2.ez_lifetime_yr),
            VarKind::continuous, "ez_cap");
        vars.fc_cap = prob.add_var(0, kInf, capex_coef_mw(h2.fc_capex_per_kw, h2.fc_lifetime_yr),
                                   VarKind::continuous, "fc_cap");
        vars.tank_cap = prob.add_var(
            0, kInf,
            assets::horizon_capex(1.0, h2.tank_capex_per_kg, h2.tank_lifetime_yr, a.fin),
            VarKind::continuous, "tank_cap");
        for (int h = 0; h < H; ++h) {
            VarHandle ez = prob.add_var(0, kInf, h2.storage_cost_per_kg * kin,
                                        VarKind::continuous, "ez:" + std::to_string(h));
            VarHandle fc = prob.add_var(0, kInf, 0, VarKind::continuous,
                                        "fc:" + std::to_string(h));
            VarHandle mass = prob.add_var(0, kInf, 0, VarKind::continuous,
                                          "tank:" + std::to_string(h));
            vars.ez.push_back(ez);
            vars.fc.push_back(fc);
            vars.tank.push_back(mass);
            double ez_draw = 1.0 + h2.comp_kwh_per_kg * kin / 1000.0;  // compressor rides along
            add_balance(h, ez, -ez_draw);
            add_balance(h, fc, 1.0);
            add_injection(h2.bus, h, ez, -ez_draw);
            add_injection(h2.bus, h, fc, 1.0);
            std::vector<std::pair<VarHandle, double>> dyn = {
                {mass, 1.0}, {ez, -kin}, {fc, kout}};
            if (h > 0)
                dyn.push_back({vars.tank[h - 1], -1.0});
            else
                dyn.push_back({vars.tank_cap, -h2.init_frac});
            prob.add_constraint(dyn, Sense::eq, 0,
                                h == 0 ? "tank_init" : "");
            prob.add_constraint({{mass, 1.0}, {vars.tank_cap, -1.0}}, Sense::le, 0);
            prob.add_constraint({{ez, 1.0}, {vars.ez_cap, -1.0}}, Sense::le, 0);
            prob.add_constraint({{fc, 1.0}, {vars.fc_cap, -1.0}}, Sense::le, 0);
            if (full) {
                VarHandle q = prob.add_var(-kInf, kInf, 0);
                add_reactive(h2.bus, h, q, 1.0);
                prob.add_constraint({{q, 1.0}, {vars.fc_cap, -1.0}}, Sense::le, 0);
                prob.add_constraint({{q, -1.0}, {vars.fc_cap, -1.0}}, Sense::le, 0);
            }
        }
        prob.add_constraint({{vars.tank[H - 1], 1.0}, {vars.tank_cap, -h2.final_frac}},
                            Sense::eq, 0, "tank_final");
    }

    void build_copperplate_balance() {
        for (int h = 0; h < H; ++h)
            prob.add_constraint(balance[h], Sense::eq, prof.load_mw[h],
                                "bal:" + std::to_string(h));
    }

    void build_network() {
        int nb = network.num_buses();
        double tot_p = network.total_p_load_kw();
        std::vector<std::vector<double>> pl(H, std::vector<double>(nb)),
            ql(H, std::vector<double>(nb));
        for (int h = 0; h < H; ++h)
            for (int b = 0; b < nb; ++b) {
                double share = tot_p > 0 ? network.buses[b].p_load_kw / tot_p : 0.0;
                double qshare = tot_p > 0 ? network.buses[b].q_load_kvar / tot_p : 0.0;
                pl[h][b] = prof.load_mw[h] * share;
                ql[h][b] = prof.load_mw[h] * qshare;
            }
        vars.flow = net::build_lindistflow(prob, network, inj, pl, ql);
        vars.injections = inj;
    }
};

double value(const lp::Solution& s, VarHandle v) {
    return v.valid() ? s.primal[v.idx] : 0.0;
}

}  // namespace

Problem build_problem(const CaseConfig& cfg, const net::Network& network,
                      const AssetSet& specs, const profiles::ProfileSet& prof,
                      VarMap* map_out) {
    Builder b(cfg, network, specs, prof);
    b.build();
    if (map_out) *map_out = std::move(b.vars);
    return std::move(b.prob);
}

CaseRun run_case(const CaseConfig& cfg, const net::Network& network,
                 const AssetSet& specs, const profiles::ProfileSet& prof) {
    CaseRun run;
    run.cfg = cfg;
    VarMap vm;
    run.problem = build_problem(cfg, network, specs, prof, &vm);

    if (cfg.commitment == CommitmentMode::exact && !run.problem.binary_vars().empty())
        run.solution = lp::solve_milp(run.problem);
    else
        run.solution = lp::solve_lp(run.problem);

    if (!run.solution.optimal()) {
        throw SolveError(run.solution.status,
                         "case " + cfg.case_id + " solve failed: " +
                             lp::to_string(run.solution.status) + " (" +
                             std::to_string(run.problem.num_rows()) + " rows, " +
                             std::to_string(run.problem.num_vars()) + " vars)");
    }

    const lp::Solution& s = run.solution;
    ScheduleResult& sch = run.schedule;
    int H = std::min(cfg.horizon, prof.horizon());
    sch.horizon = H;
    sch.load_mw.assign(prof.load_mw.begin(), prof.load_mw.begin() + H);
    for (size_t g = 0; g < specs.dgs.size(); ++g) {
        sch.dg_names.push_back(specs.dgs[g].name);
        std::vector<double> p(H);
        for (int h = 0; h < H; ++h) p[h] = value(s, vm.dg_p[g][h]);
        sch.dg_mw.push_back(std::move(p));
    }
    if (cfg.has_pv) {
        sch.pv_avail_mw.assign(prof.pv_avail_mw.begin(), prof.pv_avail_mw.begin() + H);
        sch.pv_disp_mw.assign(H, 0);
        sch.pv_curt_mw.assign(H, 0);
        for (int h = 0; h < H; ++h) {
            double d = 0;
            for (auto& unit : vm.pv_disp) d += value(s, unit[h]);
            sch.pv_disp_mw[h] = d;
            sch.pv_curt_mw[h] = std::max(0.0, sch.pv_avail_mw[h] - d);
        }
    }
    sch.import_mw.resize(H);
    for (int h = 0; h < H; ++h) sch.import_mw[h] = value(s, vm.import_mw[h]);
    if (cfg.battery != BatteryKind::none) {
        sch.batt_ch_mw.resize(H);
        sch.batt_dis_mw.resize(H);
        sch.soc_mwh.resize(H);
        for (int h = 0; h < H; ++h) {
            sch.batt_ch_mw[h] = value(s, vm.batt_ch[h]);
            sch.batt_dis_mw[h] = value(s, vm.batt_dis[h]);
            sch.soc_mwh[h] = value(s, vm.soc[h]);
        }
        run.sizing.batt_power_mw = value(s, vm.batt_power);
        run.sizing.batt_energy_mwh = specs.battery.duration_h * run.sizing.batt_power_mw;
    }
    if (cfg.has_h2) {
        sch.ez_mw.resize(H);
        sch.fc_mw.resize(H);
        sch.tank_kg.resize(H);
        for (int h = 0; h < H; ++h) {
            sch.ez_mw[h] = value(s, vm.ez[h]);
            sch.fc_mw[h] = value(s, vm.fc[h]);
            sch.tank_kg[h] = value(s, vm.tank[h]);
        }
        run.sizing.ez_mw = value(s, vm.ez_cap);
        run.sizing.fc_mw = value(s, vm.fc_cap);
        run.sizing.tank_kg = value(s, vm.tank_cap);
    }
    if (cfg.network == NetworkMode::full) {
        int nb = network.num_buses();
        double tot_p = network.total_p_load_kw();
        sch.v_pu.assign(H, std::vector<double>(nb, 1.0));
        sch.p_inj_mw.assign(H, std::vector<double>(nb, 0.0));
        sch.q_inj_mvar.assign(H, std::vector<double>(nb, 0.0));
        for (int h = 0; h < H; ++h) {
            for (int b = 0; b < nb; ++b) {
                sch.v_pu[h][b] = std::sqrt(std::max(0.0, value(s, vm.flow.v_sq[h][b])));
                double share = tot_p > 0 ? network.buses[b].p_load_kw / tot_p : 0.0;
                double qshare = tot_p > 0 ? network.buses[b].q_load_kvar / tot_p : 0.0;
                double p = -prof.load_mw[h] * share;
                double q = -prof.load_mw[h] * qshare;
                for (auto& [v, c] : vm.injections.p[h][b]) p += c * value(s, v);
                for (auto& [v, c] : vm.injections.q[h][b]) q += c * value(s, v);
                sch.p_inj_mw[h][b] = p;
                sch.q_inj_mvar[h][b] = q;
            }
        }
    }

    double res = sch.power_balance_residual();
    if (res > 1e-6)
        run.warnings.push_back("power balance residual " + std::to_string(res) + " MW");
    auto sim = sch.simultaneous_flow_hours();
    if (!sim.empty())
        run.warnings.push_back("simultaneous charge/discharge in " +
                               std::to_string(sim.size()) + " hours");
    return run;
}

FixedPointResult run_case_5b(const CaseConfig& cfg, const net::Network& network,
                             const AssetSet& specs, const profiles::ProfileSet& prof,
                             double cf_tol, int max_iter) {
    FixedPointResult out;
    AssetSet current = specs;
    std::vector<double> prev_cf;
    for (int it = 0; it < max_iter; ++it) {
        FixedPointIterate step;
        step.run = run_case(cfg, network, current, prof);
        int H = step.run.schedule.horizon;
        for (size_t g = 0; g < current.dgs.size(); ++g) {
            double energy = 0;
            for (int h = 0; h < H; ++h) energy += step.run.schedule.dg_mw[g][h];
            step.dg_cf.push_back(energy / (specs.dgs[g].capacity_mw * H));
        }
        for (size_t g = 0; g < current.dgs.size(); ++g) {
            // always update from the original reference LCOE
            double next = update_lcoe(specs.dgs[g], step.dg_cf[g], cfg.lcoe_price_cap);
            step.dg_lcoe.push_back(next);
        }
        bool converged = false;
        if (!prev_cf.empty()) {
            double worst = 0;
            for (size_t g = 0; g < prev_cf.size(); ++g)
                worst = std::max(worst, std::abs(step.dg_cf[g] - prev_cf[g]));
            converged = worst < cf_tol;
        }
        prev_cf = step.dg_cf;
        for (size_t g = 0; g < current.dgs.size(); ++g)
            current.dgs[g].lcoe = step.dg_lcoe[g];
        out.iterates.push_back(std::move(step));
        if (converged) {
            out.converged = true;
            break;
        }
    }
    return out;
}

}  // namespace hygrid::opt
