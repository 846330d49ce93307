#include "hygrid/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hygrid::metrics {

double green_fraction(const opt::ScheduleResult& s, const opt::AssetSet& a) {
    double total_load = 0;
    for (double l : s.load_mw) total_load += l;
    if (total_load <= 0) throw std::invalid_argument("green_fraction: zero total load");

    const bool has_batt = !s.batt_ch_mw.empty();
    const bool has_h2 = !s.ez_mw.empty();
    const double eta = has_batt ? std::sqrt(a.battery.rte) : 1.0;
    const double kin = a.h2.kg_per_mwh_in();
    const double kout = a.h2.kg_per_mwh_out();

    double batt_green = 0;  // green MWh currently in the battery (soc units)
    double tank_green = 0;  // green kg currently in the tank
    if (has_h2 && !s.tank_kg.empty()) {
        // hour-zero tank content counts green
        double init = s.tank_kg[0] - kin * s.ez_mw[0] + kout * s.fc_mw[0];
        tank_green = std::max(0.0, init);
    }

    double green_load = 0;
    for (int h = 0; h < s.horizon; ++h) {
        double soc_before = has_batt ? (h > 0 ? s.soc_mwh[h - 1] : 0.0) : 0.0;
        double tank_before = has_h2
                                 ? (h > 0 ? s.tank_kg[h - 1]
                                          : s.tank_kg[0] - kin * s.ez_mw[0] + kout * s.fc_mw[0])
                                 : 0.0;
        double gb = soc_before > 1e-12 ? std::min(1.0, batt_green / soc_before) : 0.0;
        double gt = tank_before > 1e-12 ? std::min(1.0, tank_green / tank_before) : 0.0;

        double pv = s.pv_disp_mw.empty() ? 0 : s.pv_disp_mw[h];
        double dg = 0;
        for (const auto& g : s.dg_mw) dg += g[h];
        double dis = has_batt ? s.batt_dis_mw[h] : 0.0;
        double fc = has_h2 ? s.fc_mw[h] : 0.0;
        double imp = s.import_mw[h];

        double sources = pv + dg + dis + fc + imp;
        double green = pv + dis * gb + fc * gt;
        double frac = sources > 1e-12 ? green / sources : 0.0;

        green_load += s.load_mw[h] * frac;

        if (has_batt) {
            batt_green -= (dis / eta) * gb;
            batt_green += eta * s.batt_ch_mw[h] * frac;
            batt_green = std::clamp(batt_green, 0.0, s.soc_mwh[h]);
        }
        if (has_h2) {
            tank_green -= kout * fc * gt;
            tank_green += kin * s.ez_mw[h] * frac;
            tank_green = std::clamp(tank_green, 0.0, s.tank_kg[h]);
        }
    }
    return 100.0 * green_load / total_load;
}

double capacity_factor(const opt::ScheduleResult& s, int dg_index,
                       const assets::DgSpec& g) {
    if (s.horizon <= 0) throw std::invalid_argument("capacity_factor: empty horizon");
    double energy = 0;
    for (int h = 0; h < s.horizon; ++h) energy += s.dg_mw[dg_index][h];
    return 100.0 * energy / (g.capacity_mw * s.horizon);
}

DlmpStats dlmp_stats(const lp::Problem& p, const lp::Solution& sol,
                     const net::Network& network, const opt::ScheduleResult& s) {
    if (!sol.optimal()) throw std::runtime_error("dlmp_stats: solution not optimal");
    DlmpStats out;
    out.restricted = sol.restricted_duals;
    int nb = network.num_buses();
    out.per_hour_bus.assign(s.horizon, std::vector<double>(nb, 0.0));

    double tot_p = network.total_p_load_kw();
    double weighted = 0, weight = 0;
    for (int h = 0; h < s.horizon; ++h) {
        int copper = p.row_by_tag("bal:" + std::to_string(h));
        for (int b = 0; b < nb; ++b) {
            double price;
            if (copper >= 0) {
                price = sol.duals[copper];
            } else {
                int row = p.row_by_tag("nbal:" + std::to_string(network.buses[b].id) +
                                       ":" + std::to_string(h));
                if (row < 0) throw std::runtime_error("dlmp_stats: no tagged balance rows");
                price = sol.duals[row];
            }
            out.per_hour_bus[h][b] = price;
            double w = copper >= 0 ? (b == 0 ? s.load_mw[h] : 0.0)
                                   : s.load_mw[h] *
                                         (tot_p > 0 ? network.buses[b].p_load_kw / tot_p : 0.0);
            weighted += price * w;
            weight += w;
        }
    }
    out.load_weighted_mean = weight > 0 ? weighted / weight : 0.0;
    return out;
}

CurtailmentStats curtailment_stats(const opt::ScheduleResult& s) {
    CurtailmentStats c;
    for (double v : s.pv_avail_mw) c.available_mwh += v;
    for (double v : s.pv_curt_mw) c.curtailed_mwh += v;
    c.pct = c.available_mwh > 0 ? 100.0 * c.curtailed_mwh / c.available_mwh : 0.0;
    return c;
}

H2CostBreakdown h2_cost(double ez_capex_per_kw, double comp_capex_per_kw,
                        double pv_lcoe, double e_spec, double capex_rate,
                        double storage_per_kg) {
    H2CostBreakdown b;
    b.ez_capex = ez_capex_per_kw;
    b.comp_capex = comp_capex_per_kw;
    b.pv_lcoe = pv_lcoe;
    b.e_spec = e_spec;
    b.capex_rate = capex_rate;
    b.energy_per_kg = e_spec / 1000.0 * pv_lcoe;
    b.capex_per_kg = (ez_capex_per_kw + comp_capex_per_kw) * capex_rate;
    b.storage_per_kg = storage_per_kg;
    b.total_per_kg = b.energy_per_kg + b.capex_per_kg + b.storage_per_kg;
    return b;
}

namespace {

double ls_slope(const std::vector<std::pair<double, double>>& pts) {
    double n = static_cast<double>(pts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double var = sxx - sx * sx / n;
    if (std::abs(var) < 1e-12)
        throw std::invalid_argument("fit_h2_params: degenerate (constant) input column");
    return (sxy - sx * sy / n) / var;
}

}  // namespace

H2FitResult fit_h2_params(const std::vector<std::pair<double, double>>& capex_points,
                          double capex_fixed_lcoe,
                          const std::vector<std::pair<double, double>>& lcoe_points,
                          double lcoe_fixed_capex) {
    if (capex_points.size() < 2 || lcoe_points.size() < 2)
        throw std::invalid_argument("fit_h2_params: need at least two points per sweep");
    H2FitResult r;
    r.capex_rate = ls_slope(capex_points);
    r.e_spec_kwh_per_kg = ls_slope(lcoe_points) * 1000.0;
    for (auto [capex, cost] : capex_points) {
        double model = h2_cost(capex, 0, capex_fixed_lcoe, r.e_spec_kwh_per_kg,
                               r.capex_rate, 0).total_per_kg;
        r.max_residual = std::max(r.max_residual, std::abs(model - cost));
    }
    for (auto [lcoe, cost] : lcoe_points) {
        double model = h2_cost(lcoe_fixed_capex, 0, lcoe, r.e_spec_kwh_per_kg,
                               r.capex_rate, 0).total_per_kg;
        r.max_residual = std::max(r.max_residual, std::abs(model - cost));
    }
    return r;
}

CaseReport make_report(const opt::CaseRun& run, const net::Network& network,
                       const opt::AssetSet& a, uint32_t seed) {
    CaseReport rep;
    rep.case_id = run.cfg.case_id;
    rep.seed = seed;
    rep.warnings = run.warnings;
    rep.objective = run.solution.objective;
    rep.sizing = run.sizing;
    rep.green_fraction_pct = green_fraction(run.schedule, a);
    for (size_t g = 0; g < a.dgs.size(); ++g)
        rep.dg_capacity_factor_pct[a.dgs[g].name] =
            capacity_factor(run.schedule, static_cast<int>(g), a.dgs[g]);
    rep.curtailment = curtailment_stats(run.schedule);

    DlmpStats dlmp = dlmp_stats(run.problem, run.solution, network, run.schedule);
    rep.mean_dlmp = dlmp.load_weighted_mean;
    rep.hourly_dlmp.resize(run.schedule.horizon);
    double tot_p = network.total_p_load_kw();
    for (int h = 0; h < run.schedule.horizon; ++h) {
        double num = 0, den = 0;
        for (int b = 0; b < network.num_buses(); ++b) {
            double w = tot_p > 0 ? network.buses[b].p_load_kw / tot_p : 1.0;
            num += dlmp.per_hour_bus[h][b] * w;
            den += w;
        }
        rep.hourly_dlmp[h] = den > 0 ? num / den : 0.0;
    }

    // capital vs operation split
    double cap = 0;
    if (run.cfg.battery != opt::BatteryKind::none)
        cap += assets::horizon_capex(run.sizing.batt_power_mw * 1000.0,
                                     a.battery.capex_per_kw, a.battery.lifetime_yr, a.fin);
    if (run.cfg.has_h2) {
        cap += assets::horizon_capex(run.sizing.ez_mw * 1000.0,
                                     a.h2.ez_capex_per_kw + a.h2.comp_capex_per_kw,
                                     a.h2.ez_lifetime_yr, a.fin);
        cap += assets::horizon_capex(run.sizing.fc_mw * 1000.0, a.h2.fc_capex_per_kw,
                                     a.h2.fc_lifetime_yr, a.fin);
        cap += assets::horizon_capex(run.sizing.tank_kg, a.h2.tank_capex_per_kg,
                                     a.h2.tank_lifetime_yr, a.fin);
    }
    rep.capital_cost = cap;
    rep.operation_cost = rep.objective - cap;

    if (!run.schedule.v_pu.empty()) {
        for (const auto& hour : run.schedule.v_pu)
            for (double v : hour) {
                rep.v_min = std::min(rep.v_min, v);
                rep.v_max = std::max(rep.v_max, v);
            }
        // diagnostic only: re-evaluate demand with voltage exponents
        // 0 / 0.5 / 1.0 per class (constant power in the LP itself)
        double tot = network.total_p_load_kw();
        std::map<std::string, double> adj;
        for (int h = 0; h < run.schedule.horizon; ++h)
            for (int b = 0; b < network.num_buses(); ++b) {
                const net::Bus& bus = network.buses[b];
                double share = tot > 0 ? bus.p_load_kw / tot : 0.0;
                double base = run.schedule.load_mw[h] * share;
                double exp = bus.load_class == net::LoadClass::critical ? 0.0
                             : bus.load_class == net::LoadClass::moderately_critical ? 0.5
                                                                                     : 1.0;
                adj[net::to_string(bus.load_class)] +=
                    base * std::pow(run.schedule.v_pu[h][b], exp);
            }
        rep.voltage_adjusted_load_mwh = adj;
    }
    return rep;
}

}  // namespace hygrid::metrics
