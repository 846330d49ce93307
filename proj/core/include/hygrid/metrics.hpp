#ifndef HYGRID_METRICS_HPP
#define HYGRID_METRICS_HPP

#include <map>
#include <string>
#include <vector>

#include "hygrid/optimizer.hpp"

namespace hygrid::metrics {

/// Share of load energy served from non-fossil, non-import sources, in
/// percent. Storage discharge is attributed to its charging source via
/// a per-hour provenance ledger; H2 already in the tank at hour zero
/// counts as green (steady-state PV production).
double green_fraction(const opt::ScheduleResult& s, const opt::AssetSet& a);

/// Delivered energy over capacity * hours, percent.
double capacity_factor(const opt::ScheduleResult& s, int dg_index,
                       const assets::DgSpec& g);

struct DlmpStats {
    std::vector<std::vector<double>> per_hour_bus;  // [hour][bus], $/MWh
    double load_weighted_mean = 0;
    bool restricted = false;  // duals from an LP with binaries fixed
};

/// Duals of the nodal (or system, in copperplate mode) power balance
/// rows. Copperplate prices are uniform across buses by construction.
DlmpStats dlmp_stats(const lp::Problem& p, const lp::Solution& sol,
                     const net::Network& network, const opt::ScheduleResult& s);

struct CurtailmentStats {
    double available_mwh = 0;
    double curtailed_mwh = 0;
    double pct = 0;
};

CurtailmentStats curtailment_stats(const opt::ScheduleResult& s);

struct H2CostBreakdown {
    double energy_per_kg = 0;   // $/kg
    double capex_per_kg = 0;    // $/kg
    double storage_per_kg = 0;  // $/kg
    double total_per_kg = 0;
    // inputs echoed
    double ez_capex = 0, comp_capex = 0, pv_lcoe = 0, e_spec = 0, capex_rate = 0;
};

inline constexpr double kDefaultESpecKwhPerKg = 57.5;
inline constexpr double kDefaultCapexRate = 0.0033;  // $/kg per $/kW

/// Affine production-cost model: energy = e_spec/1000 * pv_lcoe,
/// capex = (ez + compressor) * capex_rate, plus the flat storage adder.
H2CostBreakdown h2_cost(double ez_capex_per_kw, double comp_capex_per_kw,
                        double pv_lcoe, double e_spec = kDefaultESpecKwhPerKg,
                        double capex_rate = kDefaultCapexRate,
                        double storage_per_kg = 0.02);

struct H2FitResult {
    double e_spec_kwh_per_kg = 0;
    double capex_rate = 0;
    double max_residual = 0;  // worst |model - observed| over both tables
};

/// Least-squares slopes of production cost vs electrolyzer CAPEX
/// (capex_rate) and vs PV LCOE (e_spec / 1000). capex_points are
/// (ez_capex $/kW, cost $/kg) at fixed LCOE; lcoe_points are
/// (pv_lcoe $/MWh, cost $/kg) at fixed CAPEX with the given compressor.
H2FitResult fit_h2_params(const std::vector<std::pair<double, double>>& capex_points,
                          double capex_fixed_lcoe,
                          const std::vector<std::pair<double, double>>& lcoe_points,
                          double lcoe_fixed_capex);

struct CaseReport {
    std::string case_id;
    double green_fraction_pct = 0;
    std::map<std::string, double> dg_capacity_factor_pct;
    double mean_dlmp = 0;
    std::vector<double> hourly_dlmp;  // load-weighted across buses per hour
    CurtailmentStats curtailment;
    double objective = 0;
    double capital_cost = 0;    // horizon-attributed capex of sized assets
    double operation_cost = 0;  // objective minus capital
    opt::SizingResult sizing;
    double v_min = 1.0, v_max = 1.0;  // across buses and hours (full mode)
    // diagnostic: demand re-evaluated with voltage exponents per class
    std::map<std::string, double> voltage_adjusted_load_mwh;
    std::vector<std::string> warnings;
    uint32_t seed = 0;
};

CaseReport make_report(const opt::CaseRun& run, const net::Network& network,
                       const opt::AssetSet& a, uint32_t seed);

}  // namespace hygrid::metrics

#endif
