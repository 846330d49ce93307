#ifndef HYGRID_RUNNER_HPP
#define HYGRID_RUNNER_HPP

#include <map>
#include <string>
#include <vector>

#include "hygrid/metrics.hpp"
#include "hygrid/optimizer.hpp"
#include "hygrid/profiles.hpp"

namespace hygrid::runner {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunManifest {
    std::string network_path;  // empty or "builtin" -> embedded 33-bus feeder
    std::string load_profile_path, pv_profile_path;  // optional CSV overrides
    std::vector<std::string> cases;                  // empty -> all ten
    std::string out_dir = "out";
    uint32_t seed = 1;
    int horizon = 336;
    opt::NetworkMode network_mode = opt::NetworkMode::copperplate;
    int jobs = 0;  // 0 -> hardware concurrency, capped at 4
    double load_energy_mwh = 925.0;
    std::map<std::string, double> overrides;  // dotted keys, see apply_overrides

    static RunManifest from_json_file(const std::string& path);
    std::string to_json() const;
};

/// Recognized keys: import_price, curtail_penalty, lcoe_price_cap,
/// pv.lcoe, battery.capex_per_kw, battery.rte, fin.interest,
/// fin.horizon_fraction, h2.ez_capex_per_kw, h2.comp_capex_per_kw,
/// h2.tank_capex_per_kg, h2.fc_capex_per_kw, h2.e_spec_kwh_per_kg,
/// h2.storage_cost_per_kg, h2.comp_kwh_per_kg,
/// dg.<name>.lcoe, dg.<name>.no_load_cost, dg.<name>.ramp_mw_per_h.
void apply_overrides(const std::map<std::string, double>& overrides,
                     opt::CaseConfig& cfg, opt::AssetSet& assets);

struct CaseOutcome {
    metrics::CaseReport report;
    int fixed_point_iterations = 0;  // Case 5b only
    bool fixed_point_converged = true;
};

struct RunOutcome {
    std::vector<CaseOutcome> outcomes;  // manifest case order
    std::string summary_path;
};

/// Executes the selected cases (concurrently up to the worker cap),
/// writing per-case schedule CSV + report JSON + plot data and a
/// cross-case summary CSV. Deterministic: manifest + seed fix every
/// output byte.
RunOutcome run(const RunManifest& m);

// schedule serialization (10 significant digits; round-trips to 1e-9)
void write_schedule_csv(const opt::ScheduleResult& s, const std::string& path);
opt::ScheduleResult read_schedule_csv(const std::string& path);

struct H2SweepCell {
    double ez_capex = 0, pv_lcoe = 0;
    double production = 0, storage = 0, total = 0;
    bool meets_doe_target = false;  // production <= $1/kg
};

/// Cost matrix over ez_capex x pv_lcoe, optionally adding compressor
/// CAPEX; written as long-format CSV when path is non-empty.
std::vector<H2SweepCell> sweep_h2(const std::vector<double>& ez_capex_grid,
                                  const std::vector<double>& pv_lcoe_grid,
                                  bool include_compressor,
                                  double comp_capex_per_kw = 148.0,
                                  const std::string& csv_path = {});

}  // namespace hygrid::runner

#endif
