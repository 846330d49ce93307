#ifndef HYGRID_OPTIMIZER_HPP
#define HYGRID_OPTIMIZER_HPP

#include <string>
#include <vector>

#include "hygrid/assets.hpp"
#include "hygrid/lp.hpp"
#include "hygrid/network.hpp"
#include "hygrid/profiles.hpp"

namespace hygrid::opt {

enum class BatteryKind { none, liion_4h, flow_10h };
enum class CommitmentMode { relaxed, exact };
enum class NetworkMode { full, copperplate };

struct CaseConfig {
    std::string case_id = "1";
    bool has_dgs = true;
    bool has_pv = false;
    BatteryKind battery = BatteryKind::none;
    bool has_h2 = false;
    double pv_penetration = 1.2;
    double tank_init_frac = 0.10;
    double tank_final_frac = 0.10;
    double curtail_penalty = 0.0;  // $/MWh, Case 6b only
    CommitmentMode commitment = CommitmentMode::relaxed;
    NetworkMode network = NetworkMode::copperplate;
    double import_price = 100.0;
    int horizon = 336;
    bool dgs_priced_out = false;  // Case 7: DGs at the actual-CF price cap
    double lcoe_price_cap = 11400.0;
    bool update_dg_lcoe = false;  // Case 5b fixed point

    /// Roster defaults for ids 1, 2, 3, 4, 5a, 5b, 6a, 6b, 7a, 7b.
    static CaseConfig for_case(const std::string& id);
    static const std::vector<std::string>& all_case_ids();
};

struct AssetSet {
    std::vector<assets::DgSpec> dgs;
    assets::PvSpec pv;
    assets::BatterySpec battery;
    assets::H2Spec h2;
    assets::FinParams fin;
};

/// Default specs with the roster trimmed/configured per the case.
AssetSet default_assets(const CaseConfig& cfg);

struct ScheduleResult {
    int horizon = 0;
    std::vector<std::string> dg_names;
    std::vector<std::vector<double>> dg_mw;  // [dg][hour]
    std::vector<double> pv_avail_mw, pv_disp_mw, pv_curt_mw;
    std::vector<double> batt_ch_mw, batt_dis_mw, soc_mwh;
    std::vector<double> ez_mw, fc_mw, tank_kg;
    std::vector<double> import_mw, load_mw;
    // full-network mode extras: [hour][bus] in network bus order
    std::vector<std::vector<double>> p_inj_mw, q_inj_mvar, v_pu;

    /// max over hours of |sources - sinks| in MW
    double power_balance_residual() const;
    /// hours where charge and discharge (or ez and fc) both exceed 1e-6 MW
    std::vector<int> simultaneous_flow_hours() const;
};

struct SizingResult {
    double batt_power_mw = 0;
    double batt_energy_mwh = 0;  // duration * power, exactly
    double ez_mw = 0;
    double tank_kg = 0;
    double fc_mw = 0;
};

/// Handles into the built Problem, for unpacking and perturbation tests.
struct VarMap {
    std::vector<std::vector<lp::VarHandle>> dg_p, dg_u;  // [dg][hour]
    std::vector<std::vector<lp::VarHandle>> pv_disp;     // [unit][hour]
    std::vector<lp::VarHandle> import_mw;
    std::vector<lp::VarHandle> batt_ch, batt_dis, soc;
    std::vector<lp::VarHandle> ez, fc, tank;
    lp::VarHandle batt_power, ez_cap, fc_cap, tank_cap;
    // full mode only
    net::LinDistFlowVars flow;
    net::InjectionVars injections;  // per bus-hour linear terms, MW / MVAr
};

/// Joint operation + sizing LP/MILP over the horizon. Nodal balance
/// rows are tagged "nbal:<bus>:<hour>" (full mode) or "bal:<hour>"
/// (copperplate) for DLMP extraction.
lp::Problem build_problem(const CaseConfig& cfg, const net::Network& network,
                          const AssetSet& specs, const profiles::ProfileSet& prof,
                          VarMap* map_out = nullptr);

struct CaseRun {
    CaseConfig cfg;
    lp::Problem problem;
    lp::Solution solution;
    ScheduleResult schedule;
    SizingResult sizing;
    std::vector<std::string> warnings;
};

struct SolveError : std::runtime_error {
    lp::SolveStatus status;
    SolveError(lp::SolveStatus s, const std::string& what)
        : std::runtime_error(what), status(s) {}
};

/// Builds, solves, unpacks, and re-verifies the schedule invariants.
/// Throws SolveError (with an LP dump attached to the message) on
/// solver failure.
CaseRun run_case(const CaseConfig& cfg, const net::Network& network,
                 const AssetSet& specs, const profiles::ProfileSet& prof);

/// Actual-capacity-factor LCOE: nrel_cf / actual_cf * nrel_lcoe, capped
/// at price_cap (and pinned there below 0.1% actual CF).
double update_lcoe(const assets::DgSpec& spec, double actual_cf,
                   double price_cap = 11400.0);

struct FixedPointIterate {
    CaseRun run;
    std::vector<double> dg_cf;    // per DG, fraction
    std::vector<double> dg_lcoe;  // LCOEs used in the *next* solve
};

struct FixedPointResult {
    std::vector<FixedPointIterate> iterates;
    bool converged = false;
};

/// Case 5b: solve, recompute per-DG capacity factors, update LCOEs from
/// the original reference values, re-solve (re-sizing each pass) until
/// the largest CF change drops below cf_tol or max_iter passes.
FixedPointResult run_case_5b(const CaseConfig& cfg, const net::Network& network,
                             const AssetSet& specs, const profiles::ProfileSet& prof,
                             double cf_tol = 0.01, int max_iter = 10);

}  // namespace hygrid::opt

#endif
