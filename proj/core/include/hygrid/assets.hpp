#ifndef HYGRID_ASSETS_HPP
#define HYGRID_ASSETS_HPP

#include <string>
#include <vector>

namespace hygrid::assets {

struct DgSpec {
    std::string name;
    int bus = 0;
    double capacity_mw = 0;
    double lcoe = 0;           // $/MWh
    double nrel_cf = 1.0;      // reference capacity factor, fraction
    double ramp_mw_per_h = 0;  // defaults to 25% of capacity
    double no_load_cost = 0;   // $/h while committed
    double min_output_mw = 0;
};

struct PvSpec {
    std::vector<int> buses;  // one entry per unit, equal shares
    double lcoe = 12.0;      // $/MWh dispatched
    double penetration = 1.2;  // available energy / load energy
};

struct BatterySpec {
    int bus = 6;
    double duration_h = 4.0;
    double rte = 0.81;
    double capex_per_kw = 613.0;
    double lifetime_yr = 15.0;
};

struct H2Spec {
    int bus = 19;
    double eta_ez = 0.60;
    double eta_fc = 0.70;
    double e_spec_kwh_per_kg = 57.5;  // electrical input per kg, embeds eta_ez
    double ez_capex_per_kw = 100.0;
    double comp_capex_per_kw = 148.0;  // compressor, sized with the electrolyzer
    double tank_capex_per_kg = 240.0;
    double fc_capex_per_kw = 500.0;
    double init_frac = 0.10;
    double final_frac = 0.10;
    double storage_cost_per_kg = 0.02;
    double comp_kwh_per_kg = 0.0;  // 40-bar baseline: CAPEX-only compression
    double ez_lifetime_yr = 10.0;
    double fc_lifetime_yr = 10.0;
    double tank_lifetime_yr = 20.0;

    double round_trip() const { return eta_ez * eta_fc; }
    double kg_per_mwh_in() const { return 1000.0 / e_spec_kwh_per_kg; }
    double kg_per_mwh_out() const { return 1000.0 / (e_spec_kwh_per_kg * round_trip()); }
};

struct FinParams {
    double interest = 0.07;                   // fraction per year
    double horizon_fraction = 14.0 / 365.0;   // study horizon as a year fraction
};

/// Capital recovery factor i(1+i)^n / ((1+i)^n - 1).
double crf(double interest, double lifetime_yr);

/// Capital charge attributed to the study horizon:
/// capacity * capex * crf * horizon_fraction. Linear in capacity, so a
/// sizing variable can carry it straight into the objective.
double horizon_capex(double capacity, double capex_per_unit, double lifetime_yr,
                     const FinParams& fin);

/// State-of-charge step, charge/discharge split symmetrically as
/// sqrt(rte) per side. No clamping; bounds are the optimizer's job.
double soc_transition(double soc_mwh, double charge_mw, double discharge_mw,
                      const BatterySpec& spec, double dt_h = 1.0);

/// Tank mass step: electrical-in per kg = e_spec, electrical-out per kg
/// = e_spec * eta_ez * eta_fc.
double tank_transition(double mass_kg, double p_ez_mw, double p_fc_mw,
                       const H2Spec& spec, double dt_h = 1.0);

// Rosters used by the case studies (DG8/DG13/DG30, PV at six nodes).
std::vector<DgSpec> default_dgs();
PvSpec default_pv();
BatterySpec liion_4h();
BatterySpec flow_10h();
H2Spec default_h2();

}  // namespace hygrid::assets

#endif
