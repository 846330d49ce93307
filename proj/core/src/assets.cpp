#include "hygrid/assets.hpp"

#include <cmath>
#include <stdexcept>

namespace hygrid::assets {

double crf(double interest, double lifetime_yr) {
    if (interest <= 0 || lifetime_yr < 1)
        throw std::invalid_argument("crf: need interest > 0 and lifetime >= 1");
    double g = std::pow(1.0 + interest, lifetime_yr);
    return interest * g / (g - 1.0);
}

double horizon_capex(double capacity, double capex_per_unit, double lifetime_yr,
                     const FinParams& fin) {
    if (capacity < 0) throw std::invalid_argument("horizon_capex: negative capacity");
    return capacity * capex_per_unit * crf(fin.interest, lifetime_yr) * fin.horizon_fraction;
}

double soc_transition(double soc_mwh, double charge_mw, double discharge_mw,
                      const BatterySpec& spec, double dt_h) {
    double eta = std::sqrt(spec.rte);
    return soc_mwh + eta * charge_mw * dt_h - discharge_mw * dt_h / eta;
}

double tank_transition(double mass_kg, double p_ez_mw, double p_fc_mw,
                       const H2Spec& spec, double dt_h) {
    return mass_kg + p_ez_mw * dt_h * spec.kg_per_mwh_in()
                   - p_fc_mw * dt_h * spec.kg_per_mwh_out();
}

std::vector<DgSpec> default_dgs() {
    // combined cycle at node 8, combustion turbines at 13 and 30;
    // ramp defaults to 25% of capacity per hour, no-load costs are
    // declared assumptions (flagged in the run config)
    return {
        {"DG8", 8, 0.8, 36.0, 0.88, 0.2, 8.0, 0.0},
        {"DG13", 13, 2.4, 95.0, 0.12, 0.6, 6.0, 0.0},
        {"DG30", 30, 1.0, 98.0, 0.12, 0.25, 1.5, 0.0},
    };
}

PvSpec default_pv() { return PvSpec{{10, 18, 19, 25, 28, 33}, 12.0, 1.2}; }
BatterySpec liion_4h() { return BatterySpec{6, 4.0, 0.81, 613.0, 15.0}; }
BatterySpec flow_10h() { return BatterySpec{6, 10.0, 0.67, 1370.0, 15.0}; }
H2Spec default_h2() { return H2Spec{}; }

}  // namespace hygrid::assets
