#include "doctest.h"

#include <cmath>

#include "hygrid/metrics.hpp"

using namespace hygrid;
using namespace hygrid::metrics;

TEST_CASE("h2 production cost sensitivity to electrolyzer capex") {
    // PV LCOE fixed at $12/MWh, no compressor (40 bar)
    const double capex[] = {50, 75, 100, 125, 150, 175, 200, 250};
    const double production[] = {0.85, 0.94, 1.02, 1.10, 1.19, 1.27, 1.35, 1.51};
    const double total[] = {0.87, 0.96, 1.04, 1.12, 1.21, 1.29, 1.37, 1.53};
    for (int i = 0; i < 8; ++i) {
        H2CostBreakdown b = h2_cost(capex[i], 0.0, 12.0);
        CHECK_MESSAGE(std::abs(b.energy_per_kg + b.capex_per_kg - production[i]) <= 0.01,
                      "capex " << capex[i]);
        CHECK(std::abs(b.total_per_kg - total[i]) <= 0.01);
        CHECK(b.storage_per_kg == doctest::Approx(0.02));
    }
}

TEST_CASE("h2 production cost sensitivity to PV LCOE") {
    const double lcoe[] = {8, 9, 10, 11, 12, 13};
    // electrolyzer only at $100/kW (40 bar)
    const double low[] = {0.79, 0.85, 0.90, 0.96, 1.02, 1.08};
    // electrolyzer + compressor at $248/kW total (350 bar)
    const double moderate[] = {1.28, 1.34, 1.40, 1.46, 1.51, 1.56};
    for (int i = 0; i < 6; ++i) {
        H2CostBreakdown a = h2_cost(100.0, 0.0, lcoe[i], kDefaultESpecKwhPerKg,
                                    kDefaultCapexRate, 0.0);
        CHECK_MESSAGE(std::abs(a.total_per_kg - low[i]) <= 0.01, "lcoe " << lcoe[i]);
        H2CostBreakdown b = h2_cost(100.0, 148.0, lcoe[i], kDefaultESpecKwhPerKg,
                                    kDefaultCapexRate, 0.0);
        CHECK_MESSAGE(std::abs(b.total_per_kg - moderate[i]) <= 0.01,
                      "lcoe " << lcoe[i]);
    }
}

TEST_CASE("h2 cost degenerate inputs") {
    H2CostBreakdown z = h2_cost(0, 0, 0);
    CHECK(z.total_per_kg == doctest::Approx(0.02));
    // affine in capex: doubling the capex doubles the capex component
    H2CostBreakdown one = h2_cost(100, 0, 12);
    H2CostBreakdown two = h2_cost(200, 0, 12);
    CHECK(two.capex_per_kg == doctest::Approx(2 * one.capex_per_kg));
    CHECK(two.energy_per_kg == doctest::Approx(one.energy_per_kg));
}

TEST_CASE("fitting the affine model recovers the published slopes") {
    std::vector<std::pair<double, double>> capex_pts = {{50, 0.85}, {250, 1.51}};
    std::vector<std::pair<double, double>> lcoe_pts = {{8, 0.79}, {12, 1.02}};
    H2FitResult fit = fit_h2_params(capex_pts, 12.0, lcoe_pts, 100.0);
    CHECK(fit.capex_rate == doctest::Approx(0.0033).epsilon(1e-3));
    CHECK(fit.e_spec_kwh_per_kg == doctest::Approx(57.5).epsilon(1e-3));

    // exact-affine synthetic table has zero residual
    std::vector<std::pair<double, double>> syn_capex, syn_lcoe;
    for (double c : {50.0, 100.0, 150.0, 200.0})
        syn_capex.emplace_back(c, h2_cost(c, 0, 12, 57.5, 0.0033, 0).total_per_kg);
    for (double l : {8.0, 10.0, 12.0})
        syn_lcoe.emplace_back(l, h2_cost(100, 0, l, 57.5, 0.0033, 0).total_per_kg);
    H2FitResult exact = fit_h2_params(syn_capex, 12.0, syn_lcoe, 100.0);
    CHECK(exact.max_residual < 1e-12);

    // constant column is degenerate
    std::vector<std::pair<double, double>> flat = {{100, 1.0}, {100, 1.0}};
    CHECK_THROWS(fit_h2_params(flat, 12.0, lcoe_pts, 100.0));
}

namespace {

opt::ScheduleResult simple_schedule(int H) {
    opt::ScheduleResult s;
    s.horizon = H;
    s.load_mw.assign(H, 1.0);
    s.import_mw.assign(H, 0.0);
    return s;
}

}  // namespace

TEST_CASE("green fraction: all-import is 0, all-PV is 100") {
    opt::AssetSet a;
    opt::ScheduleResult imp = simple_schedule(4);
    imp.import_mw.assign(4, 1.0);
    CHECK(green_fraction(imp, a) == doctest::Approx(0.0));

    opt::ScheduleResult pv = simple_schedule(4);
    pv.pv_avail_mw.assign(4, 1.0);
    pv.pv_disp_mw.assign(4, 1.0);
    pv.pv_curt_mw.assign(4, 0.0);
    CHECK(green_fraction(pv, a) == doctest::Approx(100.0));

    // dg-only is fossil
    opt::ScheduleResult dg = simple_schedule(4);
    dg.dg_names = {"G"};
    dg.dg_mw = {{1.0, 1.0, 1.0, 1.0}};
    dg.import_mw.assign(4, 0.0);
    CHECK(green_fraction(dg, a) == doctest::Approx(0.0));

    // half/half splits the ledger
    opt::ScheduleResult mix = simple_schedule(4);
    mix.pv_avail_mw.assign(4, 0.5);
    mix.pv_disp_mw.assign(4, 0.5);
    mix.pv_curt_mw.assign(4, 0.0);
    mix.import_mw.assign(4, 0.5);
    CHECK(green_fraction(mix, a) == doctest::Approx(50.0));
}

TEST_CASE("green + fossil fractions always sum to 100") {
    opt::AssetSet a;
    opt::ScheduleResult s = simple_schedule(3);
    s.pv_avail_mw = {1.0, 0.0, 0.4};
    s.pv_disp_mw = {0.8, 0.0, 0.4};
    s.pv_curt_mw = {0.2, 0.0, 0.0};
    s.import_mw = {0.2, 1.0, 0.6};
    double green = green_fraction(s, a);
    double fossil = 100.0 - green;
    CHECK(green >= 0.0);
    CHECK(fossil >= 0.0);
    CHECK(green + fossil == doctest::Approx(100.0));
}

TEST_CASE("battery discharge inherits the charging hour's mix") {
    opt::AssetSet a;
    a.battery = assets::liion_4h();
    double eta = std::sqrt(a.battery.rte);
    opt::ScheduleResult s = simple_schedule(2);
    // hour 0: PV serves the load and charges 1 MWh; hour 1: discharge serves all
    s.pv_avail_mw = {2.0, 0.0};
    s.pv_disp_mw = {2.0, 0.0};
    s.pv_curt_mw = {0.0, 0.0};
    s.batt_ch_mw = {1.0, 0.0};
    s.batt_dis_mw = {0.0, eta * eta};
    s.soc_mwh = {eta, 0.0};
    s.import_mw = {0.0, 1.0 - eta * eta};
    double g = green_fraction(s, a);
    // hour 0 fully green; hour 1: 0.81 green discharge + 0.19 import
    CHECK(g == doctest::Approx(100.0 * (1.0 + eta * eta) / 2.0).epsilon(1e-6));
}

TEST_CASE("capacity factor arithmetic") {
    assets::DgSpec g;
    g.capacity_mw = 0.8;
    opt::ScheduleResult s = simple_schedule(336);
    s.dg_names = {"G"};
    s.dg_mw = {std::vector<double>(336, 0.8)};
    CHECK(capacity_factor(s, 0, g) == doctest::Approx(100.0));
    s.dg_mw[0].assign(336, 0.4);
    CHECK(capacity_factor(s, 0, g) == doctest::Approx(50.0));
    s.dg_mw[0].assign(336, 0.0);
    CHECK(capacity_factor(s, 0, g) == doctest::Approx(0.0));
}

TEST_CASE("curtailment stats") {
    opt::ScheduleResult s = simple_schedule(2);
    s.pv_avail_mw = {2.0, 2.0};
    s.pv_disp_mw = {1.0, 2.0};
    s.pv_curt_mw = {1.0, 0.0};
    CurtailmentStats c = curtailment_stats(s);
    CHECK(c.available_mwh == doctest::Approx(4.0));
    CHECK(c.curtailed_mwh == doctest::Approx(1.0));
    CHECK(c.pct == doctest::Approx(25.0));
}
