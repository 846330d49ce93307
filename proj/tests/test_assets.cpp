#include "doctest.h"

#include <cmath>

#include "hygrid/assets.hpp"

using namespace hygrid::assets;

TEST_CASE("capital recovery factor") {
    // i(1+i)^n / ((1+i)^n - 1), checked against hand arithmetic
    CHECK(crf(0.10, 10) == doctest::Approx(0.1627454).epsilon(1e-6));
    CHECK(crf(0.07, 10) == doctest::Approx(0.1423775).epsilon(1e-6));
    CHECK(crf(0.07, 20) == doctest::Approx(0.0943929).epsilon(1e-6));
    // i -> 0 limit is straight-line depreciation 1/n
    CHECK(crf(1e-9, 10) == doctest::Approx(0.1).epsilon(1e-6));
    CHECK_THROWS(crf(0.07, 0));
}

TEST_CASE("horizon-attributed capex") {
    FinParams fin;  // 7%, 14/365
    // 1 MW of electrolyzer at $100/kW over a 10-year life:
    // 1000 * 100 * 0.1423775 * 0.0383562 = $546.12
    CHECK(horizon_capex(1000, 100, 10, fin) == doctest::Approx(546.12).epsilon(1e-4));
    // zero capacity, zero charge
    CHECK(horizon_capex(0, 500, 10, fin) == doctest::Approx(0.0));
    // linear in capacity
    CHECK(horizon_capex(2000, 100, 10, fin) ==
          doctest::Approx(2 * horizon_capex(1000, 100, 10, fin)));
}

TEST_CASE("battery round trips at the rated rte") {
    BatterySpec li = liion_4h();
    CHECK(li.rte == doctest::Approx(0.81));
    CHECK(li.duration_h == doctest::Approx(4.0));
    double eta = std::sqrt(li.rte);
    // charge 1 MWh: soc gains eta; discharge everything: delivers soc * eta
    double soc = soc_transition(0.0, 1.0, 0.0, li);
    CHECK(soc == doctest::Approx(eta));
    double delivered = soc * eta;
    CHECK(delivered == doctest::Approx(0.81));

    BatterySpec flow = flow_10h();
    CHECK(flow.duration_h == doctest::Approx(10.0));
    double soc2 = soc_transition(0.0, 1.0, 0.0, flow);
    CHECK(soc2 * std::sqrt(flow.rte) == doctest::Approx(0.67));
}

TEST_CASE("hydrogen chain round trip") {
    H2Spec h2;
    CHECK(h2.round_trip() == doctest::Approx(0.42));
    // 1 MWh into the electrolyzer makes 1000/57.5 = 17.391 kg
    CHECK(h2.kg_per_mwh_in() == doctest::Approx(17.3913).epsilon(1e-4));
    // delivering 1 MWh from the fuel cell burns 41.408 kg
    CHECK(h2.kg_per_mwh_out() == doctest::Approx(1000.0 / (57.5 * 0.42)).epsilon(1e-9));
    // 2.381 MWh in -> 1.000 MWh out
    double kg = 2.380952381 * h2.kg_per_mwh_in();
    double mwh_out = kg / h2.kg_per_mwh_out();
    CHECK(mwh_out == doctest::Approx(1.0).epsilon(1e-6));

    // tank mass balance step
    double m1 = tank_transition(100.0, 1.0, 0.0, h2);
    CHECK(m1 == doctest::Approx(100.0 + h2.kg_per_mwh_in()));
    double m2 = tank_transition(m1, 0.0, 0.5, h2);
    CHECK(m2 == doctest::Approx(m1 - 0.5 * h2.kg_per_mwh_out()));
}

TEST_CASE("default rosters") {
    auto dgs = default_dgs();
    REQUIRE(dgs.size() == 3);
    CHECK(dgs[0].name == "DG8");
    CHECK(dgs[0].bus == 8);
    CHECK(dgs[0].capacity_mw == doctest::Approx(0.8));
    CHECK(dgs[0].lcoe == doctest::Approx(36.0));
    CHECK(dgs[1].name == "DG13");
    CHECK(dgs[1].capacity_mw == doctest::Approx(2.4));
    CHECK(dgs[2].name == "DG30");
    CHECK(dgs[2].capacity_mw == doctest::Approx(1.0));
    double total = 0;
    for (auto& g : dgs) total += g.capacity_mw;
    CHECK(total == doctest::Approx(4.2));

    PvSpec pv = default_pv();
    CHECK(pv.buses.size() == 6);
    CHECK(pv.lcoe == doctest::Approx(12.0));

    H2Spec h2 = default_h2();
    CHECK(h2.ez_capex_per_kw == doctest::Approx(100.0));
    CHECK(h2.comp_capex_per_kw == doctest::Approx(148.0));
    CHECK(h2.fc_capex_per_kw == doctest::Approx(500.0));
    CHECK(h2.tank_capex_per_kg == doctest::Approx(240.0));
}
