#include <doctest.h>

#include "powerloop/errors.hpp"
#include "powerloop/plant.hpp"

#include <cmath>

using namespace powerloop;

TEST_CASE("upconversion frequency plan") {
    const RfFrequencies f = rf_frequencies(9.6, 5.0);
    CHECK(f.upper_ghz == doctest::Approx(24.2).epsilon(1e-12));
    CHECK(f.lower_ghz == doctest::Approx(14.2).epsilon(1e-12));
    CHECK_THROWS_AS(rf_frequencies(0.0, 5.0), ConfigError);
    CHECK_THROWS_AS(rf_frequencies(9.6, -1.0), ConfigError);
    CHECK_THROWS_AS(rf_frequencies(2.0, 4.0), ConfigError); // IF at/above doubled LO
}

TEST_CASE("amplifier transfer: linear floor, saturation ceiling") {
    const PaParams pa; // 20 dB gain, -22 dBm ceiling, smoothness 2
    const double g = 10.0;

    const double small = 1e-6;
    CHECK(pa_amam(small, pa) == doctest::Approx(g * small).epsilon(1e-3));

    const double v_sat = std::pow(10.0, pa.sat_out_dbm / 20.0);
    CHECK(pa_amam(1.0, pa) <= v_sat);
    CHECK(pa_amam(1.0, pa) == doctest::Approx(v_sat).epsilon(5e-3));

    // Drive level where the pre-limit amplitude equals the ceiling: the output
    // sits exactly 20*log10(2)/(2p) dB below it.
    const double at_knee = pa_amam(v_sat / g, pa);
    CHECK(20.0 * std::log10(at_knee) == doctest::Approx(-23.505149978319906).epsilon(1e-12));

    CHECK(pa_amam(0.0, pa) == 0.0);
    CHECK_THROWS_AS(pa_amam(-1.0, pa), ConfigError);
    CHECK_THROWS_AS(pa_amam(1.0, PaParams{20.0, -22.0, 0.0}), ConfigError);
}

TEST_CASE("static chain hits the design equilibrium") {
    const PlantConfig cfg;
    const double at_10 = Plant::static_output(cfg, 10.0, 10.0, 0.0);
    CHECK(at_10 == doctest::Approx(-30.000000000045016).epsilon(1e-14));
    CHECK(at_10 == doctest::Approx(-30.0).epsilon(1e-10));

    // Five dB less link loss against five dB more attenuation: same point.
    const double at_15 = Plant::static_output(cfg, 15.0, 5.0, 0.0);
    CHECK(at_15 == doctest::Approx(at_10).epsilon(1e-12));
}

TEST_CASE("static chain without compression is affine in the command") {
    PlantConfig cfg;
    cfg.compression = false;
    CHECK(Plant::static_output(cfg, 10.0, 10.0, 0.0) ==
          doctest::Approx(-29.9447583336).epsilon(1e-12));
    CHECK(Plant::static_output(cfg, 12.0, 10.0, 0.0) ==
          doctest::Approx(-31.9447583336).epsilon(1e-12));

    cfg.alpha = 2.0;
    const double d = Plant::static_output(cfg, 11.0, 10.0, 0.0) -
                     Plant::static_output(cfg, 10.0, 10.0, 0.0);
    CHECK(d == doctest::Approx(-2.0).epsilon(1e-12));

    // Thermal drift adds straight through.
    cfg.alpha = 1.0;
    const double warm = Plant::static_output(cfg, 10.0, 10.0, 0.7);
    CHECK(warm - Plant::static_output(cfg, 10.0, 10.0, 0.0) == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("first-order lag: one pinned step") {
    PlantConfig cfg;
    cfg.compression = false;
    cfg.lag_tau_s = 0.1;
    Plant plant(cfg, 10.0);
    CHECK(plant.step(12.0, 0.1) == doctest::Approx(-31.208999451257114).epsilon(1e-12));
}

TEST_CASE("zero lag tracks the static chain exactly") {
    PlantConfig cfg;
    cfg.compression = false;
    cfg.lag_tau_s = 0.0;
    Plant plant(cfg, 10.0);
    const double out = plant.step(13.0, 0.01);
    CHECK(out == Plant::static_output(cfg, 13.0, 10.0, 0.0));
}

TEST_CASE("link steps fire inside their interval, not before") {
    PlantConfig cfg;
    cfg.compression = false;
    cfg.lag_tau_s = 0.0;
    cfg.schedule.push_back({Disturbance::Kind::link_step, 0.2, -5.0, 0.0});
    Plant plant(cfg, 10.0);

    plant.step(10.0, 0.1);
    CHECK(plant.link_atten_db() == 10.0);
    const double out = plant.step(10.0, 0.1);
    CHECK(plant.link_atten_db() == 5.0);
    CHECK(out == doctest::Approx(-24.9447583336).epsilon(1e-12));
}

TEST_CASE("a step landing exactly on an interval boundary fires once") {
    PlantConfig cfg;
    cfg.schedule.push_back({Disturbance::Kind::link_step, 0.1, -5.0, 0.0});
    Plant plant(cfg, 10.0);
    plant.step(10.0, 0.1);
    CHECK(plant.link_atten_db() == 5.0);
    plant.step(10.0, 0.1);
    CHECK(plant.link_atten_db() == 5.0);
}

TEST_CASE("thermal ramps integrate their overlap with each interval") {
    PlantConfig cfg;
    cfg.schedule.push_back({Disturbance::Kind::temp_ramp, 0.1, 2.0, 0.3});
    Plant plant(cfg, 10.0);

    plant.step(10.0, 0.1);
    CHECK(plant.thermal_db() == doctest::Approx(0.0).epsilon(1e-12));
    plant.step(10.0, 0.1);
    CHECK(plant.thermal_db() == doctest::Approx(0.2).epsilon(1e-9));
    plant.step(10.0, 0.1);
    plant.step(10.0, 0.1);
    CHECK(plant.thermal_db() == doctest::Approx(0.6).epsilon(1e-9));
    plant.step(10.0, 0.1);
    CHECK(plant.thermal_db() == doctest::Approx(0.6).epsilon(1e-9));
}

TEST_CASE("overlapping ramps accumulate independently") {
    PlantConfig cfg;
    cfg.schedule.push_back({Disturbance::Kind::temp_ramp, 0.1, 2.0, 0.3});
    cfg.schedule.push_back({Disturbance::Kind::temp_ramp, 0.2, 1.0, 0.2});
    Plant plant(cfg, 10.0);
    for (int k = 0; k < 6; ++k) plant.step(10.0, 0.1);
    CHECK(plant.thermal_db() == doctest::Approx(0.8).epsilon(1e-9));
}

TEST_CASE("plant rejects invalid configuration and stepping") {
    PlantConfig bad;
    bad.schedule.push_back({Disturbance::Kind::link_step, 2.0, -5.0, 0.0});
    bad.schedule.push_back({Disturbance::Kind::link_step, 1.0, -5.0, 0.0});
    CHECK_THROWS_AS(Plant(bad, 10.0), ConfigError);

    PlantConfig neg;
    neg.schedule.push_back({Disturbance::Kind::link_step, -1.0, -5.0, 0.0});
    CHECK_THROWS_AS(Plant(neg, 10.0), ConfigError);

    PlantConfig ramp;
    ramp.schedule.push_back({Disturbance::Kind::temp_ramp, 1.0, 2.0, 0.0});
    CHECK_THROWS_AS(Plant(ramp, 10.0), ConfigError);

    PlantConfig zero_alpha;
    zero_alpha.alpha = 0.0;
    CHECK_THROWS_AS(Plant(zero_alpha, 10.0), ConfigError);

    Plant plant(PlantConfig{}, 10.0);
    CHECK_THROWS_AS(plant.step(10.0, 0.0), ConfigError);
    CHECK_THROWS_AS(plant.step(std::nan(""), 0.01), SimFault);
}

TEST_CASE("a chain collapsing to zero signal faults instead of returning -inf") {
    PlantConfig cfg;
    cfg.stage_gains_db = {-1e308, -1e308};
    Plant plant(cfg, 10.0);
    CHECK_THROWS_AS(plant.step(10.0, 0.01), SimFault);
}

TEST_CASE("local slope at the working point, saturated detection low") {
    const PlantConfig cfg;
    const LinearizeResult at_work = linearize(cfg, 10.0);
    CHECK(at_work.alpha_eff == doctest::Approx(0.9748810534786045).epsilon(1e-9));
    CHECK_FALSE(at_work.saturated);

    // Zero attenuation alone only grazes the limit; extra drive pushes the
    // amplifier deep enough that the local slope collapses.
    PlantConfig hot_cfg;
    hot_cfg.drive_dbm = -15.0;
    const LinearizeResult hot = linearize(hot_cfg, 0.0);
    CHECK(hot.saturated);
    CHECK(hot.alpha_eff < 0.1);
    CHECK(linearize(cfg, 0.0).alpha_eff < 0.5); // mild limiting already at u = 0

    PlantConfig lin;
    lin.compression = false;
    CHECK(linearize(lin, 10.0).alpha_eff == doctest::Approx(1.0).epsilon(1e-9));
    lin.alpha = 2.0;
    CHECK(linearize(lin, 10.0).alpha_eff == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("plant clock advances by the step size") {
    Plant plant(PlantConfig{}, 10.0);
    plant.step(10.0, 0.1);
    plant.step(10.0, 0.1);
    plant.step(10.0, 0.1);
    CHECK(plant.time_s() == doctest::Approx(0.3).epsilon(1e-12));
}
