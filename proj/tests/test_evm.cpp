#include <doctest.h>

#include "powerloop/errors.hpp"
#include "powerloop/evm.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace powerloop;

namespace {

double mean_power(const std::vector<std::complex<double>>& symbols) {
    double sum = 0.0;
    for (const auto& s : symbols) sum += std::norm(s);
    return sum / static_cast<double>(symbols.size());
}

} // namespace

TEST_CASE("constellation grids: size, unit mean power, lattice scale") {
    for (const int order : {16, 64, 256}) {
        const auto grid = qam_grid(order);
        CHECK(grid.size() == static_cast<std::size_t>(order));
        CHECK(mean_power(grid) == doctest::Approx(1.0).epsilon(1e-12));
    }
    // Innermost lattice point of each order sits at 1/sqrt(mean lattice power).
    const auto q16 = qam_grid(16);
    double min_re = 1e300;
    for (const auto& s : q16) {
        if (s.real() > 0.0) min_re = std::min(min_re, s.real());
    }
    CHECK(min_re == doctest::Approx(1.0 / std::sqrt(10.0)).epsilon(1e-12));

    CHECK_THROWS_AS(qam_grid(32), ConfigError);
    CHECK_THROWS_AS(qam_grid(0), ConfigError);
}

TEST_CASE("symbol batches: reproducible, renormalized to unit power") {
    const auto a = generate_qam(64, 512, 3);
    const auto b = generate_qam(64, 512, 3);
    const auto c = generate_qam(64, 512, 4);
    CHECK(a == b);
    CHECK(a != c);
    CHECK(mean_power(a) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(generate_qam(64, 0, 1), ConfigError);
}

TEST_CASE("error vector magnitude: gain fit removes bulk gain and phase") {
    const auto ref = generate_qam(16, 256, 1);
    CHECK(compute_evm_rms(ref, ref) == doctest::Approx(0.0).epsilon(1e-12));

    std::vector<std::complex<double>> scaled(ref);
    const std::complex<double> g{2.0, 0.5};
    for (auto& s : scaled) s *= g;
    CHECK(compute_evm_rms(ref, scaled) < 1e-9);
}

TEST_CASE("error vector magnitude: pinned four-symbol case") {
    const std::vector<std::complex<double>> ref = {
        {1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
    std::vector<std::complex<double>> meas(ref);
    meas[0] = {1.1, 0.0};
    CHECK(compute_evm_rms(ref, meas) == doctest::Approx(4.224514164802144).epsilon(1e-12));
}

TEST_CASE("error vector magnitude rejects mismatched batches") {
    const std::vector<std::complex<double>> ref = {{1.0, 0.0}, {-1.0, 0.0}};
    const std::vector<std::complex<double>> shorter = {{1.0, 0.0}};
    CHECK_THROWS_AS(compute_evm_rms(ref, shorter), ConfigError);
    const std::vector<std::complex<double>> empty;
    CHECK_THROWS_AS(compute_evm_rms(empty, empty), ConfigError);
}

TEST_CASE("distortion sweep: shape and monotone output power") {
    const PlantConfig plant;
    const EvmSweepConfig cfg;
    const auto curves = evm_vs_power_sweep(plant, cfg);
    REQUIRE(curves.size() == 3);
    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
        CHECK(curves[ci].atten_db == cfg.atten_db[ci]);
        REQUIRE(curves[ci].points.size() == 46);
        for (std::size_t k = 1; k < curves[ci].points.size(); ++k) {
            CHECK(curves[ci].points[k].p_out_dbm > curves[ci].points[k - 1].p_out_dbm);
        }
        for (const EvmPoint& pt : curves[ci].points) CHECK(pt.evm_pct >= 0.0);
    }
}

TEST_CASE("distortion sweep: attenuation and drive trade one for one") {
    const PlantConfig plant;
    EvmSweepConfig cfg;
    cfg.atten_db = {0.0, 5.0};
    const auto curves = evm_vs_power_sweep(plant, cfg);
    // Five more dB of attenuation at five more dB of drive is the same point.
    const auto& base = curves[0].points;
    const auto& shifted = curves[1].points;
    for (std::size_t k = 0; k + 5 < base.size(); ++k) {
        CHECK(shifted[k + 5].p_out_dbm == doctest::Approx(base[k].p_out_dbm).epsilon(1e-9));
        CHECK(shifted[k + 5].evm_pct == doctest::Approx(base[k].evm_pct).epsilon(1e-9));
    }
}

TEST_CASE("distortion knee sits just below the saturation ceiling") {
    const PlantConfig plant;
    const EvmSweepConfig cfg;
    const auto curves = evm_vs_power_sweep(plant, cfg);
    const auto knee = evm_knee(curves[0], 1.5);
    REQUIRE(knee.has_value());
    CHECK(knee->p_out_dbm > -29.6);
    CHECK(knee->p_out_dbm < -28.6);
    CHECK(knee->evm_pct == 1.5);

    // Same chain, same knee, independent of how the power was reached.
    for (std::size_t ci = 1; ci < curves.size(); ++ci) {
        const auto other = evm_knee(curves[ci], 1.5);
        REQUIRE(other.has_value());
        CHECK(other->p_out_dbm == doctest::Approx(knee->p_out_dbm).epsilon(1e-6));
    }

    for (const EvmPoint& pt : curves[0].points) {
        if (pt.p_out_dbm <= -30.0) CHECK(pt.evm_pct < 1.5);
        if (pt.p_out_dbm >= knee->p_out_dbm + 0.5) CHECK(pt.evm_pct > 1.5);
    }
}

TEST_CASE("knee interpolation on a hand-built curve") {
    EvmCurve curve;
    curve.points = {{-10.0, -35.0, 0.5}, {-9.0, -34.0, 1.0}, {-8.0, -33.0, 2.0}};
    const auto knee = evm_knee(curve, 1.5);
    REQUIRE(knee.has_value());
    CHECK(knee->p_out_dbm == doctest::Approx(-33.5).epsilon(1e-12));
    CHECK(knee->drive_dbm == doctest::Approx(-8.5).epsilon(1e-12));

    CHECK_FALSE(evm_knee(curve, 5.0).has_value());
    CHECK_THROWS_AS(evm_knee(curve, 0.0), ConfigError);
}

TEST_CASE("distortion sweep validates its configuration") {
    const PlantConfig plant;
    EvmSweepConfig cfg;
    cfg.atten_db.clear();
    CHECK_THROWS_AS(evm_vs_power_sweep(plant, cfg), ConfigError);
    cfg = EvmSweepConfig{};
    cfg.drive_min_dbm = 5.0;
    cfg.drive_max_dbm = -40.0;
    CHECK_THROWS_AS(evm_vs_power_sweep(plant, cfg), ConfigError);
    cfg = EvmSweepConfig{};
    cfg.drive_step_db = 0.0;
    CHECK_THROWS_AS(evm_vs_power_sweep(plant, cfg), ConfigError);
}
