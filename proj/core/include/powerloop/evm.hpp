#pragma once

#include "powerloop/plant.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace powerloop {

// Ideal square-QAM constellation points, scaled so the grid's mean power is
// exactly 1. Supported orders: 16, 64, 256.
std::vector<std::complex<double>> qam_grid(int order);

// Random symbol batch drawn uniformly from the grid, then renormalized so the
// batch's own mean power is exactly 1. Identical seed, identical batch.
std::vector<std::complex<double>> generate_qam(int order, int n_symbols, std::uint64_t seed);

// RMS error-vector magnitude in percent after a single complex least-squares
// gain fit between measured and reference, removing bulk gain and phase.
double compute_evm_rms(std::span<const std::complex<double>> reference,
                       std::span<const std::complex<double>> measured);

struct EvmPoint {
    double drive_dbm = 0.0;
    double p_out_dbm = 0.0;
    double evm_pct = 0.0;
};

struct EvmCurve {
    double atten_db = 0.0;
    std::vector<EvmPoint> points;
};

struct EvmSweepConfig {
    std::vector<double> atten_db = {0.0, 5.0, 10.0};
    double drive_min_dbm = -40.0;
    double drive_max_dbm = 5.0;
    double drive_step_db = 1.0;
    int order = 64;
    int n_symbols = 4096;
    std::uint64_t seed = 1;

    bool operator==(const EvmSweepConfig&) const = default;
};

// Push one symbol batch through the static chain at every (attenuation, drive)
// operating point and record mean output power vs EVM.
std::vector<EvmCurve> evm_vs_power_sweep(const PlantConfig& plant, const EvmSweepConfig& cfg);

// Output power where the curve first crosses the EVM threshold going up,
// linearly interpolated between the straddling points. Empty when the curve
// never crosses.
std::optional<EvmPoint> evm_knee(const EvmCurve& curve, double threshold_pct);

} // namespace powerloop
