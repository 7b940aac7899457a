#pragma once

#include "powerloop/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace powerloop {

// Log-linear RMS power detector: V = slope * (P - p0), clamped to the output
// voltage swing. The stated input range is where the log-linear fit holds;
// readings outside it are flagged by measure_power.
struct DetectorModel {
    double slope_v_per_db = 0.0275;
    double p0_dbm = -45.0;
    double range_min_dbm = -40.0;
    double range_max_dbm = 0.0;
    double vmin_v = 0.0;
    double vmax_v = 3.3;

    bool operator==(const DetectorModel&) const = default;
};

double detector_voltage(double p_rf_dbm, const DetectorModel& det);

struct AdcModel {
    bool enabled = true;
    int bits = 12;
    double vref_v = 3.3;
    double noise_codes = 0.0; // reference noise, characterization runs only

    bool operator==(const AdcModel&) const = default;
};

struct Measurement {
    double p_est_dbm = 0.0;
    bool saturated = false; // rails hit or input outside the detector range
};

// Detector + ADC + inverse map back to power. Deterministic unless an rng is
// supplied together with nonzero ADC noise.
Measurement measure_power(double p_rf_dbm, const DetectorModel& det, const AdcModel& adc,
                          Rng* rng = nullptr);

struct CalPoint {
    double p_in_dbm = 0.0;
    double v_out_v = 0.0;
};

// Synthetic characterization sweep: n evenly spaced power points with optional
// Gaussian voltage noise.
std::vector<CalPoint> generate_sweep(const DetectorModel& det, double p_lo_dbm, double p_hi_dbm,
                                     int n, double noise_v_sigma, std::uint64_t seed);

struct CalibrationResult {
    double slope_v_per_db = 0.0;
    double p0_dbm = 0.0;
    double r2 = 0.0;
};

// Ordinary least squares of voltage on power. Needs at least three points
// with spread in power.
CalibrationResult calibrate(std::span<const CalPoint> points);

} // namespace powerloop
