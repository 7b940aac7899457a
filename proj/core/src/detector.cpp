#include "powerloop/detector.hpp"

#include "powerloop/errors.hpp"

#include <algorithm>
#include <cmath>

namespace powerloop {

namespace {

void validate(const DetectorModel& det) {
    if (!std::isfinite(det.slope_v_per_db) || det.slope_v_per_db <= 0.0) {
        throw ConfigError("detector slope must be positive");
    }
    if (!std::isfinite(det.p0_dbm)) throw ConfigError("detector intercept must be finite");
    if (!(det.range_min_dbm < det.range_max_dbm)) {
        throw ConfigError("detector range must be non-empty");
    }
    if (!(det.vmin_v < det.vmax_v)) throw ConfigError("detector voltage swing must be non-empty");
}

void validate(const AdcModel& adc) {
    if (!adc.enabled) return;
    if (adc.bits < 1 || adc.bits > 24) throw ConfigError("ADC resolution out of range");
    if (!std::isfinite(adc.vref_v) || adc.vref_v <= 0.0) {
        throw ConfigError("ADC reference must be positive");
    }
    if (!std::isfinite(adc.noise_codes) || adc.noise_codes < 0.0) {
        throw ConfigError("ADC noise must be non-negative");
    }
}

} // namespace

double detector_voltage(double p_rf_dbm, const DetectorModel& det) {
    validate(det);
    if (!std::isfinite(p_rf_dbm)) throw SimFault("non-finite power at detector");
    const double v = det.slope_v_per_db * (p_rf_dbm - det.p0_dbm);
    return std::clamp(v, det.vmin_v, det.vmax_v);
}

Measurement measure_power(double p_rf_dbm, const DetectorModel& det, const AdcModel& adc,
                          Rng* rng) {
    validate(det);
    validate(adc);
    const double v = detector_voltage(p_rf_dbm, det);

    Measurement m;
    m.saturated = p_rf_dbm < det.range_min_dbm || p_rf_dbm > det.range_max_dbm;

    double v_seen = v;
    if (adc.enabled) {
        const double full = static_cast<double>((1 << adc.bits) - 1);
        const double lsb = adc.vref_v / static_cast<double>(1 << adc.bits);
        double code = std::round(v / lsb);
        if (adc.noise_codes > 0.0 && rng != nullptr) {
            code = std::round(v / lsb + adc.noise_codes * rng->gaussian());
        }
        code = std::clamp(code, 0.0, full);
        if (code == 0.0 || code == full) m.saturated = true;
        v_seen = code * lsb;
    }
    m.p_est_dbm = det.p0_dbm + v_seen / det.slope_v_per_db;
    if (!std::isfinite(m.p_est_dbm)) throw SimFault("power estimate is non-finite");
    return m;
}

std::vector<CalPoint> generate_sweep(const DetectorModel& det, double p_lo_dbm, double p_hi_dbm,
                                     int n, double noise_v_sigma, std::uint64_t seed) {
    validate(det);
    if (n < 2) throw ConfigError("sweep needs at least two points");
    if (!(p_lo_dbm < p_hi_dbm)) throw ConfigError("sweep range must be non-empty");
    if (!std::isfinite(noise_v_sigma) || noise_v_sigma < 0.0) {
        throw ConfigError("sweep noise must be non-negative");
    }
    Rng rng(seed);
    std::vector<CalPoint> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double p = p_lo_dbm + (p_hi_dbm - p_lo_dbm) * static_cast<double>(i) /
                                        static_cast<double>(n - 1);
        double v = det.slope_v_per_db * (p - det.p0_dbm);
        if (noise_v_sigma > 0.0) v += noise_v_sigma * rng.gaussian();
        pts.push_back(CalPoint{p, v});
    }
    return pts;
}

CalibrationResult calibrate(std::span<const CalPoint> points) {
    if (points.size() < 3) throw ConfigError("calibration needs at least three points");

    const double n = static_cast<double>(points.size());
    double mean_p = 0.0;
    double mean_v = 0.0;
    for (const CalPoint& pt : points) {
        if (!std::isfinite(pt.p_in_dbm) || !std::isfinite(pt.v_out_v)) {
            throw ConfigError("calibration points must be finite");
        }
        mean_p += pt.p_in_dbm;
        mean_v += pt.v_out_v;
    }
    mean_p /= n;
    mean_v /= n;

    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (const CalPoint& pt : points) {
        const double dx = pt.p_in_dbm - mean_p;
        const double dy = pt.v_out_v - mean_v;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) throw ConfigError("calibration needs spread in input power");

    const double slope = sxy / sxx;
    if (slope <= 0.0) throw ConfigError("calibration slope must be positive");
    const double intercept = mean_v - slope * mean_p;

    double ss_res = 0.0;
    for (const CalPoint& pt : points) {
        const double r = pt.v_out_v - (slope * pt.p_in_dbm + intercept);
        ss_res += r * r;
    }
    CalibrationResult result;
    result.slope_v_per_db = slope;
    result.p0_dbm = -intercept / slope;
    result.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return result;
}

} // namespace powerloop
