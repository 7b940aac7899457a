#include "powerloop/evm.hpp"

#include "powerloop/errors.hpp"
#include "powerloop/rng.hpp"

#include <cmath>
#include <numeric>

namespace powerloop {

namespace {

int side_for_order(int order) {
    switch (order) {
    case 16: return 4;
    case 64: return 8;
    case 256: return 16;
    default: throw ConfigError("unsupported QAM order (use 16, 64 or 256)");
    }
}

} // namespace

std::vector<std::complex<double>> qam_grid(int order) {
    const int side = side_for_order(order);
    // Mean power of the +/-1, +/-3, ... lattice has the closed form 2(L^2-1)/3.
    const double mean_pow = 2.0 * (static_cast<double>(side) * side - 1.0) / 3.0;
    const double scale = 1.0 / std::sqrt(mean_pow);
    std::vector<std::complex<double>> grid;
    grid.reserve(static_cast<std::size_t>(order));
    for (int i = 0; i < side; ++i) {
        const double re = static_cast<double>(2 * i - side + 1);
        for (int q = 0; q < side; ++q) {
            const double im = static_cast<double>(2 * q - side + 1);
            grid.emplace_back(re * scale, im * scale);
        }
    }
    return grid;
}

std::vector<std::complex<double>> generate_qam(int order, int n_symbols, std::uint64_t seed) {
    const int side = side_for_order(order);
    if (n_symbols < 1) throw ConfigError("batch needs at least one symbol");
    const auto grid = qam_grid(order);
    const std::uint64_t mask = static_cast<std::uint64_t>(side) - 1; // side is a power of two

    Rng rng(seed);
    std::vector<std::complex<double>> batch;
    batch.reserve(static_cast<std::size_t>(n_symbols));
    double sum_pow = 0.0;
    for (int k = 0; k < n_symbols; ++k) {
        const std::uint64_t bits = rng.next_u64();
        const std::size_t i = static_cast<std::size_t>(bits & mask);
        const std::size_t q = static_cast<std::size_t>((bits >> 8) & mask);
        const std::complex<double> s = grid[i * static_cast<std::size_t>(side) + q];
        sum_pow += std::norm(s);
        batch.push_back(s);
    }
    const double scale = 1.0 / std::sqrt(sum_pow / static_cast<double>(n_symbols));
    for (auto& s : batch) s *= scale;
    return batch;
}

double compute_evm_rms(std::span<const std::complex<double>> reference,
                       std::span<const std::complex<double>> measured) {
    if (reference.empty()) throw ConfigError("EVM needs a non-empty reference");
    if (reference.size() != measured.size()) {
        throw ConfigError("EVM reference and measured batches must match in length");
    }

    std::complex<double> cross{0.0, 0.0};
    double ref_pow = 0.0;
    for (std::size_t k = 0; k < reference.size(); ++k) {
        cross += std::conj(reference[k]) * measured[k];
        ref_pow += std::norm(reference[k]);
    }
    if (ref_pow <= 0.0) throw ConfigError("EVM reference has zero power");
    const std::complex<double> gain = cross / ref_pow;
    const double fit_pow = std::norm(gain) * ref_pow;
    if (fit_pow <= 0.0) throw SimFault("EVM gain fit collapsed to zero");

    double err_pow = 0.0;
    for (std::size_t k = 0; k < reference.size(); ++k) {
        err_pow += std::norm(measured[k] - gain * reference[k]);
    }
    return 100.0 * std::sqrt(err_pow / fit_pow);
}

std::vector<EvmCurve> evm_vs_power_sweep(const PlantConfig& plant, const EvmSweepConfig& cfg) {
    if (!(cfg.drive_min_dbm < cfg.drive_max_dbm)) throw ConfigError("drive sweep range is empty");
    if (!std::isfinite(cfg.drive_step_db) || cfg.drive_step_db <= 0.0) {
        throw ConfigError("drive sweep step must be positive");
    }
    if (cfg.atten_db.empty()) throw ConfigError("attenuation list is empty");
    const auto batch = generate_qam(cfg.order, cfg.n_symbols, cfg.seed);

    const double stages = std::accumulate(plant.stage_gains_db.begin(),
                                          plant.stage_gains_db.end(), 0.0);
    const double pa_lin_gain = std::pow(10.0, plant.pa.gain_db / 20.0);
    const std::size_t n = batch.size();

    std::vector<double> mag(n);
    std::vector<std::complex<double>> phase(n);
    for (std::size_t k = 0; k < n; ++k) {
        mag[k] = std::abs(batch[k]);
        phase[k] = batch[k] / mag[k];
    }

    std::vector<EvmCurve> curves;
    curves.reserve(cfg.atten_db.size());
    std::vector<std::complex<double>> measured(n);
    for (double atten : cfg.atten_db) {
        EvmCurve curve;
        curve.atten_db = atten;
        for (double drive = cfg.drive_min_dbm; drive <= cfg.drive_max_dbm + 1e-9;
             drive += cfg.drive_step_db) {
            // Mean power the chain would deliver if it stayed linear.
            const double p_lin_dbm = drive + stages + plant.pa.gain_db - plant.alpha * atten -
                                     plant.link_atten0_db + plant.thermal0_db;
            const double amp = std::pow(10.0, p_lin_dbm / 20.0);
            double out_pow = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                double v_out = amp * mag[k];
                if (plant.compression) {
                    v_out = pa_amam(v_out / pa_lin_gain, plant.pa);
                }
                measured[k] = v_out * phase[k];
                out_pow += v_out * v_out;
            }
            EvmPoint pt;
            pt.drive_dbm = drive;
            pt.p_out_dbm = 10.0 * std::log10(out_pow / static_cast<double>(n));
            pt.evm_pct = compute_evm_rms(batch, measured);
            curve.points.push_back(pt);
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

std::optional<EvmPoint> evm_knee(const EvmCurve& curve, double threshold_pct) {
    if (!std::isfinite(threshold_pct) || threshold_pct <= 0.0) {
        throw ConfigError("EVM threshold must be positive");
    }
    const auto& pts = curve.points;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double lo = pts[i - 1].evm_pct;
        const double hi = pts[i].evm_pct;
        if (lo < threshold_pct && hi >= threshold_pct) {
            const double f = (threshold_pct - lo) / (hi - lo);
            EvmPoint knee;
            knee.drive_dbm = pts[i - 1].drive_dbm + f * (pts[i].drive_dbm - pts[i - 1].drive_dbm);
            knee.p_out_dbm = pts[i - 1].p_out_dbm + f * (pts[i].p_out_dbm - pts[i - 1].p_out_dbm);
            knee.evm_pct = threshold_pct;
            return knee;
        }
    }
    return std::nullopt;
}

} // namespace powerloop
