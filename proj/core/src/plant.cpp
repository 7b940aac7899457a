#include "powerloop/plant.hpp"

#include "powerloop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace powerloop {

RfFrequencies rf_frequencies(double f_lo_ghz, double f_if_ghz) {
    if (!std::isfinite(f_lo_ghz) || f_lo_ghz <= 0.0) {
        throw ConfigError("LO frequency must be positive");
    }
    if (!std::isfinite(f_if_ghz) || f_if_ghz < 0.0) {
        throw ConfigError("IF frequency must be non-negative");
    }
    const double doubled = 2.0 * f_lo_ghz;
    if (f_if_ghz >= doubled) {
        throw ConfigError("IF frequency must stay below the doubled LO");
    }
    return RfFrequencies{doubled + f_if_ghz, doubled - f_if_ghz};
}

namespace {

void validate(const PaParams& pa) {
    if (!std::isfinite(pa.gain_db)) throw ConfigError("PA gain must be finite");
    if (!std::isfinite(pa.sat_out_dbm)) throw ConfigError("PA saturation level must be finite");
    if (!std::isfinite(pa.smoothness) || pa.smoothness <= 0.0) {
        throw ConfigError("PA smoothness must be positive");
    }
}

void validate(const PlantConfig& c) {
    validate(c.pa);
    if (!std::isfinite(c.drive_dbm)) throw ConfigError("drive power must be finite");
    for (double g : c.stage_gains_db) {
        if (!std::isfinite(g)) throw ConfigError("stage gain must be finite");
    }
    if (!std::isfinite(c.alpha) || c.alpha <= 0.0) throw ConfigError("alpha must be positive");
    if (!std::isfinite(c.link_atten0_db)) throw ConfigError("link attenuation must be finite");
    if (!std::isfinite(c.thermal0_db)) throw ConfigError("thermal offset must be finite");
    if (!std::isfinite(c.lag_tau_s) || c.lag_tau_s < 0.0) {
        throw ConfigError("lag time constant must be non-negative");
    }
    double prev = -1e300;
    for (const Disturbance& d : c.schedule) {
        if (!std::isfinite(d.t_s) || d.t_s < 0.0) throw ConfigError("disturbance time must be non-negative");
        if (!std::isfinite(d.magnitude)) throw ConfigError("disturbance magnitude must be finite");
        if (d.kind == Disturbance::Kind::temp_ramp &&
            (!std::isfinite(d.duration_s) || d.duration_s <= 0.0)) {
            throw ConfigError("ramp duration must be positive");
        }
        if (d.t_s < prev) throw ConfigError("disturbance schedule must be sorted by time");
        prev = d.t_s;
    }
}

double stage_sum(const PlantConfig& c) {
    return std::accumulate(c.stage_gains_db.begin(), c.stage_gains_db.end(), 0.0);
}

} // namespace

double pa_amam(double v_in, const PaParams& pa) {
    validate(pa);
    if (!std::isfinite(v_in) || v_in < 0.0) throw ConfigError("PA input amplitude must be non-negative");
    if (v_in == 0.0) return 0.0;
    const double g = std::pow(10.0, pa.gain_db / 20.0);
    const double v_sat = std::pow(10.0, pa.sat_out_dbm / 20.0);
    const double driven = g * v_in;
    const double twop = 2.0 * pa.smoothness;
    return driven / std::pow(1.0 + std::pow(driven / v_sat, twop), 1.0 / twop);
}

double Plant::static_output(const PlantConfig& config, double u_db, double link_atten_db,
                            double thermal_db) {
    const double pre_pa_dbm = config.drive_dbm + stage_sum(config) - config.alpha * u_db -
                              link_atten_db + thermal_db;
    if (!config.compression) return pre_pa_dbm + config.pa.gain_db;
    const double v_in = std::pow(10.0, pre_pa_dbm / 20.0);
    const double v_out = pa_amam(v_in, config.pa);
    return 20.0 * std::log10(v_out);
}

Plant::Plant(PlantConfig config, double u0_db) : config_(std::move(config)) {
    validate(config_);
    link_atten_ = config_.link_atten0_db;
    thermal_ = config_.thermal0_db;
    lagged_ = static_output(config_, u0_db, link_atten_, thermal_);
}

double Plant::step(double u_applied_db, double dt_s) {
    if (!std::isfinite(dt_s) || dt_s <= 0.0) throw ConfigError("plant step must be positive");
    if (!std::isfinite(u_applied_db)) throw SimFault("non-finite command applied to plant");

    const double t0 = t_;
    const double t1 = t_ + dt_s;
    const double eps = 1e-9 * std::max(1.0, t1);

    // Steps fire once when their onset falls inside this interval.
    while (next_event_ < config_.schedule.size() &&
           config_.schedule[next_event_].t_s <= t1 + eps) {
        const Disturbance& d = config_.schedule[next_event_];
        if (d.kind == Disturbance::Kind::link_step) link_atten_ += d.magnitude;
        ++next_event_;
    }
    // Ramps contribute their overlap with the interval, whether or not the
    // event pointer has passed them.
    for (const Disturbance& d : config_.schedule) {
        if (d.kind != Disturbance::Kind::temp_ramp) continue;
        if (d.t_s > t1 + eps) break;
        const double lo = std::max(t0, d.t_s);
        const double hi = std::min(t1, d.t_s + d.duration_s);
        if (hi > lo) thermal_ += d.magnitude * (hi - lo);
    }

    const double instant = static_output(config_, u_applied_db, link_atten_, thermal_);
    if (config_.lag_tau_s > 0.0) {
        const double k = 1.0 - std::exp(-dt_s / config_.lag_tau_s);
        lagged_ += k * (instant - lagged_);
    } else {
        lagged_ = instant;
    }
    t_ = t1;
    if (!std::isfinite(lagged_)) throw SimFault("plant output is non-finite");
    return lagged_;
}

LinearizeResult linearize(const PlantConfig& config, double u_op_db) {
    validate(config);
    if (!std::isfinite(u_op_db)) throw ConfigError("operating point must be finite");
    const double delta = 0.01;
    const double up =
        Plant::static_output(config, u_op_db + delta, config.link_atten0_db, config.thermal0_db);
    const double dn =
        Plant::static_output(config, u_op_db - delta, config.link_atten0_db, config.thermal0_db);
    LinearizeResult r;
    r.alpha_eff = -(up - dn) / (2.0 * delta);
    r.saturated = r.alpha_eff < 0.1 * config.alpha;
    return r;
}

} // namespace powerloop
