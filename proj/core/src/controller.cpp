#include "powerloop/controller.hpp"

#include "powerloop/errors.hpp"

#include <algorithm>
#include <cmath>

namespace powerloop {

namespace {

void validate(const ActuatorModel& act) {
    if (!std::isfinite(act.min_db) || !std::isfinite(act.max_db) || !(act.min_db < act.max_db)) {
        throw ConfigError("actuator range must be finite with min < max");
    }
    if (!std::isfinite(act.step_db) || act.step_db < 0.0) {
        throw ConfigError("actuator step must be non-negative");
    }
    if (act.step_db > act.max_db - act.min_db) {
        throw ConfigError("actuator step exceeds the actuator range");
    }
    if (!std::isfinite(act.slew_db) || act.slew_db < 0.0) {
        throw ConfigError("actuator slew limit must be non-negative");
    }
}

void validate(const PidGains& g) {
    if (!std::isfinite(g.kp) || !std::isfinite(g.ki) || !std::isfinite(g.kd) ||
        g.kp < 0.0 || g.ki < 0.0 || g.kd < 0.0) {
        throw ConfigError("controller gains must be finite and non-negative");
    }
}

void require_ts(double ts) {
    if (!std::isfinite(ts) || ts <= 0.0) throw ConfigError("sample period must be positive");
}

} // namespace

double quantize_command(double u_db, const ActuatorModel& act,
                        std::optional<double> prev_applied) {
    validate(act);
    if (!std::isfinite(u_db)) throw ConfigError("command must be finite");

    double u = std::clamp(u_db, act.min_db, act.max_db);
    if (act.step_db > 0.0) {
        const double r = (u - act.min_db) / act.step_db;
        const double fl = std::floor(r);
        const double frac = r - fl;
        double n;
        if (frac > 0.5) {
            n = fl + 1.0;
        } else if (frac < 0.5) {
            n = fl;
        } else {
            // Tie: pick the candidate closer to zero attenuation.
            const double lo = act.min_db + fl * act.step_db;
            const double hi = act.min_db + (fl + 1.0) * act.step_db;
            n = std::abs(lo) <= std::abs(hi) ? fl : fl + 1.0;
        }
        u = std::clamp(act.min_db + n * act.step_db, act.min_db, act.max_db);
    }
    if (act.slew_db > 0.0 && prev_applied.has_value()) {
        // Keep the slewed value on the grid by flooring the limit to whole steps.
        double max_delta = act.slew_db;
        if (act.step_db > 0.0) {
            max_delta = std::floor(act.slew_db / act.step_db + 1e-9) * act.step_db;
        }
        u = std::clamp(u, *prev_applied - max_delta, *prev_applied + max_delta);
    }
    return u;
}

double analytic_time_constant(double alpha, double ki) {
    if (!std::isfinite(alpha) || alpha <= 0.0) throw ConfigError("alpha must be positive");
    if (!std::isfinite(ki) || ki <= 0.0) throw ConfigError("ki must be positive");
    return 1.0 / (alpha * ki);
}

PidController::PidController(PidGains gains, ActuatorModel act, double u0_db)
    : gains_(gains), act_(act) {
    validate(gains_);
    validate(act_);
    reset(u0_db);
}

void PidController::reset(double u0_db) {
    // Seed the accumulator so the first zero-error output equals u0.
    integral_ = gains_.ki != 0.0 ? u0_db / gains_.ki : 0.0;
    prev_e_ = 0.0;
    first_ = true;
}

double PidController::step(double e_db, double ts_s) {
    require_ts(ts_s);
    if (!std::isfinite(e_db)) throw SimFault("non-finite error fed to controller");

    const double de = first_ ? 0.0 : (e_db - prev_e_) / ts_s;
    const double cand_integral = integral_ + e_db * ts_s;
    double u = gains_.kp * e_db + gains_.ki * cand_integral + gains_.kd * de;
    const bool windup = (u > act_.max_db && e_db > 0.0) || (u < act_.min_db && e_db < 0.0);
    if (windup) {
        u = gains_.kp * e_db + gains_.ki * integral_ + gains_.kd * de;
    } else {
        integral_ = cand_integral;
    }
    prev_e_ = e_db;
    first_ = false;
    return u;
}

IntegralController::IntegralController(double ki, ActuatorModel act, double u0_db)
    : ki_(ki), act_(act) {
    if (!std::isfinite(ki_) || ki_ < 0.0) throw ConfigError("ki must be finite and non-negative");
    validate(act_);
    reset(u0_db);
}

void IntegralController::reset(double u0_db) { u_ = u0_db; }

double IntegralController::step(double e_db, double ts_s) {
    require_ts(ts_s);
    if (!std::isfinite(e_db)) throw SimFault("non-finite error fed to controller");

    const double cand = u_ + ki_ * e_db * ts_s;
    const bool windup = (cand > act_.max_db && e_db > 0.0) || (cand < act_.min_db && e_db < 0.0);
    if (!windup) u_ = cand;
    return u_;
}

FuzzyIntegralController::FuzzyIntegralController(FuzzyEngine engine, ActuatorModel act,
                                                 double u0_db)
    : engine_(std::move(engine)), act_(act) {
    validate(act_);
    reset(u0_db);
}

void FuzzyIntegralController::reset(double u0_db) {
    u_ = u0_db;
    prev_e_ = 0.0;
    first_ = true;
}

double FuzzyIntegralController::step(double e_db, double ts_s) {
    require_ts(ts_s);
    if (!std::isfinite(e_db)) throw SimFault("non-finite error fed to controller");

    const double de = first_ ? 0.0 : (e_db - prev_e_) / ts_s;
    const double du = engine_.step(e_db, de);
    const double cand = u_ + du * ts_s;
    const bool windup = (cand > act_.max_db && du > 0.0) || (cand < act_.min_db && du < 0.0);
    if (!windup) u_ = cand;
    prev_e_ = e_db;
    first_ = false;
    return u_;
}

} // namespace powerloop
