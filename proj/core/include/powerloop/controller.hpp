#pragma once

#include "powerloop/fuzzy.hpp"

#include <memory>
#include <optional>
#include <string_view>

namespace powerloop {

// Digital step attenuator seen by every controller: a clamped range quantized
// to a fixed step, with an optional per-update slew limit.
struct ActuatorModel {
    double min_db = 0.0;
    double max_db = 31.5;
    double step_db = 0.5;  // 0 disables quantization (continuous actuator)
    double slew_db = 0.0;  // max change per update; 0 disables

    bool operator==(const ActuatorModel&) const = default;
};

// Clamp to range, snap to the step grid (ties toward zero attenuation), then
// apply the slew limit relative to prev_applied when one is configured.
double quantize_command(double u_db, const ActuatorModel& act,
                        std::optional<double> prev_applied = std::nullopt);

// First-order closed-loop time constant of a pure integral controller on a
// linear chain with slope alpha: tau = 1 / (alpha * ki).
double analytic_time_constant(double alpha, double ki);

struct PidGains {
    double kp = 0.0;
    double ki = 2.0;
    double kd = 0.0;

    bool operator==(const PidGains&) const = default;
};

// Common stepping interface. Controllers regulate measured excess over the
// reference: a positive input calls for more attenuation. step() returns the
// raw (pre-quantization) attenuation command in dB.
class Controller {
public:
    virtual ~Controller() = default;
    virtual double step(double e_db, double ts_s) = 0;
    virtual void reset(double u0_db) = 0;
    virtual std::string_view name() const = 0;
};

// Positional PID with conditional anti-windup: the accumulator freezes while
// the raw command sits beyond the actuator range and the error keeps pushing
// it further out. The integral term covers samples 0..k inclusive.
class PidController final : public Controller {
public:
    PidController(PidGains gains, ActuatorModel act, double u0_db = 0.0);

    double step(double e_db, double ts_s) override;
    void reset(double u0_db) override;
    std::string_view name() const override { return "pid"; }

    double integral() const { return integral_; }

private:
    PidGains gains_;
    ActuatorModel act_;
    double integral_ = 0.0;
    double prev_e_ = 0.0;
    bool first_ = true;
};

// Incremental pure-integral law u[k] = u[k-1] + ki * e[k] * Ts, frozen at the
// actuator rails under the same conditional rule as the PID.
class IntegralController final : public Controller {
public:
    IntegralController(double ki, ActuatorModel act, double u0_db = 0.0);

    double step(double e_db, double ts_s) override;
    void reset(double u0_db) override;
    std::string_view name() const override { return "i"; }

    double command() const { return u_; }

private:
    double ki_;
    ActuatorModel act_;
    double u_ = 0.0;
};

// Fuzzy-integral law u[k] = u[k-1] + f(e, de) * Ts where f is the inference
// step. de is the backward difference of the input, zero on the first sample.
class FuzzyIntegralController final : public Controller {
public:
    FuzzyIntegralController(FuzzyEngine engine, ActuatorModel act, double u0_db = 0.0);

    double step(double e_db, double ts_s) override;
    void reset(double u0_db) override;
    std::string_view name() const override { return "fi"; }

    double command() const { return u_; }
    const FuzzyEngine& engine() const { return engine_; }

private:
    FuzzyEngine engine_;
    ActuatorModel act_;
    double u_ = 0.0;
    double prev_e_ = 0.0;
    bool first_ = true;
};

} // namespace powerloop
