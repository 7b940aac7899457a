#pragma once

#include "powerloop/scenario.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace powerloop {

// One control interval. e_db is reference minus estimate; u_raw_db is the
// controller output before actuator quantization, u_applied_db after. The
// applied command takes effect on the next interval's plant step.
struct TraceRow {
    double t_s = 0.0;
    double p_rf_dbm = 0.0;
    double p_est_dbm = 0.0;
    double e_db = 0.0;
    double u_raw_db = 0.0;
    double u_applied_db = 0.0;
    double link_atten_db = 0.0;
};

struct SimTrace {
    std::vector<TraceRow> rows;
    double ts_s = 0.0;
    bool faulted = false;     // loop aborted on a runtime fault; rows hold the prefix
    std::string fault_what;
};

// Fixed-step closed loop: measure, control, quantize, apply next interval.
// Row 0 is the primed state before any plant step.
SimTrace run_scenario(const Scenario& scenario);

struct LimitCycleResult {
    bool present = false;
    double period_s = 0.0;
    double pp_db = 0.0; // peak-to-peak of the detrended tail

    bool operator==(const LimitCycleResult&) const = default;
};

// Sustained-oscillation test on a series tail: linear-detrend, require the
// peak-to-peak to clear min_pp_db over the window and again over its final
// fifth (a decayed ring does not count), and require the normalized
// autocorrelation to show a local maximum of at least 0.5 at a lag of two
// samples or more.
LimitCycleResult detect_limit_cycle(std::span<const double> values, double ts_s,
                                    double min_pp_db = 0.05);

struct Metrics {
    double onset_t_s = 0.0;     // disturbance onset, or 0 when none fired
    double steady_dbm = 0.0;    // mean output over the final tenth of the window
    double settling_t_s = 0.0;  // onset to last departure from the settle band
    double overshoot_db = 0.0;  // excursion past steady state on the recovery side
    double e_ss_db = 0.0;       // mean tracking error over the final tenth
    LimitCycleResult limit_cycle;
};

// Step-response metrics over the window starting at the first link change
// (or the whole trace when the schedule never fires). Settled means staying
// within band_frac of the steady-state magnitude, floored at 0.01 dB.
Metrics compute_metrics(const SimTrace& trace, double band_frac = 0.02);

std::string format_metrics(const Metrics& m);

// Least-squares time constant of |p_rf - steady| on a log scale, using rows
// until the deviation first falls to a thousandth of its starting value.
// Empty when the trace starts converged or does not decay.
std::optional<double> fit_exponential_tau(const SimTrace& trace, double steady_dbm);

struct ControllerRun {
    ControllerSpec::Kind kind = ControllerSpec::Kind::fuzzy_integral;
    std::string name;
    SimTrace trace;
    Metrics metrics;
};

// Re-run the same scenario with each controller kind substituted in.
std::vector<ControllerRun> compare_controllers(const Scenario& base,
                                               const std::vector<ControllerSpec::Kind>& kinds);

struct PidScanConfig {
    double kp_max = 5.0;
    double kp_step = 0.25;
    double kd_max = 1.0;
    double kd_step = 0.05;
};

struct PidScanPoint {
    PidGains gains;
    bool stable = false;
    bool unstable = false; // faulted, limit-cycling, or grossly off target
    bool faulted = false;
    Metrics metrics;
};

struct PidScanResult {
    std::vector<PidScanPoint> points;
    // Most aggressive tuning that stays stable, least aggressive that does not.
    std::optional<PidGains> stable_example;
    std::optional<PidGains> unstable_example;
};

// Sweep proportional and derivative gain on top of the scenario's integral
// gain and classify each closed loop.
PidScanResult find_unstable_pid(const Scenario& base, const PidScanConfig& grid = {});

} // namespace powerloop
