#pragma once

#include <vector>

namespace powerloop {

struct RfFrequencies {
    double upper_ghz = 0.0;
    double lower_ghz = 0.0;
};

// Sub-harmonic upconversion bookkeeping: f_rf = 2*f_lo +/- f_if.
// Requires f_lo > 0, f_if >= 0 and a positive lower sideband.
RfFrequencies rf_frequencies(double f_lo_ghz, double f_if_ghz);

// Rapp AM/AM model. smoothness p controls how sharp the transition into
// saturation is; the output amplitude never exceeds v_sat.
struct PaParams {
    double gain_db = 20.0;
    double sat_out_dbm = -22.0; // output amplitude ceiling, as a power level
    double smoothness = 2.0;

    bool operator==(const PaParams&) const = default;
};

// Amplitude transfer: v_out = G*v_in / (1 + (G*v_in/v_sat)^(2p))^(1/(2p)).
double pa_amam(double v_in, const PaParams& pa);

struct Disturbance {
    enum class Kind { link_step, temp_ramp };

    Kind kind = Kind::link_step;
    double t_s = 0.0;
    // link_step: attenuation delta (dB) applied at t.
    // temp_ramp: drift rate (dB/s) active over [t, t + duration].
    double magnitude = 0.0;
    double duration_s = 0.0; // temp_ramp only

    bool operator==(const Disturbance&) const = default;
};

struct PlantConfig {
    double drive_dbm = -20.0;
    std::vector<double> stage_gains_db = {-9.9447583336};
    PaParams pa;
    double alpha = 1.0; // output slope per dB of commanded attenuation
    double link_atten0_db = 10.0;
    double thermal0_db = 0.0;
    double lag_tau_s = 0.001; // first-order output lag; 0 disables
    bool compression = true;
    std::vector<Disturbance> schedule; // sorted by onset time

    bool operator==(const PlantConfig&) const = default;
};

// Stateful transmit chain: static nonlinear map plus a first-order lag and a
// disturbance schedule advanced in fixed steps.
class Plant {
public:
    // Primes the lag state at the static output for the initial command.
    Plant(PlantConfig config, double u0_db);

    // Advance one interval: apply schedule events inside (t, t+dt], evaluate
    // the static chain for the applied command, pass through the lag.
    // Returns the chain output power in dBm.
    double step(double u_applied_db, double dt_s);

    double time_s() const { return t_; }
    double link_atten_db() const { return link_atten_; }
    double thermal_db() const { return thermal_; }
    const PlantConfig& config() const { return config_; }

    // Static (lag-free, schedule-free) chain output for the given operating point.
    static double static_output(const PlantConfig& config, double u_db, double link_atten_db,
                                double thermal_db);

private:
    PlantConfig config_;
    double t_ = 0.0;
    double link_atten_ = 0.0;
    double thermal_ = 0.0;
    double lagged_ = 0.0;
    std::size_t next_event_ = 0;
};

struct LinearizeResult {
    double alpha_eff = 0.0; // local dB-out per dB-attenuation slope magnitude
    bool saturated = false; // operating point is deep in compression
};

// Central-difference slope of the static chain at the given attenuation,
// probe half-width 0.01 dB. A slope collapsed below a tenth of the configured
// alpha is reported as saturated.
LinearizeResult linearize(const PlantConfig& config, double u_op_db);

} // namespace powerloop
