#include "powerloop/sim.hpp"

#include "powerloop/csvio.hpp"
#include "powerloop/detector.hpp"
#include "powerloop/errors.hpp"
#include "powerloop/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace powerloop {

SimTrace run_scenario(const Scenario& sc) {
    auto controller = make_controller(sc.controller, sc.actuator);
    const double ts = sc.run.ts_s;
    const int n_steps = static_cast<int>(std::llround(sc.run.duration_s / ts));
    if (n_steps < 1) throw ConfigError("run must cover at least one sample period");

    Rng rng(sc.run.seed);
    double u_applied = quantize_command(sc.controller.u0_db, sc.actuator);
    Plant plant(sc.plant, u_applied);

    SimTrace trace;
    trace.ts_s = ts;
    trace.rows.reserve(static_cast<std::size_t>(n_steps) + 1);

    double p_rf = Plant::static_output(sc.plant, u_applied, sc.plant.link_atten0_db,
                                       sc.plant.thermal0_db);
    for (int k = 0; k <= n_steps; ++k) {
        try {
            if (k > 0) p_rf = plant.step(u_applied, ts);
            const Measurement meas = measure_power(p_rf, sc.detector, sc.adc, &rng);
            const double excess = meas.p_est_dbm - sc.run.p_ref_dbm;
            const double u_raw = controller->step(excess, ts);
            const double u_next = quantize_command(u_raw, sc.actuator, u_applied);

            TraceRow row;
            row.t_s = static_cast<double>(k) * ts;
            row.p_rf_dbm = p_rf;
            row.p_est_dbm = meas.p_est_dbm;
            row.e_db = sc.run.p_ref_dbm - meas.p_est_dbm;
            row.u_raw_db = u_raw;
            row.u_applied_db = u_next;
            row.link_atten_db = k == 0 ? sc.plant.link_atten0_db : plant.link_atten_db();
            trace.rows.push_back(row);
            u_applied = u_next;
        } catch (const SimFault& fault) {
            trace.faulted = true;
            trace.fault_what = fault.what();
            break;
        }
    }
    return trace;
}

LimitCycleResult detect_limit_cycle(std::span<const double> values, double ts_s,
                                    double min_pp_db) {
    LimitCycleResult r;
    const std::size_t n = values.size();
    if (n < 8 || !(ts_s > 0.0)) return r;

    // Remove any linear drift so a slow ramp is not mistaken for oscillation.
    const double nn = static_cast<double>(n);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i);
        sx += x;
        sy += values[i];
        sxx += x * x;
        sxy += x * values[i];
    }
    const double denom = nn * sxx - sx * sx;
    const double slope = denom != 0.0 ? (nn * sxy - sx * sy) / denom : 0.0;
    const double icept = (sy - slope * sx) / nn;

    std::vector<double> x(n);
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = values[i] - (icept + slope * static_cast<double>(i));
        lo = std::min(lo, x[i]);
        hi = std::max(hi, x[i]);
    }
    r.pp_db = hi - lo;
    if (r.pp_db <= min_pp_db) return r;

    // Sustained means still swinging at the end: a transient that rings and
    // then parks leaves the final fifth flat.
    const std::size_t tail_start = n - std::max<std::size_t>(8, n / 5);
    double tlo = 1e300, thi = -1e300;
    for (std::size_t i = tail_start; i < n; ++i) {
        tlo = std::min(tlo, x[i]);
        thi = std::max(thi, x[i]);
    }
    if (thi - tlo <= min_pp_db) return r;

    double c0 = 0.0;
    for (const double v : x) c0 += v * v;
    if (!(c0 > 0.0)) return r;

    const std::size_t kmax = n / 2;
    std::vector<double> acf(kmax + 1, 0.0);
    for (std::size_t k = 0; k <= kmax; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i + k < n; ++i) s += x[i] * x[i + k];
        acf[k] = s / c0;
    }
    for (std::size_t k = 2; k < kmax; ++k) {
        if (acf[k] >= 0.5 && acf[k] >= acf[k - 1] && acf[k] >= acf[k + 1]) {
            r.present = true;
            r.period_s = static_cast<double>(k) * ts_s;
            break;
        }
    }
    return r;
}

Metrics compute_metrics(const SimTrace& trace, double band_frac) {
    if (trace.rows.empty()) throw ConfigError("metrics need a non-empty trace");
    const auto& rows = trace.rows;
    const std::size_t n = rows.size();

    std::size_t onset = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (rows[i].link_atten_db != rows[0].link_atten_db) {
            onset = i;
            break;
        }
    }

    const std::size_t window_n = n - onset;
    const std::size_t tail_n = std::max<std::size_t>(1, window_n / 10);
    double steady = 0.0;
    for (std::size_t i = n - tail_n; i < n; ++i) steady += rows[i].p_rf_dbm;
    steady /= static_cast<double>(tail_n);

    Metrics m;
    m.onset_t_s = rows[onset].t_s;
    m.steady_dbm = steady;

    const double band = std::max(band_frac * std::abs(steady), 0.01);
    std::size_t last_out = onset;
    bool any_out = false;
    for (std::size_t i = onset; i < n; ++i) {
        if (std::abs(rows[i].p_rf_dbm - steady) > band) {
            last_out = i;
            any_out = true;
        }
    }
    m.settling_t_s =
        any_out ? rows[std::min(last_out + 1, n - 1)].t_s - rows[onset].t_s : 0.0;

    const double recovery = steady - rows[onset].p_rf_dbm;
    double over = 0.0;
    for (std::size_t i = onset; i < n; ++i) {
        if (recovery > 0.0) over = std::max(over, rows[i].p_rf_dbm - steady);
        else if (recovery < 0.0) over = std::max(over, steady - rows[i].p_rf_dbm);
    }
    m.overshoot_db = over;

    const std::size_t err_tail = std::max<std::size_t>(1, n / 10);
    double ess = 0.0;
    for (std::size_t i = n - err_tail; i < n; ++i) ess += rows[i].e_db;
    m.e_ss_db = ess / static_cast<double>(err_tail);

    std::vector<double> half;
    half.reserve(n - n / 2);
    for (std::size_t i = n / 2; i < n; ++i) half.push_back(rows[i].p_rf_dbm);
    m.limit_cycle = detect_limit_cycle(half, trace.ts_s);
    return m;
}

std::string format_metrics(const Metrics& m) {
    std::ostringstream out;
    out << "onset_t_s = " << format_shortest(m.onset_t_s) << "\n";
    out << "steady_dbm = " << format_shortest(m.steady_dbm) << "\n";
    out << "settling_t_s = " << format_shortest(m.settling_t_s) << "\n";
    out << "overshoot_db = " << format_shortest(m.overshoot_db) << "\n";
    out << "e_ss_db = " << format_shortest(m.e_ss_db) << "\n";
    out << "limit_cycle = " << (m.limit_cycle.present ? "on" : "off") << "\n";
    out << "limit_cycle_period_s = " << format_shortest(m.limit_cycle.period_s) << "\n";
    out << "limit_cycle_pp_db = " << format_shortest(m.limit_cycle.pp_db) << "\n";
    return out.str();
}

std::optional<double> fit_exponential_tau(const SimTrace& trace, double steady_dbm) {
    const auto& rows = trace.rows;
    if (rows.size() < 4) return std::nullopt;
    const double dev0 = std::abs(rows.front().p_rf_dbm - steady_dbm);
    if (!(dev0 > 0.0)) return std::nullopt;
    const double floor = dev0 * 1e-3;

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t count = 0;
    for (const TraceRow& row : rows) {
        const double dev = std::abs(row.p_rf_dbm - steady_dbm);
        if (dev <= floor) break;
        const double y = std::log(dev);
        sx += row.t_s;
        sy += y;
        sxx += row.t_s * row.t_s;
        sxy += row.t_s * y;
        ++count;
    }
    if (count < 4) return std::nullopt;
    const double nn = static_cast<double>(count);
    const double denom = nn * sxx - sx * sx;
    if (denom <= 0.0) return std::nullopt;
    const double slope = (nn * sxy - sx * sy) / denom;
    if (!(slope < 0.0)) return std::nullopt;
    return -1.0 / slope;
}

std::vector<ControllerRun> compare_controllers(const Scenario& base,
                                               const std::vector<ControllerSpec::Kind>& kinds) {
    std::vector<ControllerRun> out;
    out.reserve(kinds.size());
    for (const auto kind : kinds) {
        Scenario sc = base;
        sc.controller.kind = kind;
        ControllerRun run;
        run.kind = kind;
        run.name = controller_kind_name(kind);
        run.trace = run_scenario(sc);
        run.metrics = compute_metrics(run.trace);
        out.push_back(std::move(run));
    }
    return out;
}

PidScanResult find_unstable_pid(const Scenario& base, const PidScanConfig& grid) {
    if (!(grid.kp_step > 0.0) || !(grid.kd_step > 0.0) || grid.kp_max < 0.0 || grid.kd_max < 0.0) {
        throw ConfigError("scan grid needs positive steps and non-negative ranges");
    }
    PidScanResult result;
    const int kp_n = static_cast<int>(std::floor(grid.kp_max / grid.kp_step + 1e-9));
    const int kd_n = static_cast<int>(std::floor(grid.kd_max / grid.kd_step + 1e-9));
    double best_stable = -1.0, best_unstable = 1e300;

    for (int i = 0; i <= kp_n; ++i) {
        for (int j = 0; j <= kd_n; ++j) {
            Scenario sc = base;
            sc.controller.kind = ControllerSpec::Kind::pid;
            sc.controller.gains.kp = static_cast<double>(i) * grid.kp_step;
            sc.controller.gains.kd = static_cast<double>(j) * grid.kd_step;

            PidScanPoint pt;
            pt.gains = sc.controller.gains;
            const SimTrace trace = run_scenario(sc);
            pt.faulted = trace.faulted;
            if (!trace.rows.empty()) pt.metrics = compute_metrics(trace);

            const double ess = std::abs(pt.metrics.e_ss_db);
            pt.stable = !pt.faulted && !pt.metrics.limit_cycle.present && ess <= 0.5;
            // The gap between the thresholds keeps borderline loops out of
            // both example slots.
            pt.unstable = pt.faulted || pt.metrics.limit_cycle.present || ess > 2.0;

            const double aggr = pt.gains.kp + pt.gains.kd;
            if (pt.stable && aggr > best_stable) {
                best_stable = aggr;
                result.stable_example = pt.gains;
            }
            if (pt.unstable && aggr < best_unstable) {
                best_unstable = aggr;
                result.unstable_example = pt.gains;
            }
            result.points.push_back(pt);
        }
    }
    return result;
}

} // namespace powerloop
