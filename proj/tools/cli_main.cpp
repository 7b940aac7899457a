// Command-line front end: scenario runs, controller comparisons, EVM sweeps,
// detector calibration and PID gain scans, with CSV/SVG artifacts per run.

#include "powerloop/csvio.hpp"
#include "powerloop/detector.hpp"
#include "powerloop/errors.hpp"
#include "powerloop/evm.hpp"
#include "powerloop/scenario.hpp"
#include "powerloop/sim.hpp"
#include "powerloop/svg.hpp"
#include "powerloop/version.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace pl = powerloop;
namespace fs = std::filesystem;

namespace {

struct CommonOpts {
    std::string scenario_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<double> ts;
    bool no_plots = false;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_scenario = true) {
    if (with_scenario) {
        cmd->add_option("scenario", opts.scenario_path, "Scenario file (defaults built in)")
            ->check(CLI::ExistingFile);
    }
    cmd->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--seed", opts.seed, "Override the run seed");
    cmd->add_option("--ts", opts.ts, "Override the sample period in seconds")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--no-plots", opts.no_plots, "Skip SVG plot output");
    cmd->add_flag("--quiet", opts.quiet, "Suppress the stdout summary");
}

pl::Scenario load_scenario(const CommonOpts& opts) {
    pl::Scenario sc = opts.scenario_path.empty()
                          ? pl::Scenario::defaults()
                          : pl::parse_scenario(pl::read_text_file(opts.scenario_path));
    if (opts.seed) sc.run.seed = *opts.seed;
    if (opts.ts) sc.run.ts_s = *opts.ts;
    return sc;
}

fs::path prepare_out_dir(const CommonOpts& opts) {
    const fs::path dir(opts.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw pl::IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string manifest_text(const pl::Scenario& sc) {
    const auto rf = pl::rf_frequencies(sc.run.f_lo_ghz, sc.run.f_if_ghz);
    std::ostringstream out;
    out << "version = " << pl::kVersion << "\n";
    out << "scenario_hash = " << hash_hex(pl::scenario_hash(sc)) << "\n";
    out << "controller = " << pl::controller_kind_name(sc.controller.kind) << "\n";
    out << "rf_upper_ghz = " << pl::format_shortest(rf.upper_ghz) << "\n";
    out << "rf_lower_ghz = " << pl::format_shortest(rf.lower_ghz) << "\n";
    out << "duration_s = " << pl::format_shortest(sc.run.duration_s) << "\n";
    out << "ts_s = " << pl::format_shortest(sc.run.ts_s) << "\n";
    out << "p_ref_dbm = " << pl::format_shortest(sc.run.p_ref_dbm) << "\n";
    out << "seed = " << sc.run.seed << "\n";
    return out.str();
}

pl::Series ref_line(const pl::SimTrace& trace, double p_ref) {
    pl::Series s;
    s.label = "reference";
    if (!trace.rows.empty()) {
        s.x = {trace.rows.front().t_s, trace.rows.back().t_s};
        s.y = {p_ref, p_ref};
    }
    return s;
}

pl::Series column(const pl::SimTrace& trace, double pl::TraceRow::* field, std::string label) {
    pl::Series s;
    s.label = std::move(label);
    s.x.reserve(trace.rows.size());
    s.y.reserve(trace.rows.size());
    for (const auto& row : trace.rows) {
        s.x.push_back(row.t_s);
        s.y.push_back(row.*field);
    }
    return s;
}

void write_run_plots(const fs::path& dir, const pl::SimTrace& trace, const pl::Scenario& sc) {
    pl::PlotSpec response;
    response.title = "Output power";
    response.x_label = "time (s)";
    response.y_label = "power (dBm)";
    response.series = {column(trace, &pl::TraceRow::p_rf_dbm, "output"),
                       column(trace, &pl::TraceRow::p_est_dbm, "estimate"),
                       ref_line(trace, sc.run.p_ref_dbm)};
    pl::write_svg(response, (dir / "response.svg").string());

    pl::PlotSpec command;
    command.title = "Attenuator command";
    command.x_label = "time (s)";
    command.y_label = "attenuation (dB)";
    command.series = {column(trace, &pl::TraceRow::u_raw_db, "raw"),
                      column(trace, &pl::TraceRow::u_applied_db, "applied"),
                      column(trace, &pl::TraceRow::link_atten_db, "link")};
    pl::write_svg(command, (dir / "command.svg").string());

    pl::PlotSpec error;
    error.title = "Tracking error";
    error.x_label = "time (s)";
    error.y_label = "error (dB)";
    error.series = {column(trace, &pl::TraceRow::e_db, "error")};
    pl::write_svg(error, (dir / "error.svg").string());
}

int finish_run_artifacts(const CommonOpts& opts, const pl::Scenario& sc,
                         const pl::SimTrace& trace) {
    const fs::path dir = prepare_out_dir(opts);
    pl::write_trace_csv(trace, (dir / "trace.csv").string());
    std::string metrics_txt;
    if (!trace.rows.empty()) {
        metrics_txt = pl::format_metrics(pl::compute_metrics(trace));
    }
    if (trace.faulted) {
        metrics_txt += "fault = " + trace.fault_what + "\n";
    }
    pl::write_text_file((dir / "metrics.txt").string(), metrics_txt);
    pl::write_text_file((dir / "manifest.txt").string(), manifest_text(sc));
    if (!opts.no_plots && !trace.rows.empty()) write_run_plots(dir, trace, sc);

    if (!opts.quiet) {
        std::cout << "controller " << pl::controller_kind_name(sc.controller.kind) << ", "
                  << trace.rows.size() << " samples -> " << dir.string() << "\n";
        if (trace.faulted) {
            std::cout << "fault: " << trace.fault_what << "\n";
        } else if (!trace.rows.empty()) {
            std::cout << pl::format_metrics(pl::compute_metrics(trace));
        }
    }
    return trace.faulted ? 3 : 0;
}

int cmd_run(const CommonOpts& opts, const std::string& controller_override, bool print_scenario) {
    pl::Scenario sc = load_scenario(opts);
    if (!controller_override.empty()) {
        if (controller_override == "pid") sc.controller.kind = pl::ControllerSpec::Kind::pid;
        else if (controller_override == "i") sc.controller.kind = pl::ControllerSpec::Kind::integral;
        else if (controller_override == "fi") sc.controller.kind = pl::ControllerSpec::Kind::fuzzy_integral;
        else throw pl::ConfigError("unknown controller '" + controller_override + "' (expected pid, i or fi)");
    }
    if (print_scenario) {
        std::cout << pl::serialize_scenario(sc);
        return 0;
    }
    const pl::SimTrace trace = pl::run_scenario(sc);
    return finish_run_artifacts(opts, sc, trace);
}

int cmd_compare(const CommonOpts& opts, const std::string& controllers_csv) {
    pl::Scenario sc = load_scenario(opts);
    std::vector<pl::ControllerSpec::Kind> kinds;
    std::stringstream ss(controllers_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "pid") kinds.push_back(pl::ControllerSpec::Kind::pid);
        else if (tok == "i") kinds.push_back(pl::ControllerSpec::Kind::integral);
        else if (tok == "fi") kinds.push_back(pl::ControllerSpec::Kind::fuzzy_integral);
        else throw pl::ConfigError("unknown controller '" + tok + "' in --controllers");
    }
    if (kinds.empty()) throw pl::ConfigError("--controllers list is empty");

    const auto runs = pl::compare_controllers(sc, kinds);
    const fs::path dir = prepare_out_dir(opts);

    std::string metrics_txt;
    bool any_fault = false;
    pl::PlotSpec response, error;
    response.title = "Output power by controller";
    response.x_label = "time (s)";
    response.y_label = "power (dBm)";
    error.title = "Tracking error by controller";
    error.x_label = "time (s)";
    error.y_label = "error (dB)";

    for (const auto& run : runs) {
        pl::write_trace_csv(run.trace, (dir / ("trace_" + run.name + ".csv")).string());
        metrics_txt += "[" + run.name + "]\n" + pl::format_metrics(run.metrics);
        if (run.trace.faulted) {
            metrics_txt += "fault = " + run.trace.fault_what + "\n";
            any_fault = true;
        }
        metrics_txt += "\n";
        response.series.push_back(column(run.trace, &pl::TraceRow::p_rf_dbm, run.name));
        error.series.push_back(column(run.trace, &pl::TraceRow::e_db, run.name));
    }
    if (!runs.empty()) response.series.push_back(ref_line(runs.front().trace, sc.run.p_ref_dbm));

    pl::write_text_file((dir / "metrics.txt").string(), metrics_txt);
    pl::write_text_file((dir / "manifest.txt").string(), manifest_text(sc));
    if (!opts.no_plots) {
        pl::write_svg(response, (dir / "response.svg").string());
        pl::write_svg(error, (dir / "error.svg").string());
    }
    if (!opts.quiet) std::cout << metrics_txt;
    return any_fault ? 3 : 0;
}

int cmd_sweep_evm(const CommonOpts& opts) {
    const pl::Scenario sc = load_scenario(opts);
    const auto curves = pl::evm_vs_power_sweep(sc.plant, sc.evm);
    const fs::path dir = prepare_out_dir(opts);
    pl::write_evm_csv(curves, (dir / "evm.csv").string());
    pl::write_text_file((dir / "manifest.txt").string(), manifest_text(sc));

    pl::PlotSpec plot;
    plot.title = "EVM vs output power";
    plot.x_label = "output power (dBm)";
    plot.y_label = "EVM (%)";
    std::string summary;
    for (const auto& curve : curves) {
        pl::Series s;
        s.label = "atten " + pl::format_shortest(curve.atten_db) + " dB";
        for (const auto& pt : curve.points) {
            s.x.push_back(pt.p_out_dbm);
            s.y.push_back(pt.evm_pct);
        }
        plot.series.push_back(std::move(s));
        if (const auto knee = pl::evm_knee(curve, 1.5)) {
            plot.markers.push_back({knee->p_out_dbm, knee->evm_pct,
                                    "1.5% at " + pl::format_g9(knee->p_out_dbm) + " dBm"});
            summary += "knee_atten_" + pl::format_shortest(curve.atten_db) +
                       "_dbm = " + pl::format_shortest(knee->p_out_dbm) + "\n";
        }
    }
    pl::write_text_file((dir / "knees.txt").string(), summary);
    if (!opts.no_plots) pl::write_svg(plot, (dir / "evm.svg").string());
    if (!opts.quiet) std::cout << summary;
    return 0;
}

int cmd_calibrate(const CommonOpts& opts, double p_lo, double p_hi, int points, double noise_v) {
    const pl::Scenario sc = load_scenario(opts);
    const auto pts = pl::generate_sweep(sc.detector, p_lo, p_hi, points, noise_v, sc.run.seed);
    const auto fit = pl::calibrate(pts);
    const fs::path dir = prepare_out_dir(opts);

    std::ostringstream txt;
    txt << "slope_v_per_db = " << pl::format_shortest(fit.slope_v_per_db) << "\n";
    txt << "p0_dbm = " << pl::format_shortest(fit.p0_dbm) << "\n";
    txt << "r2 = " << pl::format_shortest(fit.r2) << "\n";
    txt << "points = " << points << "\n";
    txt << "noise_v = " << pl::format_shortest(noise_v) << "\n";
    pl::write_text_file((dir / "calibration.txt").string(), txt.str());
    pl::write_text_file((dir / "manifest.txt").string(), manifest_text(sc));

    if (!opts.no_plots) {
        pl::PlotSpec plot;
        plot.title = "Detector calibration";
        plot.x_label = "input power (dBm)";
        plot.y_label = "voltage (V)";
        pl::Series measured;
        measured.label = "measured";
        measured.scatter = true;
        for (const auto& p : pts) {
            measured.x.push_back(p.p_in_dbm);
            measured.y.push_back(p.v_out_v);
        }
        pl::Series fitted;
        fitted.label = "fit";
        fitted.x = {p_lo, p_hi};
        fitted.y = {fit.slope_v_per_db * (p_lo - fit.p0_dbm), fit.slope_v_per_db * (p_hi - fit.p0_dbm)};
        plot.series = {std::move(measured), std::move(fitted)};
        pl::write_svg(plot, (dir / "calibration.svg").string());
    }
    if (!opts.quiet) std::cout << txt.str();
    return 0;
}

int cmd_find_unstable(const CommonOpts& opts, const pl::PidScanConfig& grid) {
    const pl::Scenario sc = load_scenario(opts);
    const auto scan = pl::find_unstable_pid(sc, grid);
    const fs::path dir = prepare_out_dir(opts);

    std::string csv = "kp,kd,stable,unstable,faulted,e_ss_db,lc_present,lc_period_s,lc_pp_db\n";
    int n_stable = 0, n_unstable = 0;
    pl::Series stable_pts, unstable_pts;
    stable_pts.label = "stable";
    stable_pts.scatter = true;
    unstable_pts.label = "unstable";
    unstable_pts.scatter = true;
    for (const auto& pt : scan.points) {
        csv += pl::format_g9(pt.gains.kp);
        csv += ',';
        csv += pl::format_g9(pt.gains.kd);
        csv += ',';
        csv += pt.stable ? '1' : '0';
        csv += ',';
        csv += pt.unstable ? '1' : '0';
        csv += ',';
        csv += pt.faulted ? '1' : '0';
        csv += ',';
        csv += pl::format_g9(pt.metrics.e_ss_db);
        csv += ',';
        csv += pt.metrics.limit_cycle.present ? '1' : '0';
        csv += ',';
        csv += pl::format_g9(pt.metrics.limit_cycle.period_s);
        csv += ',';
        csv += pl::format_g9(pt.metrics.limit_cycle.pp_db);
        csv += '\n';
        if (pt.stable) {
            ++n_stable;
            stable_pts.x.push_back(pt.gains.kp);
            stable_pts.y.push_back(pt.gains.kd);
        }
        if (pt.unstable) {
            ++n_unstable;
            unstable_pts.x.push_back(pt.gains.kp);
            unstable_pts.y.push_back(pt.gains.kd);
        }
    }
    pl::write_text_file((dir / "pid_scan.csv").string(), csv);

    std::ostringstream txt;
    txt << "points = " << scan.points.size() << "\n";
    txt << "stable = " << n_stable << "\n";
    txt << "unstable = " << n_unstable << "\n";
    if (scan.stable_example) {
        txt << "stable_example_kp = " << pl::format_shortest(scan.stable_example->kp) << "\n";
        txt << "stable_example_kd = " << pl::format_shortest(scan.stable_example->kd) << "\n";
    }
    if (scan.unstable_example) {
        txt << "unstable_example_kp = " << pl::format_shortest(scan.unstable_example->kp) << "\n";
        txt << "unstable_example_kd = " << pl::format_shortest(scan.unstable_example->kd) << "\n";
    }
    pl::write_text_file((dir / "pid_scan.txt").string(), txt.str());
    pl::write_text_file((dir / "manifest.txt").string(), manifest_text(sc));

    if (!opts.no_plots) {
        pl::PlotSpec plot;
        plot.title = "PID gain scan";
        plot.x_label = "kp";
        plot.y_label = "kd";
        plot.series = {std::move(stable_pts), std::move(unstable_pts)};
        pl::write_svg(plot, (dir / "pid_scan.svg").string());
    }
    if (!opts.quiet) std::cout << txt.str();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-loop transmit power control simulator"};
    app.require_subcommand(1);

    CommonOpts run_opts;
    std::string run_controller;
    bool run_print = false;
    CLI::App* run = app.add_subcommand("run", "Run one scenario and write its artifacts");
    add_common(run, run_opts);
    run->add_option("--controller", run_controller, "Controller kind override (pid, i, fi)");
    run->add_flag("--print-scenario", run_print, "Print the canonical scenario text and exit");

    CommonOpts cmp_opts;
    std::string cmp_controllers = "pid,i,fi";
    CLI::App* cmp = app.add_subcommand("compare", "Run the scenario once per controller kind");
    add_common(cmp, cmp_opts);
    cmp->add_option("--controllers", cmp_controllers, "Comma list of controller kinds")
        ->capture_default_str();

    CommonOpts evm_opts;
    CLI::App* evm = app.add_subcommand("sweep-evm", "Static EVM vs output power sweep");
    add_common(evm, evm_opts);

    CommonOpts cal_opts;
    double cal_p_lo = -40.0, cal_p_hi = 0.0, cal_noise = 0.002;
    int cal_points = 21;
    CLI::App* cal = app.add_subcommand("calibrate", "Fit the detector from a synthetic sweep");
    add_common(cal, cal_opts);
    cal->add_option("--p-lo", cal_p_lo, "Sweep start (dBm)")->capture_default_str();
    cal->add_option("--p-hi", cal_p_hi, "Sweep end (dBm)")->capture_default_str();
    cal->add_option("--points", cal_points, "Sweep point count")->check(CLI::Range(3, 100000))
        ->capture_default_str();
    cal->add_option("--noise", cal_noise, "Voltage noise sigma (V)")
        ->check(CLI::NonNegativeNumber)->capture_default_str();

    CommonOpts scan_opts;
    pl::PidScanConfig grid;
    CLI::App* scan = app.add_subcommand("find-unstable-pid", "Classify PID tunings on a gain grid");
    add_common(scan, scan_opts);
    scan->add_option("--kp-max", grid.kp_max)->capture_default_str();
    scan->add_option("--kp-step", grid.kp_step)->check(CLI::PositiveNumber)->capture_default_str();
    scan->add_option("--kd-max", grid.kd_max)->capture_default_str();
    scan->add_option("--kd-step", grid.kd_step)->check(CLI::PositiveNumber)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(run)) return cmd_run(run_opts, run_controller, run_print);
        if (app.got_subcommand(cmp)) return cmd_compare(cmp_opts, cmp_controllers);
        if (app.got_subcommand(evm)) return cmd_sweep_evm(evm_opts);
        if (app.got_subcommand(cal)) return cmd_calibrate(cal_opts, cal_p_lo, cal_p_hi, cal_points, cal_noise);
        if (app.got_subcommand(scan)) return cmd_find_unstable(scan_opts, grid);
    } catch (const pl::ScenarioError& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return 2;
    } catch (const pl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const pl::SimFault& e) {
        std::cerr << "simulation fault: " << e.what() << "\n";
        return 3;
    } catch (const pl::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
