#include "powerloop/scenario.hpp"

#include "powerloop/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <string_view>
#include <vector>

namespace powerloop {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ScenarioError(line, msg);
}

double parse_double(std::string_view tok, int line) {
    tok = trim(tok);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        fail(line, "expected a number, got '" + std::string(tok) + "'");
    }
    return v;
}

std::uint64_t parse_u64(std::string_view tok, int line) {
    tok = trim(tok);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        fail(line, "expected an unsigned integer, got '" + std::string(tok) + "'");
    }
    return v;
}

int parse_int(std::string_view tok, int line) {
    tok = trim(tok);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        fail(line, "expected an integer, got '" + std::string(tok) + "'");
    }
    return v;
}

bool parse_bool(std::string_view tok, int line) {
    tok = trim(tok);
    if (tok == "on") return true;
    if (tok == "off") return false;
    fail(line, "expected on or off, got '" + std::string(tok) + "'");
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<double> parse_double_list(std::string_view value, int line) {
    std::vector<double> out;
    for (const auto part : split(value, ',')) {
        out.push_back(parse_double(part, line));
    }
    if (out.empty()) fail(line, "expected at least one value");
    return out;
}

std::array<double, kNumTerms> parse_peaks(std::string_view value, int line) {
    const auto vals = parse_double_list(value, line);
    if (vals.size() != kNumTerms) {
        fail(line, "expected " + std::to_string(kNumTerms) + " comma-separated peaks, got " +
                       std::to_string(vals.size()));
    }
    std::array<double, kNumTerms> out{};
    std::copy(vals.begin(), vals.end(), out.begin());
    return out;
}

TermId parse_term(std::string_view tok, int line) {
    tok = trim(tok);
    for (std::size_t i = 0; i < kNumTerms; ++i) {
        if (tok == kTermNames[i]) return static_cast<TermId>(i);
    }
    fail(line, "unknown term '" + std::string(tok) + "' (expected NB..PB)");
}

std::array<TermId, kNumTerms> parse_term_row(std::string_view value, int line) {
    const auto parts = split(value, ',');
    if (parts.size() != kNumTerms) {
        fail(line, "expected " + std::to_string(kNumTerms) + " comma-separated terms, got " +
                       std::to_string(parts.size()));
    }
    std::array<TermId, kNumTerms> out{};
    for (std::size_t i = 0; i < kNumTerms; ++i) out[i] = parse_term(parts[i], line);
    return out;
}

// Whitespace-separated numeric fields for disturbance entries.
std::vector<double> parse_fields(std::string_view value, int line) {
    std::vector<double> out;
    std::size_t i = 0;
    while (i < value.size()) {
        while (i < value.size() && std::isspace(static_cast<unsigned char>(value[i]))) ++i;
        std::size_t j = i;
        while (j < value.size() && !std::isspace(static_cast<unsigned char>(value[j]))) ++j;
        if (j > i) out.push_back(parse_double(value.substr(i, j - i), line));
        i = j;
    }
    return out;
}

enum class Section { none, run, controller, fuzzy, actuator, plant, detector, disturbances };

Section section_from_name(std::string_view name, int line) {
    if (name == "run") return Section::run;
    if (name == "controller") return Section::controller;
    if (name == "fuzzy") return Section::fuzzy;
    if (name == "actuator") return Section::actuator;
    if (name == "plant") return Section::plant;
    if (name == "detector") return Section::detector;
    if (name == "disturbances") return Section::disturbances;
    fail(line, "unknown section [" + std::string(name) + "]");
}

struct ParseState {
    Scenario sc;
    Section section = Section::none;
    std::set<std::string> seen; // "section/key", duplicate detection
    int first_rules_line = 0;
    int rules_rows_seen = 0;
    std::array<std::array<TermId, kNumTerms>, kNumTerms> rule_rows{};

    void mark(const std::string& section_name, std::string_view key, int line) {
        if (!seen.insert(section_name + "/" + std::string(key)).second) {
            fail(line, "duplicate key '" + std::string(key) + "' in [" + section_name + "]");
        }
    }
};

void apply_run(ParseState& st, std::string_view key, std::string_view value, int line) {
    st.mark("run", key, line);
    RunParams& r = st.sc.run;
    EvmSweepConfig& ev = st.sc.evm;
    if (key == "duration") {
        r.duration_s = parse_double(value, line);
        if (r.duration_s <= 0.0) fail(line, "duration must be positive");
    } else if (key == "ts") {
        r.ts_s = parse_double(value, line);
        if (r.ts_s <= 0.0) fail(line, "ts must be positive");
    } else if (key == "p_ref") {
        r.p_ref_dbm = parse_double(value, line);
    } else if (key == "seed") {
        r.seed = parse_u64(value, line);
    } else if (key == "f_lo_ghz") {
        r.f_lo_ghz = parse_double(value, line);
        if (r.f_lo_ghz <= 0.0) fail(line, "f_lo_ghz must be positive");
    } else if (key == "f_if_ghz") {
        r.f_if_ghz = parse_double(value, line);
        if (r.f_if_ghz < 0.0) fail(line, "f_if_ghz must be non-negative");
    } else if (key == "evm_attens") {
        ev.atten_db = parse_double_list(value, line);
    } else if (key == "evm_drive_min") {
        ev.drive_min_dbm = parse_double(value, line);
    } else if (key == "evm_drive_max") {
        ev.drive_max_dbm = parse_double(value, line);
    } else if (key == "evm_drive_step") {
        ev.drive_step_db = parse_double(value, line);
        if (ev.drive_step_db <= 0.0) fail(line, "evm_drive_step must be positive");
    } else if (key == "evm_order") {
        ev.order = parse_int(value, line);
        if (ev.order != 16 && ev.order != 64 && ev.order != 256) {
            fail(line, "evm_order must be 16, 64 or 256");
        }
    } else if (key == "evm_symbols") {
        ev.n_symbols = parse_int(value, line);
        if (ev.n_symbols <= 0) fail(line, "evm_symbols must be positive");
    } else if (key == "evm_seed") {
        ev.seed = parse_u64(value, line);
    } else {
        fail(line, "unknown key '" + std::string(key) + "' in [run]");
    }
}

void apply_controller(ParseState& st, std::string_view key, std::string_view value, int line) {
    st.mark("controller", key, line);
    ControllerSpec& c = st.sc.controller;
    if (key == "kind") {
        const auto tok = trim(value);
        if (tok == "pid") c.kind = ControllerSpec::Kind::pid;
        else if (tok == "i") c.kind = ControllerSpec::Kind::integral;
        else if (tok == "fi") c.kind = ControllerSpec::Kind::fuzzy_integral;
        else fail(line, "unknown controller kind '" + std::string(tok) + "' (expected pid, i or fi)");
    } else if (key == "kp") {
        c.gains.kp = parse_double(value, line);
    } else if (key == "ki") {
        c.gains.ki = parse_double(value, line);
    } else if (key == "kd") {
        c.gains.kd = parse_double(value, line);
    } else if (key == "u0") {
        c.u0_db = parse_double(value, line);
    } else {
        fail(line, "unknown key '" + std::string(key) + "' in [controller]");
    }
}

void apply_fuzzy(ParseState& st, std::string_view key, std::string_view value, int line) {
    st.mark("fuzzy", key, line);
    FuzzyParams& f = st.sc.controller.fuzzy;
    if (key == "e_range") {
        f.e_range_db = parse_double(value, line);
        if (f.e_range_db <= 0.0) fail(line, "e_range must be positive");
    } else if (key == "de_range") {
        f.de_range_db_per_s = parse_double(value, line);
        if (f.de_range_db_per_s <= 0.0) fail(line, "de_range must be positive");
    } else if (key == "du_range") {
        f.du_range_db_per_s = parse_double(value, line);
        if (f.du_range_db_per_s <= 0.0) fail(line, "du_range must be positive");
    } else if (key == "e_peaks") {
        f.e_peaks = parse_peaks(value, line);
    } else if (key == "de_peaks") {
        f.de_peaks = parse_peaks(value, line);
    } else if (key == "du_peaks") {
        f.du_peaks = parse_peaks(value, line);
    } else if (key.starts_with("rules_")) {
        const auto row_name = key.substr(6);
        int row = -1;
        for (std::size_t i = 0; i < kNumTerms; ++i) {
            std::string lower(kTermNames[i]);
            std::transform(lower.begin(), lower.end(), lower.begin(),
                           [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
            if (row_name == lower) row = static_cast<int>(i);
        }
        if (row < 0) fail(line, "unknown key '" + std::string(key) + "' in [fuzzy]");
        if (st.first_rules_line == 0) st.first_rules_line = line;
        st.rule_rows[static_cast<std::size_t>(row)] = parse_term_row(value, line);
        ++st.rules_rows_seen;
    } else {
        fail(line, "unknown key '" + std::string(key) + "' in [fuzzy]");
    }
}

void apply_actuator(ParseState& st, std::string_view key, std::string_view value, int line) {
    st.mark("actuator", key, line);
    ActuatorModel& a = st.sc.actuator;
    if (key == "min") {
        a.min_db = parse_double(value, line);
    } else if (key == "max") {
        a.max_db = parse_double(value, line);
    } else if (key == "step") {
        a.step_db = parse_double(value, line);
        if (a.step_db < 0.0) fail(line, "step must be non-negative");
    } else if (key == "slew") {
        a.slew_db = parse_double(value, line);
        if (a.slew_db < 0.0) fail(line, "slew must be non-negative");
    } else {
        fail(line, "unknown key '" + std::string(key) + "' in [actuator]");
    }
}

void apply_plant(ParseState& st, std::string_view key, std::string_view value, int line) {
    st.mark("plant", key, line);
    PlantConfig& p = st.sc.plant;
    if (key == "drive") {
        p.drive_dbm = parse_double(value, line);
    } else if (key == "stage_gains") {
        p.stage_gains_db = parse_double_list(value, line);
    } else if (key == "pa_gain") {
        p.pa.gain_db = parse_double(value, line);
    } else if (key == "pa_sat_out") {
        p.pa.sat_out_dbm = parse_double(value, line);
    } else if (key == "pa_smoothness") {
        p.pa.smoothness = parse_double(value, line);
        if (p.pa.smoothness <= 0.0) fail(line, "pa_smoothness must be positive");
    } else if (key == "alpha") {
        p.alpha = parse_double(value, line);
        if (p.alpha <= 0.0) fail(line, "alpha must be positive");
    } else if (key == "link_atten0") {
        p.link_atten0_db = parse_double(value, line);
    } else if (key == "thermal0") {
        p.thermal0_db = parse_double(value, line);
    } else if (key == "lag_tau") {
        p.lag_tau_s = parse_double(value, line);
        if (p.lag_tau_s < 0.0) fail(line, "lag_tau must be non-negative");
    } else if (key == "compression") {
        p.compression = parse_bool(value, line);
    } else {
        fail(line, "unknown key '" + std::string(key) + "' in [plant]");
    }
}

void apply_detector(ParseState& st, std::string_view key, std::string_view value, int line) {
    st.mark("detector", key, line);
    DetectorModel& d = st.sc.detector;
    AdcModel& adc = st.sc.adc;
    if (key == "slope") {
        d.slope_v_per_db = parse_double(value, line);
        if (d.slope_v_per_db <= 0.0) fail(line, "slope must be positive");
    } else if (key == "p0") {
        d.p0_dbm = parse_double(value, line);
    } else if (key == "range_min") {
        d.range_min_dbm = parse_double(value, line);
    } else if (key == "range_max") {
        d.range_max_dbm = parse_double(value, line);
    } else if (key == "vmin") {
        d.vmin_v = parse_double(value, line);
    } else if (key == "vmax") {
        d.vmax_v = parse_double(value, line);
    } else if (key == "adc") {
        adc.enabled = parse_bool(value, line);
    } else if (key == "adc_bits") {
        adc.bits = parse_int(value, line);
        if (adc.bits < 1 || adc.bits > 24) fail(line, "adc_bits must be in 1..24");
    } else if (key == "adc_vref") {
        adc.vref_v = parse_double(value, line);
        if (adc.vref_v <= 0.0) fail(line, "adc_vref must be positive");
    } else if (key == "adc_noise_codes") {
        adc.noise_codes = parse_double(value, line);
        if (adc.noise_codes < 0.0) fail(line, "adc_noise_codes must be non-negative");
    } else {
        fail(line, "unknown key '" + std::string(key) + "' in [detector]");
    }
}

void apply_disturbance(ParseState& st, std::string_view key, std::string_view value, int line) {
    auto& schedule = st.sc.plant.schedule;
    Disturbance d;
    const auto fields = parse_fields(value, line);
    if (key == "link_step") {
        if (fields.size() != 2) fail(line, "link_step takes: time_s delta_db");
        d.kind = Disturbance::Kind::link_step;
        d.t_s = fields[0];
        d.magnitude = fields[1];
    } else if (key == "temp_ramp") {
        if (fields.size() != 3) fail(line, "temp_ramp takes: time_s rate_db_per_s duration_s");
        d.kind = Disturbance::Kind::temp_ramp;
        d.t_s = fields[0];
        d.magnitude = fields[1];
        d.duration_s = fields[2];
        if (d.duration_s <= 0.0) fail(line, "temp_ramp duration must be positive");
    } else {
        fail(line, "unknown key '" + std::string(key) + "' in [disturbances]");
    }
    if (d.t_s < 0.0) fail(line, "disturbance time must be non-negative");
    if (!schedule.empty() && d.t_s < schedule.back().t_s) {
        fail(line, "disturbances must be listed in time order");
    }
    schedule.push_back(d);
}

// Shortest decimal form that parses back to the same bits.
std::string fmt(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string fmt_list(const std::vector<double>& vals) {
    std::string out;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i) out += ",";
        out += fmt(vals[i]);
    }
    return out;
}

std::string fmt_peaks(const std::array<double, kNumTerms>& peaks) {
    std::string out;
    for (std::size_t i = 0; i < kNumTerms; ++i) {
        if (i) out += ",";
        out += fmt(peaks[i]);
    }
    return out;
}

const char* bool_name(bool v) { return v ? "on" : "off"; }

} // namespace

const char* controller_kind_name(ControllerSpec::Kind kind) {
    switch (kind) {
    case ControllerSpec::Kind::pid: return "pid";
    case ControllerSpec::Kind::integral: return "i";
    case ControllerSpec::Kind::fuzzy_integral: return "fi";
    }
    throw ConfigError("unknown controller kind");
}

Scenario Scenario::defaults() {
    Scenario sc;
    sc.plant.schedule.push_back({Disturbance::Kind::link_step, 2.0, -5.0, 0.0});
    return sc;
}

FuzzyEngine make_engine(const FuzzyParams& params) {
    const TermSet e_set = params.e_peaks ? TermSet::from_peaks(*params.e_peaks)
                                         : TermSet::uniform(-params.e_range_db, params.e_range_db);
    const TermSet de_set = params.de_peaks
                               ? TermSet::from_peaks(*params.de_peaks)
                               : TermSet::uniform(-params.de_range_db_per_s, params.de_range_db_per_s);
    const TermSet du_set = params.du_peaks
                               ? TermSet::from_peaks(*params.du_peaks)
                               : TermSet::uniform(-params.du_range_db_per_s, params.du_range_db_per_s);
    const RuleTable table = params.rules ? RuleTable::from_rows(*params.rules) : RuleTable::defaults();
    return FuzzyEngine(e_set, de_set, du_set, table);
}

std::unique_ptr<Controller> make_controller(const ControllerSpec& spec, const ActuatorModel& act) {
    switch (spec.kind) {
    case ControllerSpec::Kind::pid:
        return std::make_unique<PidController>(spec.gains, act, spec.u0_db);
    case ControllerSpec::Kind::integral:
        return std::make_unique<IntegralController>(spec.gains.ki, act, spec.u0_db);
    case ControllerSpec::Kind::fuzzy_integral:
        return std::make_unique<FuzzyIntegralController>(make_engine(spec.fuzzy), act, spec.u0_db);
    }
    throw ConfigError("unknown controller kind");
}

Scenario parse_scenario(const std::string& text) {
    ParseState st;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line(text.data() + pos,
                              (nl == std::string::npos ? text.size() : nl) - pos);
        pos = (nl == std::string::npos) ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "unterminated section header");
            const auto name = trim(line.substr(1, line.size() - 2));
            st.section = section_from_name(name, line_no);
            const std::string tag = "[" + std::string(name) + "]";
            if (!st.seen.insert(tag).second) fail(line_no, "duplicate section " + tag);
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected key = value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) fail(line_no, "empty key");
        if (value.empty()) fail(line_no, "empty value for '" + std::string(key) + "'");

        switch (st.section) {
        case Section::none: fail(line_no, "key outside any section");
        case Section::run: apply_run(st, key, value, line_no); break;
        case Section::controller: apply_controller(st, key, value, line_no); break;
        case Section::fuzzy: apply_fuzzy(st, key, value, line_no); break;
        case Section::actuator: apply_actuator(st, key, value, line_no); break;
        case Section::plant: apply_plant(st, key, value, line_no); break;
        case Section::detector: apply_detector(st, key, value, line_no); break;
        case Section::disturbances: apply_disturbance(st, key, value, line_no); break;
        }
    }

    if (st.rules_rows_seen > 0) {
        if (st.rules_rows_seen != static_cast<int>(kNumTerms)) {
            fail(st.first_rules_line, "rule table override needs all 7 rows (rules_nb..rules_pb)");
        }
        st.sc.controller.fuzzy.rules = st.rule_rows;
    }

    if (st.sc.actuator.max_db <= st.sc.actuator.min_db) {
        fail(line_no, "actuator max must exceed min");
    }
    if (st.sc.detector.vmax_v <= st.sc.detector.vmin_v) {
        fail(line_no, "detector vmax must exceed vmin");
    }
    if (st.sc.detector.range_max_dbm <= st.sc.detector.range_min_dbm) {
        fail(line_no, "detector range_max must exceed range_min");
    }
    if (st.sc.evm.drive_max_dbm <= st.sc.evm.drive_min_dbm) {
        fail(line_no, "evm_drive_max must exceed evm_drive_min");
    }
    return st.sc;
}

std::string serialize_scenario(const Scenario& sc) {
    std::ostringstream out;
    const auto kv = [&out](const char* key, const std::string& value) {
        out << key << " = " << value << "\n";
    };

    out << "[run]\n";
    kv("duration", fmt(sc.run.duration_s));
    kv("ts", fmt(sc.run.ts_s));
    kv("p_ref", fmt(sc.run.p_ref_dbm));
    kv("seed", std::to_string(sc.run.seed));
    kv("f_lo_ghz", fmt(sc.run.f_lo_ghz));
    kv("f_if_ghz", fmt(sc.run.f_if_ghz));
    kv("evm_attens", fmt_list(sc.evm.atten_db));
    kv("evm_drive_min", fmt(sc.evm.drive_min_dbm));
    kv("evm_drive_max", fmt(sc.evm.drive_max_dbm));
    kv("evm_drive_step", fmt(sc.evm.drive_step_db));
    kv("evm_order", std::to_string(sc.evm.order));
    kv("evm_symbols", std::to_string(sc.evm.n_symbols));
    kv("evm_seed", std::to_string(sc.evm.seed));

    out << "\n[controller]\n";
    kv("kind", controller_kind_name(sc.controller.kind));
    kv("kp", fmt(sc.controller.gains.kp));
    kv("ki", fmt(sc.controller.gains.ki));
    kv("kd", fmt(sc.controller.gains.kd));
    kv("u0", fmt(sc.controller.u0_db));

    out << "\n[fuzzy]\n";
    const FuzzyParams& f = sc.controller.fuzzy;
    kv("e_range", fmt(f.e_range_db));
    kv("de_range", fmt(f.de_range_db_per_s));
    kv("du_range", fmt(f.du_range_db_per_s));
    if (f.e_peaks) kv("e_peaks", fmt_peaks(*f.e_peaks));
    if (f.de_peaks) kv("de_peaks", fmt_peaks(*f.de_peaks));
    if (f.du_peaks) kv("du_peaks", fmt_peaks(*f.du_peaks));
    if (f.rules) {
        for (std::size_t i = 0; i < kNumTerms; ++i) {
            std::string key = "rules_";
            for (const char ch : kTermNames[i]) {
                key += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            }
            std::string row;
            for (std::size_t j = 0; j < kNumTerms; ++j) {
                if (j) row += ",";
                row += kTermNames[static_cast<int>((*f.rules)[i][j])];
            }
            kv(key.c_str(), row);
        }
    }

    out << "\n[actuator]\n";
    kv("min", fmt(sc.actuator.min_db));
    kv("max", fmt(sc.actuator.max_db));
    kv("step", fmt(sc.actuator.step_db));
    kv("slew", fmt(sc.actuator.slew_db));

    out << "\n[plant]\n";
    kv("drive", fmt(sc.plant.drive_dbm));
    kv("stage_gains", fmt_list(sc.plant.stage_gains_db));
    kv("pa_gain", fmt(sc.plant.pa.gain_db));
    kv("pa_sat_out", fmt(sc.plant.pa.sat_out_dbm));
    kv("pa_smoothness", fmt(sc.plant.pa.smoothness));
    kv("alpha", fmt(sc.plant.alpha));
    kv("link_atten0", fmt(sc.plant.link_atten0_db));
    kv("thermal0", fmt(sc.plant.thermal0_db));
    kv("lag_tau", fmt(sc.plant.lag_tau_s));
    kv("compression", bool_name(sc.plant.compression));

    out << "\n[detector]\n";
    kv("slope", fmt(sc.detector.slope_v_per_db));
    kv("p0", fmt(sc.detector.p0_dbm));
    kv("range_min", fmt(sc.detector.range_min_dbm));
    kv("range_max", fmt(sc.detector.range_max_dbm));
    kv("vmin", fmt(sc.detector.vmin_v));
    kv("vmax", fmt(sc.detector.vmax_v));
    kv("adc", bool_name(sc.adc.enabled));
    kv("adc_bits", std::to_string(sc.adc.bits));
    kv("adc_vref", fmt(sc.adc.vref_v));
    kv("adc_noise_codes", fmt(sc.adc.noise_codes));

    if (!sc.plant.schedule.empty()) {
        out << "\n[disturbances]\n";
        for (const Disturbance& d : sc.plant.schedule) {
            if (d.kind == Disturbance::Kind::link_step) {
                out << "link_step = " << fmt(d.t_s) << " " << fmt(d.magnitude) << "\n";
            } else {
                out << "temp_ramp = " << fmt(d.t_s) << " " << fmt(d.magnitude) << " "
                    << fmt(d.duration_s) << "\n";
            }
        }
    }
    return out.str();
}

std::uint64_t scenario_hash(const Scenario& sc) {
    const std::string canon = serialize_scenario(sc);
    std::uint64_t h = 14695981039346656037ull;
    for (const unsigned char ch : canon) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace powerloop
