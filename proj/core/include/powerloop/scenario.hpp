#pragma once

#include "powerloop/controller.hpp"
#include "powerloop/detector.hpp"
#include "powerloop/evm.hpp"
#include "powerloop/fuzzy.hpp"
#include "powerloop/plant.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

namespace powerloop {

// Term-set geometry for the fuzzy controller. Ranges build uniformly spaced
// symmetric sets; explicit peak lists or a custom rule table may override the
// defaults per variable.
struct FuzzyParams {
    double e_range_db = 10.0;
    double de_range_db_per_s = 400.0;
    double du_range_db_per_s = 120.0;
    std::optional<std::array<double, kNumTerms>> e_peaks;
    std::optional<std::array<double, kNumTerms>> de_peaks;
    std::optional<std::array<double, kNumTerms>> du_peaks;
    std::optional<std::array<std::array<TermId, kNumTerms>, kNumTerms>> rules;

    bool operator==(const FuzzyParams&) const = default;
};

struct ControllerSpec {
    enum class Kind { pid, integral, fuzzy_integral };

    Kind kind = Kind::fuzzy_integral;
    PidGains gains{0.0, 2.0, 0.0}; // pid uses all three, integral uses ki only
    double u0_db = 10.0;
    FuzzyParams fuzzy;

    bool operator==(const ControllerSpec&) const = default;
};

struct RunParams {
    double duration_s = 8.0;
    double ts_s = 0.01;
    double p_ref_dbm = -30.0;
    std::uint64_t seed = 1;
    double f_lo_ghz = 9.6;
    double f_if_ghz = 5.0;

    bool operator==(const RunParams&) const = default;
};

struct Scenario {
    RunParams run;
    ControllerSpec controller;
    ActuatorModel actuator;
    PlantConfig plant;
    DetectorModel detector;
    AdcModel adc;
    EvmSweepConfig evm;

    // The demonstration setup: converged loop hit by a -5 dB link step at 2 s.
    static Scenario defaults();

    bool operator==(const Scenario&) const = default;
};

const char* controller_kind_name(ControllerSpec::Kind kind);

// Engine/controller factories bound to a scenario's parameters.
FuzzyEngine make_engine(const FuzzyParams& params);
std::unique_ptr<Controller> make_controller(const ControllerSpec& spec, const ActuatorModel& act);

// Sectioned key-value text format. Unknown sections or keys, malformed values
// and misordered disturbances are rejected with 1-based line numbers.
Scenario parse_scenario(const std::string& text);

// Canonical serialization: fixed section and key order, shortest round-trip
// number formatting. parse(serialize(s)) == s for every valid scenario.
std::string serialize_scenario(const Scenario& scenario);

// FNV-1a over the canonical serialization; recorded in run manifests.
std::uint64_t scenario_hash(const Scenario& scenario);

} // namespace powerloop
