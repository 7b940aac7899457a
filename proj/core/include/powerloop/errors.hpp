#pragma once

#include <stdexcept>
#include <string>

namespace powerloop {

// Invalid static configuration: bad term geometry, non-positive gains, malformed models.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Internal inference invariant broken (e.g. nothing fired despite input clamping).
class InferenceError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Scenario text could not be parsed or bound; carries the 1-based source line.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

// Simulation produced a non-finite value or violated a runtime invariant.
class SimFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Filesystem write/read failure while emitting artifacts.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace powerloop
