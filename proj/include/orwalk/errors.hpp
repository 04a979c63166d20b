#pragma once

#include <stdexcept>
#include <string>

namespace orwalk {

// Thrown when a config file fails schema validation (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a hard resource cap is exceeded (CLI exit code 3):
// per-path event cap, torus state-space cap.
struct ResourceCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown on file I/O failures (CLI exit code 4).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Orientation queried on an axis that carries no line directions.
struct UnorientedAxisError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace orwalk
