#pragma once

#include <stdexcept>
#include <string>

namespace chaintrack {

/// Invalid kinematic chain description (cycles, duplicate ids, ...).
struct ChainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Configuration file problem; the message names the offending field.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Trace/report file I/O or format problem.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace chaintrack
