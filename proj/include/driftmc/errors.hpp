#pragma once

#include <stdexcept>
#include <string>

namespace driftmc {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or parameters. The message names the offending key.
struct ConfigError : Error {
    using Error::Error;
};

/// Numerical failure (step-size underflow, non-finite state, ...).
struct NumericError : Error {
    explicit NumericError(const std::string& msg, double t = 0.0)
        : Error(msg), t_at_failure(t) {}
    double t_at_failure;
};

/// File system / serialization failure.
struct IoError : Error {
    using Error::Error;
};

}  // namespace driftmc
