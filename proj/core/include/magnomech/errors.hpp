#pragma once

#include <stdexcept>
#include <string>

namespace magnomech {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Precondition violation: bad dimensions, non-finite values, out-of-range arguments.
struct InvalidInput : Error {
  using Error::Error;
};

// A computed object violates its own invariants (e.g. a non-physical covariance block).
struct InvalidState : Error {
  using Error::Error;
};

// An iterative algorithm exhausted its budget without meeting its tolerance.
struct ConvergenceError : Error {
  using Error::Error;
};

// Problems with user-supplied configuration (files, axis specs, parameter names).
// Maps to process exit code 3 in the CLI.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace magnomech
