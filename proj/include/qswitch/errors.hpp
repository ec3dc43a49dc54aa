#pragma once

#include <stdexcept>
#include <string>

namespace qswitch {

/// Caller passed a value outside an operation's domain (non-unitary matrix,
/// bad index, non-finite angle, malformed text).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical self-check failed (synthesis reconstruction, process-matrix
/// contract). Indicates a bug or an unsupported corner, not bad input.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Least-squares fit could not be performed on the supplied data.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration file missing, unreadable or holding out-of-range values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qswitch
