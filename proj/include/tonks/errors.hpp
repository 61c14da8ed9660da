#pragma once

#include <stdexcept>
#include <string>

namespace tonks {

// Precondition violations use std::invalid_argument. The three types below
// separate the failure classes the command-line front end maps to exit codes.

/// Bad or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A solver or internal consistency check failed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The measured signal cannot be inverted within the model.
class InversionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config = 2;
inline constexpr int numerical = 3;
inline constexpr int inversion = 4;
}  // namespace exit_code

}  // namespace tonks
