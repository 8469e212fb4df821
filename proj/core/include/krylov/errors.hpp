#pragma once

#include <stdexcept>
#include <string>

namespace krylov {

// Malformed user input: config files, flags, spectrum or Matrix Market files.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A run produced a value that contradicts a guaranteed property
// (e.g. a Rayleigh-Ritz estimate escaping the spectral range).
class InvariantViolation : public std::runtime_error {
 public:
  explicit InvariantViolation(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace krylov
