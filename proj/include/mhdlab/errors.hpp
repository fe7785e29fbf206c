#pragma once

#include <stdexcept>
#include <string>

namespace mhdlab {

/// Bad user input: malformed config, unknown keys, hypothesis violations.
/// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A computation failed its numerical contract (non-convergence, constraint
/// drift, ellipticity loss, ...). The CLI maps this to exit code 1.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mhdlab
