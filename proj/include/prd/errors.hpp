// Exception types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace prd {

/// Initial relay configuration is inconsistent with the initial input value.
class CompatibilityViolation : public std::runtime_error {
 public:
  explicit CompatibilityViolation(const std::string& what)
      : std::runtime_error(what) {}
};

/// Both nutrient amounts are zero; the concentration deviation is undefined.
class DegenerateNutrients : public std::runtime_error {
 public:
  explicit DegenerateNutrients(const std::string& what)
      : std::runtime_error(what) {}
};

/// A monitored runtime invariant (conservation, positivity, band) failed.
class InvariantBreach : public std::runtime_error {
 public:
  explicit InvariantBreach(const std::string& what)
      : std::runtime_error(what) {}
};

/// The relay state was still changing inside the requested trailing window.
class NotStationary : public std::runtime_error {
 public:
  NotStationary(const std::string& what, double last_change_time)
      : std::runtime_error(what), last_change_time_(last_change_time) {}
  double last_change_time() const { return last_change_time_; }

 private:
  double last_change_time_;
};

/// Malformed or invalid run configuration; message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace prd
