// Flat key-value run configuration: parsing, validation, serialization, and
// resolution into solver inputs. Keys use dotted sections; unknown keys are
// rejected so typos fail loudly.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "prd/interval_set.hpp"
#include "prd/model.hpp"

namespace prd {

struct U0Spec {
  enum class Kind { constant, table, pwlinear };
  Kind kind{Kind::constant};
  double value{1.0};                              // for kind = constant
  std::vector<std::pair<double, double>> nodes;   // (x, u) pairs otherwise

  friend bool operator==(const U0Spec&, const U0Spec&) = default;
};

struct RunConfig {
  ModelParams<double> params;
  U0Spec u0;
  double v0{0.0};
  double w0{0.0};
  std::vector<Interval<double>> a0;
  bool allow_nonphysical{false};
  std::string out_dir{"out"};
  Eigen::Index stride{1};
  bool write_report{true};
  bool strict_mode{false};

  friend bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.params.x_lo == b.params.x_lo && a.params.x_hi == b.params.x_hi &&
           a.params.diffusion == b.params.diffusion &&
           a.params.n_grid == b.params.n_grid && a.params.dt == b.params.dt &&
           a.params.t_end == b.params.t_end && a.u0 == b.u0 && a.v0 == b.v0 &&
           a.w0 == b.w0 && a.a0 == b.a0 &&
           a.allow_nonphysical == b.allow_nonphysical &&
           a.out_dir == b.out_dir && a.stride == b.stride &&
           a.write_report == b.write_report && a.strict_mode == b.strict_mode;
  }
};

/// Parses and fully validates a configuration document. Throws ConfigError
/// naming the offending key.
RunConfig parse_config(const std::string& text);

/// Reads and parses a configuration file.
RunConfig load_config(const std::string& path);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& c);

/// Builds the initial density field described by the u0 spec.
DensityField<double> resolve_u0(const RunConfig& c);

/// Full solver inputs for a validated configuration.
InitialData<double> resolve_initial_data(const RunConfig& c);

}  // namespace prd
