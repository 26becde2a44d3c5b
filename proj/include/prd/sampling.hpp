// Deterministic random generators for the property suites: piecewise-linear
// input trajectories with tracked variation and relay states compatible with
// a given starting input.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "prd/interval_set.hpp"

namespace prd {

struct PiecewiseInput {
  std::vector<double> nodes;
  double variation{0};
};

inline PiecewiseInput sample_piecewise_input(std::mt19937_64& rng, double amp,
                                             int n_segments) {
  std::uniform_real_distribution<double> value(-amp, amp);
  PiecewiseInput out;
  out.nodes.resize(static_cast<std::size_t>(n_segments) + 1);
  out.nodes[0] = value(rng);
  for (int i = 1; i <= n_segments; ++i) {
    out.nodes[static_cast<std::size_t>(i)] = value(rng);
    out.variation += std::abs(out.nodes[static_cast<std::size_t>(i)] -
                              out.nodes[static_cast<std::size_t>(i - 1)]);
  }
  return out;
}

/// Random simple state made compatible with the starting input value w0 by
/// applying the two compatibility fixes directly.
inline IntervalSet<double> sample_compatible_state(std::mt19937_64& rng,
                                                   double x_lo, double x_hi,
                                                   double w0) {
  std::uniform_int_distribution<int> n_parts(0, 4);
  std::uniform_real_distribution<double> point(x_lo, x_hi);
  const int k = n_parts(rng);
  std::vector<double> cuts(static_cast<std::size_t>(2 * k));
  for (auto& c : cuts) c = point(rng);
  std::sort(cuts.begin(), cuts.end());
  IntervalSet<double> a(x_lo, x_hi);
  for (int i = 0; i < k; ++i) {
    a = a.with_interval(cuts[static_cast<std::size_t>(2 * i)],
                        cuts[static_cast<std::size_t>(2 * i + 1)]);
  }
  if (w0 >= x_lo) {
    a = a.with_interval(x_lo, std::min(w0, x_hi));
  } else if (w0 < -x_lo) {
    a = a.without_open(x_lo, std::min(-w0, x_hi));
  }
  return a;
}

}  // namespace prd
