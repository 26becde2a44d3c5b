// Dense bank of independent relays on a threshold grid. Serves as the
// brute-force reference model for the interval-set state: both are driven
// by the same input pieces and must agree up to one grid cell per interval
// boundary.
#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

#include "prd/interval_set.hpp"
#include "prd/relay.hpp"

namespace prd {

template <typename Scalar>
struct RelayEnsemble {
  using VectorX = Eigen::Vector<Scalar, Eigen::Dynamic>;

  VectorX thresholds;               // ascending, at least two entries
  std::vector<RelayOutput> states;  // one relay per threshold

  static RelayEnsemble uniform(Scalar x_lo, Scalar x_hi, Eigen::Index m,
                               const IntervalSet<Scalar>& a0) {
    if (m < 2) throw std::invalid_argument("RelayEnsemble: need m >= 2");
    RelayEnsemble e;
    e.thresholds = VectorX::LinSpaced(m, x_lo, x_hi);
    e.states.resize(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
      e.states[static_cast<std::size_t>(i)] =
          a0.contains(e.thresholds[i]) ? RelayOutput::up : RelayOutput::down;
    }
    return e;
  }

  Scalar spacing() const {
    return (thresholds[thresholds.size() - 1] - thresholds[0]) /
           Scalar(thresholds.size() - 1);
  }
};

/// Steps every relay independently through one monotone input piece.
template <typename Scalar>
RelayEnsemble<Scalar> ensemble_step(const RelayEnsemble<Scalar>& e,
                                    InputSegment<Scalar> seg) {
  RelayEnsemble<Scalar> out = e;
  for (Eigen::Index i = 0; i < e.thresholds.size(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    out.states[k] = relay_step(e.states[k], e.thresholds[i], seg);
  }
  return out;
}

/// Rebuilds an interval set from the +1 runs of the ensemble, widening each
/// run by half a grid cell so every reconstructed boundary sits within half
/// a cell of the true one.
template <typename Scalar>
IntervalSet<Scalar> ensemble_to_interval_set(const RelayEnsemble<Scalar>& e,
                                             Scalar domain_lo, Scalar domain_hi) {
  const Scalar half = e.spacing() / Scalar(2);
  std::vector<Interval<Scalar>> parts;
  const Eigen::Index m = e.thresholds.size();
  Eigen::Index i = 0;
  while (i < m) {
    if (e.states[static_cast<std::size_t>(i)] != RelayOutput::up) {
      ++i;
      continue;
    }
    Eigen::Index j = i;
    while (j + 1 < m && e.states[static_cast<std::size_t>(j + 1)] == RelayOutput::up) ++j;
    parts.push_back({std::max(domain_lo, e.thresholds[i] - half),
                     std::min(domain_hi, e.thresholds[j] + half)});
    i = j + 1;
  }
  // Runs may touch after widening; the canonicalizing constructor merges them.
  return IntervalSet<Scalar>(domain_lo, domain_hi, std::move(parts));
}

}  // namespace prd
