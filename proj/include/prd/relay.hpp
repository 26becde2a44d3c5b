// Single non-ideal relay: a binary output that switches to +1 when the input
// reaches the threshold x, switches to -1 only when the input drops strictly
// below -x, and keeps its state inside the bi-stability range (-x, x).
#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace prd {

enum class RelayOutput : std::int8_t { down = -1, up = +1 };

template <typename Scalar>
constexpr Scalar relay_value(RelayOutput r) {
  return r == RelayOutput::up ? Scalar(1) : Scalar(-1);
}

/// One monotone linear piece of an input trajectory.
template <typename Scalar>
struct InputSegment {
  Scalar w0{};
  Scalar w1{};

  constexpr bool increasing() const { return w1 >= w0; }
};

/// Relay state after traversing one monotone segment, starting from state r.
///
/// Reaching w >= x switches up; only dropping strictly below -x switches
/// down. On a monotone traversal at most two events can fire and the one at
/// the segment's end wins: an increasing piece visits its minimum first, a
/// decreasing piece its maximum.
template <typename Scalar>
RelayOutput relay_step(RelayOutput r, Scalar x, InputSegment<Scalar> seg) {
  if (!(x > Scalar(0))) {
    throw std::invalid_argument("relay_step: threshold must be positive");
  }
  if (seg.increasing()) {
    if (seg.w1 >= x) return RelayOutput::up;
    if (seg.w0 < -x) return RelayOutput::down;
    return r;
  }
  if (seg.w1 < -x) return RelayOutput::down;
  if (seg.w0 >= x) return RelayOutput::up;
  return r;
}

/// Folds relay_step over a continuous piecewise-linear trajectory.
///
/// Returns the state at every node; the first entry is the state at the
/// initial input value (r0 unless that value already lies outside the
/// bi-stability range). Output depends only on the ordered value sequence,
/// not on any notion of traversal speed.
template <typename Scalar>
std::vector<RelayOutput> relay_trace(Scalar x, RelayOutput r0,
                                     std::span<const InputSegment<Scalar>> w) {
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i].w0 != w[i - 1].w1) {
      throw std::invalid_argument("relay_trace: discontinuous trajectory");
    }
  }
  std::vector<RelayOutput> states;
  states.reserve(w.size() + 1);
  RelayOutput r = r0;
  if (!w.empty()) {
    r = relay_step(r, x, InputSegment<Scalar>{w.front().w0, w.front().w0});
  }
  states.push_back(r);
  for (const auto& seg : w) {
    r = relay_step(r, x, seg);
    states.push_back(r);
  }
  return states;
}

template <typename Scalar>
std::vector<RelayOutput> relay_trace(Scalar x, RelayOutput r0,
                                     const std::vector<InputSegment<Scalar>>& w) {
  return relay_trace(x, r0, std::span<const InputSegment<Scalar>>(w));
}

/// Splits a node sequence w0, w1, ... into the segments joining them.
template <typename Scalar>
std::vector<InputSegment<Scalar>> segments_from_nodes(std::span<const Scalar> nodes) {
  std::vector<InputSegment<Scalar>> segs;
  if (nodes.size() < 2) return segs;
  segs.reserve(nodes.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    segs.push_back({nodes[i], nodes[i + 1]});
  }
  return segs;
}

template <typename Scalar>
std::vector<InputSegment<Scalar>> segments_from_nodes(const std::vector<Scalar>& nodes) {
  return segments_from_nodes(std::span<const Scalar>(nodes));
}

}  // namespace prd
