// Canonical finite unions of disjoint closed intervals inside a threshold
// domain [x_lo, x_hi]. An IntervalSet is the state of the relay collection:
// the set of thresholds whose relays are at +1. Updates follow the running
// max/min rules for monotone input pieces, so the evolution is exact (no
// time discretization error enters through the hysteresis state).
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "prd/errors.hpp"
#include "prd/relay.hpp"

namespace prd {

template <typename Scalar>
struct Interval {
  Scalar lo{};
  Scalar hi{};

  friend bool operator==(const Interval&, const Interval&) = default;
};

template <typename Scalar>
class IntervalSet {
 public:
  using VectorX = Eigen::Vector<Scalar, Eigen::Dynamic>;

  /// Empty set over the given domain.
  IntervalSet(Scalar domain_lo, Scalar domain_hi)
      : lo_(domain_lo), hi_(domain_hi) {
    if (!(lo_ < hi_)) {
      throw std::invalid_argument("IntervalSet: domain_lo must be < domain_hi");
    }
  }

  /// Builds a canonical set from a list of intervals. The list must be
  /// sortable into pairwise non-overlapping pieces within the domain;
  /// overlap is an error, exact touches are merged, zero-length entries
  /// are dropped.
  IntervalSet(Scalar domain_lo, Scalar domain_hi,
              std::vector<Interval<Scalar>> parts)
      : IntervalSet(domain_lo, domain_hi) {
    std::sort(parts.begin(), parts.end(),
              [](const auto& a, const auto& b) { return a.lo < b.lo; });
    for (const auto& p : parts) {
      if (!(p.lo <= p.hi)) {
        throw std::invalid_argument("IntervalSet: interval with lo > hi");
      }
      if (p.lo < lo_ || p.hi > hi_) {
        throw std::invalid_argument("IntervalSet: interval outside domain");
      }
      if (p.lo == p.hi) continue;
      if (!parts_.empty()) {
        if (p.lo < parts_.back().hi) {
          throw std::invalid_argument("IntervalSet: overlapping intervals");
        }
        if (p.lo == parts_.back().hi) {
          parts_.back().hi = p.hi;
          continue;
        }
      }
      parts_.push_back(p);
    }
  }

  static IntervalSet full(Scalar domain_lo, Scalar domain_hi) {
    IntervalSet s(domain_lo, domain_hi);
    s.parts_.push_back({domain_lo, domain_hi});
    return s;
  }

  static IntervalSet empty(Scalar domain_lo, Scalar domain_hi) {
    return IntervalSet(domain_lo, domain_hi);
  }

  Scalar domain_lo() const { return lo_; }
  Scalar domain_hi() const { return hi_; }
  const std::vector<Interval<Scalar>>& parts() const { return parts_; }
  Eigen::Index count() const { return static_cast<Eigen::Index>(parts_.size()); }
  bool is_empty() const { return parts_.empty(); }

  Scalar measure() const {
    Scalar m = 0;
    for (const auto& p : parts_) m += p.hi - p.lo;
    return m;
  }

  /// Closed-interval membership; endpoints count as inside.
  bool contains(Scalar x) const {
    auto it = std::upper_bound(
        parts_.begin(), parts_.end(), x,
        [](Scalar v, const Interval<Scalar>& p) { return v < p.lo; });
    return it != parts_.begin() && std::prev(it)->hi >= x;
  }

  /// Exact set containment: every part of other lies inside a part of this.
  bool contains(const IntervalSet& other) const {
    auto it = parts_.begin();
    for (const auto& q : other.parts_) {
      while (it != parts_.end() && it->hi < q.hi) ++it;
      if (it == parts_.end() || it->lo > q.lo) return false;
    }
    return true;
  }

  /// Closure of the set complement within the domain.
  IntervalSet complement() const {
    IntervalSet out(lo_, hi_);
    Scalar cursor = lo_;
    for (const auto& p : parts_) {
      if (p.lo > cursor) out.parts_.push_back({cursor, p.lo});
      cursor = p.hi;
    }
    if (cursor < hi_) out.parts_.push_back({cursor, hi_});
    return out;
  }

  /// Union with one closed interval, kept canonical.
  IntervalSet with_interval(Scalar lo, Scalar hi) const {
    if (!(lo <= hi)) {
      throw std::invalid_argument("with_interval: lo > hi");
    }
    if (lo < lo_ || hi > hi_) {
      throw std::invalid_argument("with_interval: interval outside domain");
    }
    if (lo == hi) return *this;
    IntervalSet out(lo_, hi_);
    out.parts_.reserve(parts_.size() + 1);
    std::size_t i = 0;
    while (i < parts_.size() && parts_[i].hi < lo) out.parts_.push_back(parts_[i++]);
    Interval<Scalar> merged{lo, hi};
    while (i < parts_.size() && parts_[i].lo <= hi) {
      merged.lo = std::min(merged.lo, parts_[i].lo);
      merged.hi = std::max(merged.hi, parts_[i].hi);
      ++i;
    }
    out.parts_.push_back(merged);
    while (i < parts_.size()) out.parts_.push_back(parts_[i++]);
    return out;
  }

  /// Difference with one open interval (lo, hi); boundary points stay in the
  /// set only as positive-length remainders, zero-length pieces are dropped.
  IntervalSet without_open(Scalar lo, Scalar hi) const {
    if (!(lo <= hi)) {
      throw std::invalid_argument("without_open: lo > hi");
    }
    if (lo == hi) return *this;
    IntervalSet out(lo_, hi_);
    out.parts_.reserve(parts_.size() + 1);
    for (const auto& p : parts_) {
      if (p.hi <= lo || p.lo >= hi) {
        out.parts_.push_back(p);
        continue;
      }
      if (p.lo < lo) out.parts_.push_back({p.lo, std::min(p.hi, lo)});
      if (p.hi > hi) out.parts_.push_back({std::max(p.lo, hi), p.hi});
    }
    return out;
  }

  friend bool operator==(const IntervalSet& a, const IntervalSet& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.parts_ == b.parts_;
  }

 private:
  Scalar lo_;
  Scalar hi_;
  std::vector<Interval<Scalar>> parts_;
};

/// Lebesgue measure of the intersection of two sets over the same domain.
template <typename Scalar>
Scalar intersection_measure(const IntervalSet<Scalar>& a,
                            const IntervalSet<Scalar>& b) {
  Scalar m = 0;
  std::size_t i = 0, j = 0;
  const auto& pa = a.parts();
  const auto& pb = b.parts();
  while (i < pa.size() && j < pb.size()) {
    const Scalar lo = std::max(pa[i].lo, pb[j].lo);
    const Scalar hi = std::min(pa[i].hi, pb[j].hi);
    if (hi > lo) m += hi - lo;
    if (pa[i].hi < pb[j].hi) ++i; else ++j;
  }
  return m;
}

/// Measure of the symmetric difference; the natural metric between states.
template <typename Scalar>
Scalar rho(const IntervalSet<Scalar>& a, const IntervalSet<Scalar>& b) {
  if (a.domain_lo() != b.domain_lo() || a.domain_hi() != b.domain_hi()) {
    throw std::invalid_argument("rho: sets live on different domains");
  }
  return a.measure() + b.measure() - Scalar(2) * intersection_measure(a, b);
}

/// Advances the relay state through one monotone input piece.
///
/// Increasing piece ending at w1 >= x_lo joins [x_lo, min(w1, x_hi)];
/// decreasing piece ending at w1 < -x_lo removes the open interval
/// (x_lo, min(-w1, x_hi)); anything ending inside [-x_lo, x_lo) leaves the
/// state untouched. Assumes the state is compatible with the piece's start,
/// which every trajectory beginning from a checked initial state maintains.
template <typename Scalar>
IntervalSet<Scalar> state_update(const IntervalSet<Scalar>& a,
                                 InputSegment<Scalar> seg) {
  const Scalar x_lo = a.domain_lo();
  const Scalar x_hi = a.domain_hi();
  if (seg.increasing()) {
    if (seg.w1 >= x_lo) {
      return a.with_interval(x_lo, std::min(seg.w1, x_hi));
    }
    return a;
  }
  if (seg.w1 < -x_lo) {
    return a.without_open(x_lo, std::min(-seg.w1, x_hi));
  }
  return a;
}

/// Checks the consistency requirement between a state and an input value:
/// [x_lo, w] must lie in the state when w >= x_lo, and [x_lo, -w) must miss
/// it when w < -x_lo. Returns an offending positive-measure sub-interval,
/// or nullopt when compatible.
template <typename Scalar>
std::optional<Interval<Scalar>> compatibility_defect(
    const IntervalSet<Scalar>& a, Scalar w) {
  const Scalar x_lo = a.domain_lo();
  const Scalar x_hi = a.domain_hi();
  if (w >= x_lo) {
    const Scalar need_hi = std::min(w, x_hi);
    Scalar cursor = x_lo;
    for (const auto& p : a.parts()) {
      if (p.lo >= need_hi) break;
      if (p.lo > cursor) return Interval<Scalar>{cursor, std::min(p.lo, need_hi)};
      cursor = std::max(cursor, p.hi);
      if (cursor >= need_hi) return std::nullopt;
    }
    if (cursor < need_hi) return Interval<Scalar>{cursor, need_hi};
    return std::nullopt;
  }
  if (w < -x_lo) {
    const Scalar forb_hi = std::min(-w, x_hi);
    for (const auto& p : a.parts()) {
      const Scalar lo = std::max(p.lo, x_lo);
      const Scalar hi = std::min(p.hi, forb_hi);
      if (hi > lo) return Interval<Scalar>{lo, hi};
    }
  }
  return std::nullopt;
}

/// Validates a candidate initial state against the initial input value and
/// returns it unchanged; throws CompatibilityViolation naming the offending
/// sub-interval otherwise.
template <typename Scalar>
IntervalSet<Scalar> make_initial_state(const IntervalSet<Scalar>& a0, Scalar w0) {
  if (auto bad = compatibility_defect(a0, w0)) {
    std::ostringstream msg;
    msg << "initial state incompatible with w0=" << w0 << ": sub-interval ["
        << bad->lo << ", " << bad->hi << "] "
        << (w0 >= a0.domain_lo() ? "must be inside the state"
                                 : "must be outside the state");
    throw CompatibilityViolation(msg.str());
  }
  return a0;
}

/// Samples the distributed relay output on an ascending grid: +1 at points
/// inside the state (closed membership), -1 outside.
template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> relay_field(
    const IntervalSet<Scalar>& a,
    const Eigen::Ref<const Eigen::Vector<Scalar, Eigen::Dynamic>>& grid) {
  Eigen::Vector<Scalar, Eigen::Dynamic> r =
      Eigen::Vector<Scalar, Eigen::Dynamic>::Constant(grid.size(), Scalar(-1));
  const auto& parts = a.parts();
  std::size_t j = 0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Scalar x = grid[i];
    while (j < parts.size() && parts[j].hi < x) ++j;
    if (j < parts.size() && parts[j].lo <= x) r[i] = Scalar(1);
  }
  return r;
}

}  // namespace prd
