// Sampled density over the threshold interval on a uniform grid, together
// with its trapezoid quadrature weights. All integral quantities in the
// model (total mass, Preisach output, Fourier coefficients) are evaluated
// with these shared weights so that discrete balance laws close exactly.
#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <utility>

#include "prd/interval_set.hpp"

namespace prd {

template <typename Scalar>
class DensityField {
 public:
  using VectorX = Eigen::Vector<Scalar, Eigen::Dynamic>;

  DensityField(Scalar x_lo, Scalar x_hi, VectorX values)
      : x_lo_(x_lo), x_hi_(x_hi), values_(std::move(values)) {
    if (!(x_lo_ < x_hi_)) {
      throw std::invalid_argument("DensityField: x_lo must be < x_hi");
    }
    if (values_.size() < 2) {
      throw std::invalid_argument("DensityField: need at least two samples");
    }
    const Eigen::Index n = values_.size();
    h_ = (x_hi_ - x_lo_) / Scalar(n - 1);
    grid_ = VectorX::LinSpaced(n, x_lo_, x_hi_);
    weights_ = VectorX::Constant(n, h_);
    weights_[0] = h_ / Scalar(2);
    weights_[n - 1] = h_ / Scalar(2);
  }

  static DensityField constant(Scalar x_lo, Scalar x_hi, Eigen::Index n,
                               Scalar value) {
    return DensityField(x_lo, x_hi, VectorX::Constant(n, value));
  }

  Scalar x_lo() const { return x_lo_; }
  Scalar x_hi() const { return x_hi_; }
  Scalar spacing() const { return h_; }
  Eigen::Index size() const { return values_.size(); }
  const VectorX& values() const { return values_; }
  const VectorX& grid() const { return grid_; }
  const VectorX& weights() const { return weights_; }

  Scalar min_value() const { return values_.minCoeff(); }

  /// Same grid, new samples.
  DensityField with_values(VectorX values) const {
    if (values.size() != values_.size()) {
      throw std::invalid_argument("with_values: size mismatch");
    }
    DensityField out = *this;
    out.values_ = std::move(values);
    return out;
  }

  friend bool operator==(const DensityField& a, const DensityField& b) {
    return a.x_lo_ == b.x_lo_ && a.x_hi_ == b.x_hi_ && a.values_ == b.values_;
  }

 private:
  Scalar x_lo_;
  Scalar x_hi_;
  Scalar h_{};
  VectorX values_;
  VectorX grid_;
  VectorX weights_;
};

/// Trapezoid approximation of the integral of u over [x_lo, x_hi]; exact
/// for piecewise-linear samples.
template <typename Scalar>
Scalar total_mass(const DensityField<Scalar>& u) {
  return u.weights().dot(u.values());
}

/// Preisach output: the integral of u weighted by the +-1 relay field of the
/// state, on the same quadrature as total_mass. Interval boundaries are
/// resolved only to the grid, an O(h) error per boundary.
template <typename Scalar>
Scalar preisach(const DensityField<Scalar>& u, const IntervalSet<Scalar>& a) {
  if (a.domain_lo() != u.x_lo() || a.domain_hi() != u.x_hi()) {
    throw std::invalid_argument("preisach: state and density domains differ");
  }
  const auto r = relay_field<Scalar>(a, u.grid());
  return u.weights().dot(u.values().cwiseProduct(r));
}

}  // namespace prd
