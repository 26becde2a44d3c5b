// Problem definition: run parameters, initial data validation, the change of
// variables between nutrient amounts (f1, fm1) and the pair (v, w), and the
// reaction right-hand-side terms for the coupled density/nutrient/deviation
// system.
#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "prd/density_field.hpp"
#include "prd/errors.hpp"
#include "prd/interval_set.hpp"
#include "prd/relay.hpp"

namespace prd {

template <typename Scalar>
struct ModelParams {
  Scalar x_lo{};          // lower threshold bound, must be positive
  Scalar x_hi{};          // upper threshold bound
  Scalar diffusion{1};    // threshold diffusion coefficient
  Eigen::Index n_grid{2};
  Scalar dt{};
  Scalar t_end{};

  void validate() const {
    if (!(x_lo > Scalar(0))) {
      throw std::invalid_argument("ModelParams: x_lo must be > 0");
    }
    if (!(x_lo < x_hi)) {
      throw std::invalid_argument("ModelParams: need x_lo < x_hi");
    }
    if (!(diffusion >= Scalar(0))) {
      throw std::invalid_argument("ModelParams: diffusion must be >= 0");
    }
    if (n_grid < 2) {
      throw std::invalid_argument("ModelParams: n_grid must be >= 2");
    }
    if (!(dt > Scalar(0))) {
      throw std::invalid_argument("ModelParams: dt must be > 0");
    }
    if (!(t_end >= Scalar(0))) {
      throw std::invalid_argument("ModelParams: t_end must be >= 0");
    }
  }
};

template <typename Scalar>
struct InitialData {
  DensityField<Scalar> u0;
  Scalar v0{};
  Scalar w0{};
  IntervalSet<Scalar> a0;
  // Permits sign-indefinite data for exploratory runs; monitors that assume
  // physical data are then meaningless and get disabled by the caller.
  bool allow_nonphysical{false};

  void validate() const {
    if (!allow_nonphysical) {
      if (u0.min_value() < Scalar(0)) {
        throw std::invalid_argument("InitialData: u0 must be nonnegative");
      }
      if (v0 < Scalar(0)) {
        throw std::invalid_argument("InitialData: v0 must be nonnegative");
      }
      if (std::abs(w0) > Scalar(0.5)) {
        throw std::invalid_argument("InitialData: |w0| must be <= 1/2");
      }
    }
    if (a0.domain_lo() != u0.x_lo() || a0.domain_hi() != u0.x_hi()) {
      throw std::invalid_argument("InitialData: a0 and u0 domains differ");
    }
    make_initial_state(a0, w0);
  }
};

/// Nutrient amounts for the two phenotypes.
template <typename Scalar>
struct NutrientPair {
  Scalar f1{};
  Scalar fm1{};

  friend bool operator==(const NutrientPair&, const NutrientPair&) = default;
};

/// (f1, fm1) -> (v, w): total amount and deviation of the relative
/// concentration of the first nutrient from 1/2.
template <typename Scalar>
std::pair<Scalar, Scalar> nutrients_to_vw(const NutrientPair<Scalar>& p) {
  if (p.f1 < Scalar(0) || p.fm1 < Scalar(0)) {
    throw std::invalid_argument("nutrients_to_vw: amounts must be nonnegative");
  }
  const Scalar v = p.f1 + p.fm1;
  if (v == Scalar(0)) {
    throw DegenerateNutrients("nutrients_to_vw: f1 + fm1 = 0, w undefined");
  }
  return {v, p.f1 / v - Scalar(0.5)};
}

/// Inverse transform; defined for v >= 0 and |w| <= 1/2.
template <typename Scalar>
NutrientPair<Scalar> vw_to_nutrients(Scalar v, Scalar w) {
  if (v < Scalar(0)) {
    throw std::invalid_argument("vw_to_nutrients: v must be nonnegative");
  }
  if (std::abs(w) > Scalar(0.5)) {
    throw std::invalid_argument("vw_to_nutrients: |w| must be <= 1/2");
  }
  return {v * (Scalar(0.5) + w), v * (Scalar(0.5) - w)};
}

/// Pointwise growth coefficient (1/2 + w r) v of the density equation.
template <typename Scalar>
Scalar reaction_coefficient(Scalar v, Scalar w, RelayOutput r) {
  return (Scalar(0.5) + w * relay_value<Scalar>(r)) * v;
}

/// Nutrient consumption rate -(U/2 + w P) v.
template <typename Scalar>
Scalar v_rhs(Scalar total, Scalar preisach_out, Scalar v, Scalar w) {
  return -(total / Scalar(2) + w * preisach_out) * v;
}

/// Deviation rate -(1/2 + w)(1/2 - w) P; vanishes exactly at w = +-1/2.
template <typename Scalar>
Scalar w_rhs(Scalar preisach_out, Scalar w) {
  return -(Scalar(0.5) + w) * (Scalar(0.5) - w) * preisach_out;
}

}  // namespace prd
