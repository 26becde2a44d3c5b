// Post-processing monitors: conservation and monotonicity audits, the
// exponential nutrient-decay bound, distance from the uniform limit profile,
// Neumann cosine-mode analysis, and extraction of the stationary phenotype
// pattern.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "prd/density_field.hpp"
#include "prd/errors.hpp"
#include "prd/interval_set.hpp"
#include "prd/model.hpp"
#include "prd/solver.hpp"

namespace prd {

/// Max over recorded steps of |U + v - (U0 + v0)| / (U0 + v0).
template <typename Scalar>
Scalar conservation_audit(const Trajectory<Scalar>& traj) {
  if (traj.scalars.size() == 0) {
    throw std::invalid_argument("conservation_audit: empty trajectory");
  }
  Scalar worst = 0;
  for (std::size_t i = 0; i < traj.scalars.size(); ++i) {
    const Scalar total = traj.scalars.total[i] + traj.scalars.v[i];
    const Scalar ref = traj.initial_total;
    const Scalar res =
        ref != Scalar(0) ? std::abs(total - ref) / ref : std::abs(total);
    worst = std::max(worst, res);
  }
  return worst;
}

template <typename Scalar>
struct MonotonicityAudit {
  Scalar max_v_increase{0};  // most positive v(t+dt) - v(t)
  Scalar max_u_decrease{0};  // most positive U(t) - U(t+dt)
};

/// Largest violations of "v non-increasing, U non-decreasing" between
/// consecutive recorded steps; both are <= 0 on an exact trace.
template <typename Scalar>
MonotonicityAudit<Scalar> monotonicity_audit(const Trajectory<Scalar>& traj) {
  MonotonicityAudit<Scalar> out;
  for (std::size_t i = 1; i < traj.scalars.size(); ++i) {
    out.max_v_increase =
        std::max(out.max_v_increase, traj.scalars.v[i] - traj.scalars.v[i - 1]);
    out.max_u_decrease = std::max(
        out.max_u_decrease, traj.scalars.total[i - 1] - traj.scalars.total[i]);
  }
  return out;
}

/// Max over the trace of v(t) e^{delta U0 t} / v0, the margin against the
/// exponential decay bound v(t) <= v0 e^{-delta U0 t}. A result <= 1 (plus
/// round-off) means the bound holds along the whole trace.
template <typename Scalar>
Scalar decay_bound_check(const Trajectory<Scalar>& traj, Scalar delta) {
  if (traj.scalars.size() == 0) {
    throw std::invalid_argument("decay_bound_check: empty trajectory");
  }
  if (traj.params.x_hi >= Scalar(0.5)) {
    throw std::invalid_argument("decay_bound_check: requires x_hi < 1/2");
  }
  const Scalar u0_mass = traj.initial_mass;
  if (u0_mass == Scalar(0)) {
    throw std::invalid_argument("decay_bound_check: requires U0 > 0");
  }
  const Scalar v0 = traj.scalars.v.front();
  if (v0 == Scalar(0)) return Scalar(0);
  Scalar margin = 0;
  for (std::size_t i = 0; i < traj.scalars.size(); ++i) {
    margin = std::max(margin, traj.scalars.v[i] *
                                  std::exp(delta * u0_mass * traj.scalars.t[i]) /
                                  v0);
  }
  return margin;
}

/// Sharpest decay constant extractable from the band-trapping argument.
template <typename Scalar>
Scalar decay_delta(const ModelParams<Scalar>& p, Scalar w0) {
  return Scalar(0.5) - std::max(p.x_hi, std::abs(w0));
}

/// Sup-norm distance of the density from the flat equilibrium profile
/// (U0 + v0) / (x_hi - x_lo).
template <typename Scalar>
Scalar uniform_limit_distance(const SystemState<Scalar>& s,
                              const InitialData<Scalar>& init) {
  const Scalar limit = (total_mass(init.u0) + init.v0) /
                       (s.u.x_hi() - s.u.x_lo());
  return (s.u.values().array() - limit).abs().maxCoeff();
}

/// Cosine eigenfunctions of the Neumann Laplacian on [x_lo, x_hi],
/// orthonormal in L2.
template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> neumann_mode(const DensityField<Scalar>& u,
                                                   Eigen::Index k) {
  using VectorX = Eigen::Vector<Scalar, Eigen::Dynamic>;
  const Scalar len = u.x_hi() - u.x_lo();
  if (k == 0) return VectorX::Constant(u.size(), Scalar(1) / std::sqrt(len));
  const Scalar f = std::numbers::pi_v<Scalar> * Scalar(k) / len;
  return (std::sqrt(Scalar(2) / len) *
          ((u.grid().array() - u.x_lo()) * f).cos())
      .matrix();
}

template <typename Scalar>
Scalar neumann_eigenvalue(const DensityField<Scalar>& u, Eigen::Index k) {
  const Scalar f = std::numbers::pi_v<Scalar> * Scalar(k) / (u.x_hi() - u.x_lo());
  return f * f;
}

/// First K+1 cosine-mode coefficients of u under the shared quadrature.
template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> fourier_modes(const DensityField<Scalar>& u,
                                                    Eigen::Index K) {
  if (K < 0) throw std::invalid_argument("fourier_modes: K must be >= 0");
  Eigen::Vector<Scalar, Eigen::Dynamic> coeffs(K + 1);
  const auto weighted = u.weights().cwiseProduct(u.values());
  for (Eigen::Index k = 0; k <= K; ++k) {
    coeffs[k] = weighted.dot(neumann_mode(u, k));
  }
  return coeffs;
}

/// |u_0 e_0 - U / (x_hi - x_lo)|: the mode-0 coefficient must reproduce the
/// mean exactly up to quadrature round-off.
template <typename Scalar>
Scalar mode_zero_identity_error(const DensityField<Scalar>& u) {
  const Scalar len = u.x_hi() - u.x_lo();
  const Scalar mode0 = fourier_modes(u, 0)[0] / std::sqrt(len);
  return std::abs(mode0 - total_mass(u) / len);
}

template <typename Scalar>
struct AsymptoticsReport {
  Scalar t_final{};
  Scalar v_final{};
  Scalar decay_margin{};
  Scalar uniform_distance{};
  Eigen::Vector<Scalar, Eigen::Dynamic> mode_energy;
};

template <typename Scalar>
AsymptoticsReport<Scalar> make_asymptotics_report(const Trajectory<Scalar>& traj,
                                                  const InitialData<Scalar>& init,
                                                  Eigen::Index modes,
                                                  Scalar delta) {
  return AsymptoticsReport<Scalar>{
      traj.final_state.t, traj.final_state.v, decay_bound_check(traj, delta),
      uniform_limit_distance(traj.final_state, init),
      fourier_modes(traj.final_state.u, modes)};
}

template <typename Scalar>
struct PhenotypePattern {
  IntervalSet<Scalar> a1;   // thresholds resting at +1
  IntervalSet<Scalar> am1;  // complement, thresholds resting at -1
  Eigen::Index n_intervals{};
};

/// Final relay state as the limit pattern, provided the state stopped
/// changing at least `window` time units before the end of the run.
template <typename Scalar>
PhenotypePattern<Scalar> extract_pattern(const Trajectory<Scalar>& traj,
                                         Scalar window) {
  const Scalar t_final = traj.final_state.t;
  if (traj.last_state_change_time > t_final - window) {
    std::ostringstream msg;
    msg << "relay state still changing at t=" << traj.last_state_change_time
        << " inside the trailing window of " << window;
    throw NotStationary(msg.str(),
                        static_cast<double>(traj.last_state_change_time));
  }
  const IntervalSet<Scalar>& a1 = traj.final_state.a;
  return PhenotypePattern<Scalar>{a1, a1.complement(), a1.count()};
}

}  // namespace prd
