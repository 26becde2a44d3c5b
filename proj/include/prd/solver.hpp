// Time integration of the coupled density/nutrient/deviation system with
// hysteresis: Lie splitting of (deviation + relay state) -> reaction ->
// diffusion per step. The pieces are arranged so the two discrete balance
// laws hold to round-off: the density mass gained by the reaction equals the
// nutrient mass lost, and the Crank-Nicolson diffusion update is applied in
// flux form, whose mass change telescopes to zero.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <vector>

#include "prd/density_field.hpp"
#include "prd/errors.hpp"
#include "prd/interval_set.hpp"
#include "prd/model.hpp"
#include "prd/relay.hpp"
#include "prd/tridiagonal.hpp"

namespace prd {

template <typename Scalar>
struct SystemState {
  Scalar t{};
  DensityField<Scalar> u;
  Scalar v{};
  Scalar w{};
  IntervalSet<Scalar> a;
};

/// Per-step monitor counters and the post-step conservation residual.
template <typename Scalar>
struct StepReport {
  int clamp_events{0};
  int w_substeps{1};
  int negative_density{0};   // samples pushed below zero by the reaction
  int negative_after_diffusion{0};
  bool state_changed{false};
  bool compatible{true};
  Scalar conservation_residual{0};  // signed, relative to the initial total
};

template <typename Scalar>
struct StepResult {
  SystemState<Scalar> state;
  StepReport<Scalar> report;
};

/// One Crank-Nicolson step of u_t = D u_xx with zero-flux boundaries
/// (mirrored ghost points). The update is evaluated in flux form from the
/// midpoint profile, so the trapezoid mass of the result telescopes to the
/// input mass exactly; constants and the D = 0 case reproduce the input
/// bitwise. Nonnegative input stays nonnegative for dt <= h^2 / (2D); above
/// that the step can ring on sharp profiles and callers monitor the result.
template <typename Scalar>
DensityField<Scalar> diffusion_step(const DensityField<Scalar>& u, Scalar d,
                                    Scalar dt) {
  using VectorX = Eigen::Vector<Scalar, Eigen::Dynamic>;
  if (!(dt > Scalar(0))) throw std::invalid_argument("diffusion_step: dt must be > 0");
  if (!(d >= Scalar(0))) throw std::invalid_argument("diffusion_step: D must be >= 0");

  const Eigen::Index n = u.size();
  const Scalar h = u.spacing();
  const Scalar c = d * dt / (h * h);
  const VectorX& v = u.values();

  // rhs = c * S u, with S the mirrored-ghost second difference.
  VectorX flux = v.tail(n - 1) - v.head(n - 1);
  VectorX rhs(n);
  rhs[0] = Scalar(2) * c * flux[0];
  rhs.segment(1, n - 2) = c * (flux.tail(n - 2) - flux.head(n - 2));
  rhs[n - 1] = Scalar(-2) * c * flux[n - 2];

  // (I - (c/2) S) delta = rhs, then the final update from the midpoint
  // profile in flux form.
  const Scalar half = c / Scalar(2);
  VectorX delta = solve_neumann_tridiagonal<Scalar>(
      -half, Scalar(1) + c, -half, -c, -c, rhs);

  VectorX mid = v + delta / Scalar(2);
  VectorX mid_flux = mid.tail(n - 1) - mid.head(n - 1);
  VectorX out(n);
  out[0] = v[0] + Scalar(2) * c * mid_flux[0];
  out.segment(1, n - 2) =
      v.segment(1, n - 2) + c * (mid_flux.tail(n - 2) - mid_flux.head(n - 2));
  out[n - 1] = v[n - 1] - Scalar(2) * c * mid_flux[n - 2];
  return u.with_values(std::move(out));
}

template <typename Scalar>
struct WAdvance {
  Scalar w;
  IntervalSet<Scalar> a;
  int clamp_events{0};
  int substeps{1};
};

/// Explicit Euler move of the deviation w plus the exact relay-state update
/// along the move. A single Euler move is monotone, so one state update per
/// substep is exact. When the proposed move exceeds a quarter of the
/// bi-stability half-width x_lo the move is re-integrated in smaller pieces,
/// each re-evaluating the Preisach output against the evolving state, so a
/// step never sweeps more than one threshold band blindly. Clamping to
/// [-1/2, 1/2] is a safety net only; events are counted.
template <typename Scalar>
WAdvance<Scalar> advance_w_and_state(const SystemState<Scalar>& s, Scalar dt) {
  WAdvance<Scalar> out{s.w, s.a};
  const Scalar band = s.a.domain_lo() / Scalar(4);

  const Scalar first_rhs = w_rhs(preisach(s.u, s.a), s.w);
  const Scalar proposed = dt * first_rhs;
  int n_sub = 1;
  if (std::abs(proposed) > band) {
    n_sub = static_cast<int>(std::ceil(std::abs(proposed) / band));
  }
  out.substeps = n_sub;

  const Scalar sub_dt = dt / Scalar(n_sub);
  for (int k = 0; k < n_sub; ++k) {
    const Scalar rhs =
        (k == 0) ? first_rhs : w_rhs(preisach(s.u, out.a), out.w);
    Scalar w_new = out.w + sub_dt * rhs;
    if (w_new > Scalar(0.5)) {
      w_new = Scalar(0.5);
      ++out.clamp_events;
    } else if (w_new < Scalar(-0.5)) {
      w_new = Scalar(-0.5);
      ++out.clamp_events;
    }
    out.a = state_update(out.a, InputSegment<Scalar>{out.w, w_new});
    out.w = w_new;
  }
  return out;
}

template <typename Scalar>
struct ReactionResult {
  DensityField<Scalar> u;
  Scalar v;
  int negative_density{0};
};

/// Explicit Euler reaction substep with the relay field frozen at a_used.
/// The per-sample density gain G_i = dt (1/2 + w r_i) v u_i is integrated
/// with the shared quadrature and subtracted from v, so the discrete total
/// of density plus nutrients is conserved by construction.
template <typename Scalar>
ReactionResult<Scalar> reaction_step(const SystemState<Scalar>& s,
                                     const IntervalSet<Scalar>& a_used,
                                     Scalar dt) {
  using VectorX = Eigen::Vector<Scalar, Eigen::Dynamic>;
  const VectorX r = relay_field<Scalar>(a_used, s.u.grid());
  const VectorX gain =
      ((Scalar(0.5) + s.w * r.array()) * s.u.values().array() * (dt * s.v))
          .matrix();
  ReactionResult<Scalar> out{s.u.with_values(s.u.values() + gain),
                             s.v - s.u.weights().dot(gain)};
  out.negative_density = static_cast<int>(
      ((out.u.values().array() < Scalar(0)) && (s.u.values().array() >= Scalar(0)))
          .count());
  return out;
}

/// One full splitting step:
///   1. advance w and the relay state (uses the pre-step density),
///   2. reaction with the fresh relay state and the pre-step w, v,
///   3. Crank-Nicolson diffusion,
/// then evaluate all monitors on the result.
template <typename Scalar>
StepResult<Scalar> step(const SystemState<Scalar>& s,
                        const ModelParams<Scalar>& p,
                        Scalar initial_total) {
  StepResult<Scalar> res{s, {}};

  const WAdvance<Scalar> wa = advance_w_and_state(s, p.dt);
  res.report.clamp_events = wa.clamp_events;
  res.report.w_substeps = wa.substeps;

  const ReactionResult<Scalar> rx = reaction_step(s, wa.a, p.dt);
  res.report.negative_density = rx.negative_density;

  DensityField<Scalar> u_new = diffusion_step(rx.u, p.diffusion, p.dt);
  res.report.negative_after_diffusion =
      static_cast<int>((u_new.values().array() < Scalar(0)).count());

  res.state = SystemState<Scalar>{s.t + p.dt, std::move(u_new), rx.v, wa.w, wa.a};
  res.report.state_changed = !(res.state.a == s.a);
  res.report.compatible = !compatibility_defect(res.state.a, res.state.w).has_value();
  if (initial_total != Scalar(0)) {
    res.report.conservation_residual =
        (total_mass(res.state.u) + res.state.v - initial_total) / initial_total;
  } else {
    res.report.conservation_residual = total_mass(res.state.u) + res.state.v;
  }
  return res;
}

template <typename Scalar>
StepResult<Scalar> step(const SystemState<Scalar>& s, const ModelParams<Scalar>& p) {
  return step(s, p, total_mass(s.u) + s.v);
}

/// Aggregate monitor summary over a run.
template <typename Scalar>
struct RunMonitors {
  long clamp_events{0};
  long negative_density_samples{0};
  long positivity_breaches{0};
  long compatibility_breaches{0};
  Scalar max_abs_residual{0};
};

template <typename Scalar>
struct ScalarSeries {
  std::vector<Scalar> t, total, v, w, preisach_out, residual;

  std::size_t size() const { return t.size(); }
};

template <typename Scalar>
struct Trajectory {
  ModelParams<Scalar> params;
  Scalar initial_total{};      // U(0) + v(0)
  Scalar initial_mass{};       // U(0)
  ScalarSeries<Scalar> scalars;
  std::vector<SystemState<Scalar>> snapshots;
  SystemState<Scalar> final_state;
  Scalar last_state_change_time{0};
  RunMonitors<Scalar> monitors;
  bool physical{true};
};

struct RunOptions {
  Eigen::Index stride{1};      // snapshot decimation
  bool strict{false};          // throw InvariantBreach on any monitor breach
  double conservation_tol{1e-9};
};

/// Integrates from the initial data until t >= t_end, recording scalar
/// observables every step and state snapshots every `stride` steps (the
/// initial and final states are always kept). Deterministic: identical
/// inputs produce bit-identical trajectories.
template <typename Scalar>
Trajectory<Scalar> run(const ModelParams<Scalar>& p,
                       const InitialData<Scalar>& init,
                       const RunOptions& opts = {}) {
  p.validate();
  init.validate();
  if (opts.stride < 1) throw std::invalid_argument("run: stride must be >= 1");
  if (init.u0.size() != p.n_grid || init.u0.x_lo() != p.x_lo ||
      init.u0.x_hi() != p.x_hi) {
    throw std::invalid_argument("run: u0 grid does not match params");
  }

  SystemState<Scalar> state{Scalar(0), init.u0, init.v0, init.w0, init.a0};
  Trajectory<Scalar> traj{p,
                          total_mass(init.u0) + init.v0,
                          total_mass(init.u0),
                          {},
                          {},
                          state,
                          Scalar(0),
                          {},
                          !init.allow_nonphysical};

  auto record = [&](const SystemState<Scalar>& s, Scalar residual) {
    traj.scalars.t.push_back(s.t);
    traj.scalars.total.push_back(total_mass(s.u));
    traj.scalars.v.push_back(s.v);
    traj.scalars.w.push_back(s.w);
    traj.scalars.preisach_out.push_back(preisach(s.u, s.a));
    traj.scalars.residual.push_back(residual);
  };

  record(state, Scalar(0));
  traj.snapshots.push_back(state);

  long step_index = 0;
  while (Scalar(step_index) * p.dt < p.t_end) {
    StepResult<Scalar> r = step(state, p, traj.initial_total);
    ++step_index;
    state = std::move(r.state);
    state.t = Scalar(step_index) * p.dt;  // avoid accumulated drift

    record(state, r.report.conservation_residual);
    if (step_index % opts.stride == 0) traj.snapshots.push_back(state);

    traj.monitors.clamp_events += r.report.clamp_events;
    if (traj.physical) {
      traj.monitors.negative_density_samples +=
          r.report.negative_density + r.report.negative_after_diffusion;
      if (r.report.negative_after_diffusion > 0) {
        ++traj.monitors.positivity_breaches;
      }
    }
    if (!r.report.compatible) ++traj.monitors.compatibility_breaches;
    traj.monitors.max_abs_residual = std::max(
        traj.monitors.max_abs_residual, std::abs(r.report.conservation_residual));
    if (r.report.state_changed) traj.last_state_change_time = state.t;

    if (opts.strict) {
      std::ostringstream why;
      if (std::abs(r.report.conservation_residual) > opts.conservation_tol) {
        why << "conservation residual " << r.report.conservation_residual;
      } else if (r.report.clamp_events > 0) {
        why << "w clamped " << r.report.clamp_events << " time(s)";
      } else if (traj.physical && (r.report.negative_density > 0 ||
                                   r.report.negative_after_diffusion > 0)) {
        why << "negative density samples";
      } else if (!r.report.compatible) {
        why << "state/input compatibility lost";
      }
      if (!why.str().empty()) {
        why << " at t=" << state.t;
        throw InvariantBreach("run: " + why.str());
      }
    }
  }

  if (traj.snapshots.back().t != state.t) traj.snapshots.push_back(state);
  traj.final_state = state;
  return traj;
}

}  // namespace prd
