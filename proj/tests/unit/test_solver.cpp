#include "prd/solver.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "prd/diagnostics.hpp"

using prd::DensityField;
using prd::InitialData;
using prd::IntervalSet;
using prd::ModelParams;
using prd::RunOptions;
using prd::SystemState;
using Field = DensityField<double>;
using Set = IntervalSet<double>;
using State = SystemState<double>;

namespace {

State reference_state(double v = 1.0, double w = 0.0, Eigen::Index n = 31) {
  return State{0.0, Field::constant(0.1, 0.4, n, 1.0), v, w,
               Set::full(0.1, 0.4)};
}

}  // namespace

TEST_CASE("diffusion keeps constants and the D = 0 case bitwise") {
  const Field c = Field::constant(0.1, 0.4, 65, 2.75);
  CHECK(prd::diffusion_step(c, 1.0, 1e-3).values() == c.values());

  Eigen::VectorXd bumpy(65);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> height(0.0, 2.0);
  for (auto& v : bumpy.reshaped()) v = height(rng);
  const Field u(0.1, 0.4, bumpy);
  CHECK(prd::diffusion_step(u, 0.0, 1e-3).values() == u.values());
}

TEST_CASE("diffusion conserves the trapezoid mass to round-off") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> height(0.0, 4.0);
  Eigen::VectorXd values(129);
  for (auto& v : values.reshaped()) v = height(rng);
  Field u(0.1, 0.4, values);
  const double mass0 = prd::total_mass(u);
  for (int i = 0; i < 200; ++i) {
    u = prd::diffusion_step(u, 1.0, 1e-3);
    CHECK(std::abs(prd::total_mass(u) - mass0) <= 1e-13 * mass0);
  }
}

TEST_CASE("diffusion keeps nonnegative data nonnegative within the dt bound") {
  std::mt19937_64 rng(314);
  std::uniform_real_distribution<double> height(0.0, 5.0);
  const Eigen::Index n = 33;
  const double h = 0.3 / double(n - 1);
  const double dt = h * h / 2.0;  // the documented sufficient bound for D = 1
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd values(n);
    for (auto& v : values.reshaped()) v = height(rng);
    if (trial % 5 == 0) values[trial % n] = 0.0;
    Field u(0.1, 0.4, values);
    for (int s = 0; s < 5; ++s) u = prd::diffusion_step(u, 1.0, dt);
    CHECK(u.min_value() >= 0.0);
  }
}

TEST_CASE("diffusion damps the first cosine mode at the analytic rate") {
  const Eigen::Index n = 257;
  const double x_lo = 0.1, x_hi = 0.4, len = x_hi - x_lo;
  const double dt = 2e-4, d = 1.0;
  const int steps = 250;

  const Eigen::ArrayXd x = Eigen::ArrayXd::LinSpaced(n, x_lo, x_hi);
  const Eigen::VectorXd values =
      (4.0 + ((x - x_lo) * (std::numbers::pi / len)).cos()).matrix();
  Field u(x_lo, x_hi, values);

  const double lambda1 = std::pow(std::numbers::pi / len, 2);
  Field ut = u;
  for (int i = 0; i < steps; ++i) ut = prd::diffusion_step(ut, d, dt);

  const auto amp = [&](const Field& f) {
    return prd::fourier_modes(f, 1)[1];
  };
  const double measured = amp(ut) / amp(u);

  // Continuous-rate oracle, tolerance covers the O(dt^2) + O(h^2) scheme error.
  const double expected = std::exp(-d * lambda1 * dt * steps);
  CHECK(measured == doctest::Approx(expected).epsilon(2e-3));

  // The discrete cosine is an exact eigenvector, so the per-step factor of
  // the scheme is known in closed form.
  const double h = len / double(n - 1);
  const double mu = 2.0 * (1.0 - std::cos(std::numbers::pi * h / len)) / (h * h);
  const double z = d * dt * mu / 2.0;
  const double factor = (1.0 - z) / (1.0 + z);
  CHECK(measured == doctest::Approx(std::pow(factor, steps)).epsilon(1e-10));
}

TEST_CASE("reaction fixed points") {
  SUBCASE("no population, no change") {
    const State s{0.0, Field::constant(0.1, 0.4, 31, 0.0), 3.0, 0.1,
                  Set::full(0.1, 0.4)};
    const auto r = prd::reaction_step(s, s.a, 0.01);
    CHECK(r.u.values() == s.u.values());
    CHECK(r.v == s.v);
  }
  SUBCASE("no nutrients, no reaction") {
    const State s = reference_state(0.0);
    const auto r = prd::reaction_step(s, s.a, 0.01);
    CHECK(r.u.values() == s.u.values());
    CHECK(r.v == 0.0);
  }
}

TEST_CASE("reaction growth matches the hand-computed Euler update") {
  const State s = reference_state();
  const auto r = prd::reaction_step(s, s.a, 0.01);
  // Growth factor 1 + dt (1/2 + w r) v = 1.005 at every sample.
  for (Eigen::Index i = 0; i < r.u.size(); ++i) {
    CHECK(r.u.values()[i] == doctest::Approx(1.005).epsilon(1e-15));
  }
  CHECK(r.v == doctest::Approx(0.9985).epsilon(1e-14));
  // Mass gained by u equals mass lost by v, to round-off.
  const double gained = prd::total_mass(r.u) - prd::total_mass(s.u);
  CHECK(gained + (r.v - s.v) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::abs(gained + (r.v - s.v)) <= 1e-15);
}

TEST_CASE("deviation advance") {
  SUBCASE("zero output freezes w and the state") {
    // Two samples with opposite relay signs and equal weights: P = 0 exactly.
    const Field u = Field::constant(0.1, 0.4, 2, 1.0);
    const State s{0.0, u, 1.0, 0.0, Set(0.1, 0.4, {{0.1, 0.25}})};
    REQUIRE(prd::preisach(s.u, s.a) == 0.0);
    const auto adv = prd::advance_w_and_state(s, 0.1);
    CHECK(adv.w == 0.0);
    CHECK(adv.a == s.a);
  }
  SUBCASE("w = 1/2 is invariant") {
    State s = reference_state(1.0, 0.5);
    for (int i = 0; i < 5; ++i) {
      const auto adv = prd::advance_w_and_state(s, 0.05);
      CHECK(adv.w == 0.5);
      s.w = adv.w;
      s.a = adv.a;
    }
  }
  SUBCASE("explicit Euler move with unit Preisach output") {
    // Domain [0.2, 0.5]: proposed |dw| = 0.025 stays within x_lo / 4.
    const Eigen::Index n = 4;
    const Field u = Field::constant(0.2, 0.5, n, 1.0 / 0.3);
    const State s{0.0, u, 1.0, 0.0, Set::full(0.2, 0.5)};
    const auto adv = prd::advance_w_and_state(s, 0.1);
    CHECK(adv.w == doctest::Approx(-0.025).epsilon(1e-13));
    CHECK(adv.substeps == 1);
    CHECK(adv.clamp_events == 0);
  }
  SUBCASE("oversized moves are sub-split") {
    const Field u = Field::constant(0.1, 0.4, 31, 40.0);
    const State s{0.0, u, 1.0, 0.0, Set::full(0.1, 0.4)};
    const auto adv = prd::advance_w_and_state(s, 0.1);
    CHECK(adv.substeps > 1);
  }
  SUBCASE("clamp events are counted") {
    // Narrow band high up: an empty state drives w upward and a single move
    // within the sub-split budget overshoots 1/2.
    const Field u = Field::constant(0.49, 0.499, 31, 200.0);
    const State s{0.0, u, 1.0, 0.4, Set(0.49, 0.499)};
    const auto adv = prd::advance_w_and_state(s, 0.7);
    CHECK(adv.substeps == 1);
    CHECK(adv.clamp_events == 1);
    CHECK(adv.w == 0.5);
  }
}

TEST_CASE("zero population is a fixed point of the full step") {
  const ModelParams<double> p{0.1, 0.4, 1.0, 31, 1e-2, 1.0};
  const State s{0.0, Field::constant(0.1, 0.4, 31, 0.0), 2.0, 0.2,
                Set::full(0.1, 0.4)};
  const auto r = prd::step(s, p);
  CHECK(r.state.u.values() == s.u.values());
  CHECK(r.state.v == s.v);
  CHECK(r.state.w == s.w);
  CHECK(r.state.a == s.a);
  CHECK(r.state.t == s.t + p.dt);
}

TEST_CASE("one step grows mass, shrinks nutrients, conserves the total") {
  const ModelParams<double> p{0.1, 0.4, 1.0, 257, 1e-3, 1.0};
  const State s = reference_state(1.0, 0.0, 257);
  const double total0 = prd::total_mass(s.u) + s.v;
  const auto r = prd::step(s, p);
  CHECK(prd::total_mass(r.state.u) > prd::total_mass(s.u));
  CHECK(r.state.v < s.v);
  CHECK(std::abs(prd::total_mass(r.state.u) + r.state.v - total0) <=
        1e-14 * total0);
}

TEST_CASE("w decreases monotonically from above the top threshold") {
  const ModelParams<double> p{0.1, 0.4, 1.0, 65, 1e-3, 0.5};
  const InitialData<double> init{Field::constant(0.1, 0.4, 65, 1.0), 1.0, 0.45,
                                 Set::full(0.1, 0.4)};
  const auto traj = prd::run(p, init);
  for (std::size_t i = 1; i < traj.scalars.size(); ++i) {
    CHECK(traj.scalars.w[i] < traj.scalars.w[i - 1]);
  }
  // The relay state stays saturated while w is still above the top threshold.
  for (const auto& snap : traj.snapshots) {
    if (snap.w > 0.4) CHECK(snap.a == Set::full(0.1, 0.4));
  }
  CHECK(traj.monitors.clamp_events == 0);
}

TEST_CASE("run with t_end = 0 returns only the initial snapshot") {
  const ModelParams<double> p{0.1, 0.4, 1.0, 31, 1e-3, 0.0};
  const InitialData<double> init{Field::constant(0.1, 0.4, 31, 1.0), 1.0, 0.0,
                                 Set::full(0.1, 0.4)};
  const auto traj = prd::run(p, init);
  CHECK(traj.snapshots.size() == 1);
  CHECK(traj.scalars.size() == 1);
  CHECK(traj.final_state.t == 0.0);
}

TEST_CASE("physical runs keep v nonincreasing and U nondecreasing") {
  const ModelParams<double> p{0.1, 0.4, 1.0, 65, 1e-3, 2.0};
  const InitialData<double> init{Field::constant(0.1, 0.4, 65, 1.0), 1.0, 0.0,
                                 Set::full(0.1, 0.4)};
  const auto traj = prd::run(p, init, RunOptions{10});
  for (std::size_t i = 1; i < traj.scalars.size(); ++i) {
    CHECK(traj.scalars.v[i] <= traj.scalars.v[i - 1] + 1e-14);
    CHECK(traj.scalars.total[i] >= traj.scalars.total[i - 1] - 1e-14);
  }
  CHECK(traj.monitors.max_abs_residual <= 1e-12);
  CHECK(traj.monitors.positivity_breaches == 0);
  CHECK(traj.monitors.compatibility_breaches == 0);
}

TEST_CASE("runs are deterministic") {
  const ModelParams<double> p{0.1, 0.4, 1.0, 65, 1e-3, 1.0};
  const InitialData<double> init{
      Field(0.1, 0.4, Eigen::VectorXd::LinSpaced(65, 0.5, 2.0)), 1.0, 0.1,
      Set::full(0.1, 0.4)};
  const auto a = prd::run(p, init, RunOptions{7});
  const auto b = prd::run(p, init, RunOptions{7});
  REQUIRE(a.scalars.size() == b.scalars.size());
  for (std::size_t i = 0; i < a.scalars.size(); ++i) {
    CHECK(a.scalars.total[i] == b.scalars.total[i]);
    CHECK(a.scalars.v[i] == b.scalars.v[i]);
    CHECK(a.scalars.w[i] == b.scalars.w[i]);
    CHECK(a.scalars.preisach_out[i] == b.scalars.preisach_out[i]);
  }
  CHECK(a.final_state.u.values() == b.final_state.u.values());
}

TEST_CASE("reaction nutrient loss equals the assembled consumption rate") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> height(0.0, 3.0);
  std::uniform_real_distribution<double> dev(-0.5, 0.5);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd values(33);
    for (auto& v : values.reshaped()) v = height(rng);
    const double w0 = dev(rng);
    prd::IntervalSet<double> a(0.1, 0.4);
    if (w0 >= 0.1) a = a.with_interval(0.1, std::min(w0, 0.4));
    const State s{0.0, Field(0.1, 0.4, values), height(rng), w0, a};
    const double dt = 1e-3;
    const auto r = prd::reaction_step(s, s.a, dt);
    const double expected =
        dt * prd::v_rhs(prd::total_mass(s.u), prd::preisach(s.u, s.a), s.v, s.w);
    CHECK(r.v - s.v == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("strict mode enforces the configured conservation tolerance") {
  const ModelParams<double> p{0.1, 0.4, 1.0, 65, 1e-3, 0.5};
  const InitialData<double> init{Field::constant(0.1, 0.4, 65, 1.0), 1.0, 0.0,
                                 Set::full(0.1, 0.4)};
  RunOptions opts;
  opts.strict = true;
  opts.conservation_tol = 0.0;  // round-off alone must now trip the monitor
  CHECK_THROWS_AS(prd::run(p, init, opts), prd::InvariantBreach);
  opts.conservation_tol = 1e-12;
  CHECK_NOTHROW(prd::run(p, init, opts));
}

TEST_CASE("positivity monitor flags oscillatory diffusion of a spike") {
  // A spike with dt far above h^2 / (2D) makes the midpoint update ring
  // negative; strict physical runs must refuse to continue.
  const Eigen::Index n = 33;
  Eigen::VectorXd spike = Eigen::VectorXd::Zero(n);
  spike[n / 2] = 1.0;
  const ModelParams<double> p{0.1, 0.4, 1.0, n, 0.1, 0.3};
  const InitialData<double> init{Field(0.1, 0.4, spike), 0.0, 0.0,
                                 Set::full(0.1, 0.4)};
  RunOptions opts;
  opts.strict = true;
  CHECK_THROWS_AS(prd::run(p, init, opts), prd::InvariantBreach);

  const auto traj = prd::run(p, init);
  CHECK(traj.monitors.positivity_breaches > 0);
  CHECK(traj.monitors.negative_density_samples > 0);
}

TEST_CASE("strict mode aborts when w has to be clamped") {
  // Oversized time step in a narrow high band forces a clamp on step one.
  const ModelParams<double> p{0.49, 0.499, 1.0, 31, 0.7, 2.1};
  const InitialData<double> init{Field::constant(0.49, 0.499, 31, 200.0), 1.0,
                                 0.4, Set(0.49, 0.499)};
  RunOptions opts;
  opts.strict = true;
  CHECK_THROWS_AS(prd::run(p, init, opts), prd::InvariantBreach);
  CHECK_NOTHROW(prd::run(p, init));
}
