#include "prd/density_field.hpp"

#include <random>

#include "doctest.h"
#include "prd/sampling.hpp"

using prd::DensityField;
using prd::IntervalSet;
using Field = DensityField<double>;
using Set = IntervalSet<double>;

TEST_CASE("total mass of simple profiles") {
  CHECK(prd::total_mass(Field::constant(0.1, 0.4, 33, 0.0)) == 0.0);

  const Field ones = Field::constant(0.1, 0.4, 33, 1.0);
  CHECK(prd::total_mass(ones) == doctest::Approx(0.3).epsilon(1e-14));

  // Trapezoid quadrature is exact for linear samples.
  Field linear(0.1, 0.4, Eigen::VectorXd::LinSpaced(33, 0.1, 0.4));
  CHECK(prd::total_mass(linear) == doctest::Approx(0.075).epsilon(1e-14));
}

TEST_CASE("preisach output over full and empty states") {
  const Field u(0.1, 0.4, Eigen::VectorXd::LinSpaced(17, 0.5, 2.0));
  const double mass = prd::total_mass(u);
  CHECK(prd::preisach(u, Set::full(0.1, 0.4)) ==
        doctest::Approx(mass).epsilon(1e-14));
  CHECK(prd::preisach(u, Set(0.1, 0.4)) ==
        doctest::Approx(-mass).epsilon(1e-14));
}

TEST_CASE("preisach output splits the integral at the state boundary") {
  // Grid 0.1, 0.2, 0.3, 0.4; the +1 prefix [0.1, 0.25] holds exactly half
  // the trapezoid weight of the constant profile.
  const Field u = Field::constant(0.1, 0.4, 4, 1.0);
  const Set a(0.1, 0.4, {{0.1, 0.25}});
  CHECK(prd::preisach(u, a) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("preisach output is bounded by the total mass") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> height(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd values(21);
    for (auto& v : values.reshaped()) v = height(rng);
    const Field u(0.1, 0.4, values);
    const auto a = prd::sample_compatible_state(rng, 0.1, 0.4, 0.0);
    CHECK(std::abs(prd::preisach(u, a)) <= prd::total_mass(u) + 1e-12);
  }
}

TEST_CASE("preisach boundary resolution error is at most one cell per edge") {
  const Field u = Field::constant(0.1, 0.4, 301, 1.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> cut(0.1, 0.4);
  for (int trial = 0; trial < 100; ++trial) {
    double a = cut(rng), b = cut(rng);
    if (a > b) std::swap(a, b);
    if (a == b) continue;
    const Set s(0.1, 0.4, {{a, b}});
    const double exact = 2.0 * (b - a) - 0.3;  // split integral of u == 1
    CHECK(std::abs(prd::preisach(u, s) - exact) <= 2.0 * 2.0 * u.spacing());
  }
}

TEST_CASE("density field validates its construction") {
  CHECK_THROWS_AS(Field::constant(0.4, 0.1, 8, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Field::constant(0.1, 0.4, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(prd::preisach(Field::constant(0.1, 0.4, 8, 1.0),
                                Set::full(0.0, 0.4)),
                  std::invalid_argument);
}

TEST_CASE("trapezoid weights halve the endpoints") {
  const Field u = Field::constant(0.0, 1.0, 5, 1.0);
  CHECK(u.spacing() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(u.weights()[0] == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(u.weights()[2] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(u.weights()[4] == doctest::Approx(0.125).epsilon(1e-15));
}
