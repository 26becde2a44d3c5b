// Thomas elimination for diagonally dominant tridiagonal systems.
#pragma once

#include <Eigen/Dense>

#include <stdexcept>

namespace prd {

/// Solves the system with constant interior stencil (lower, diag, upper) and
/// boundary rows (diag, upper0) / (lower_n, diag), the shape produced by the
/// mirrored-ghost Neumann discretization.
template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> solve_neumann_tridiagonal(
    Scalar lower, Scalar diag, Scalar upper, Scalar upper0, Scalar lower_n,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& rhs) {
  const Eigen::Index n = rhs.size();
  if (n < 2) throw std::invalid_argument("tridiagonal solve: need n >= 2");

  Eigen::Vector<Scalar, Eigen::Dynamic> c_prime(n - 1), x(n);
  Scalar beta = diag;
  c_prime[0] = upper0 / beta;
  x[0] = rhs[0] / beta;
  for (Eigen::Index i = 1; i < n; ++i) {
    const Scalar a = (i == n - 1) ? lower_n : lower;
    beta = diag - a * c_prime[i - 1];
    if (i < n - 1) c_prime[i] = upper / beta;
    x[i] = (rhs[i] - a * x[i - 1]) / beta;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i) {
    x[i] -= c_prime[i] * x[i + 1];
  }
  return x;
}

}  // namespace prd
