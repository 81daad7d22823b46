#pragma once

// Independent reference computations the test suites check the library
// against. Everything here deliberately avoids the code paths used by the
// implementation: the normal CDF is quadrature instead of erfc, the gated
// quadratic is minimized by plain gradient descent instead of Cholesky, and
// the SCAD scalar problem is solved by grid-plus-ternary search instead of
// the closed-form threshold.

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace oracles {

/// Standard normal CDF by composite Simpson quadrature of the density.
double normal_cdf(double x);

/// Minimizes theta^T A theta - 2 theta^T b by steepest descent with exact
/// line search until the gradient infinity-norm drops below `tol`.
Eigen::VectorXd quadratic_minimizer(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                    double tol = 1e-10, long max_iters = 2000000);

/// Central finite-difference gradient of `fn` at `x`.
Eigen::VectorXd finite_difference_gradient(const std::function<double(const Eigen::VectorXd&)>& fn,
                                           const Eigen::VectorXd& x, double step);

/// Least-squares isotonic (nondecreasing) fit by pool-adjacent-violators.
std::vector<double> isotonic_fit(const std::vector<double>& values);

/// Numerical minimizer of (b - z)^2 + 2 * p_scad(|b|; lambda, a), with the
/// penalty built by quadrature of its textbook derivative.
double scad_scalar_minimizer(double z, double lambda, double a);

}  // namespace oracles
