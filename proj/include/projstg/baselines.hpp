#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "projstg/rng.hpp"

namespace projstg {

struct LassoConfig {
  double lambda = 0.0;
  int max_iters = 1000;
  double tol = 1e-8;
};

struct ScadConfig {
  double lambda = 0.0;
  double a = 3.7;
  int max_iters = 1000;
  double tol = 1e-8;
};

struct RandOmpConfig {
  int runs = 10;          // J independent randomized passes
  double temperature = 1.0;
};

struct BaselineConfig {
  LassoConfig lasso{};
  ScadConfig scad{};
  RandOmpConfig rand_omp{};
  std::uint64_t seed = 0;
};

/// Coefficients plus convergence diagnostics for the coordinate-descent
/// solvers. Exhausting max_iters is not an error; converged just stays false.
struct CoordinateDescentResult {
  Eigen::VectorXd beta;
  bool converged = false;
  int sweeps = 0;
};

struct GreedyFit {
  Eigen::VectorXd beta;
  std::vector<int> support;  // sorted ascending
};

double soft_threshold(double value, double threshold);

/// Standard SCAD penalty: linear up to lambda, quadratic blend to a*lambda,
/// constant beyond.
double scad_penalty(double t, double lambda, double a);

/// Minimizer of 0.5*(b - z)^2 + scad_penalty(|b|, lambda, a).
double scad_threshold(double z, double lambda, double a);

/// Minimizes (1/N)||y - X beta||^2 + 2*lambda*||beta||_1 by cyclic coordinate
/// descent with soft-thresholding. Columns are scaled to unit l2/sqrt(N)
/// internally and the coefficients are unscaled on return.
CoordinateDescentResult lasso_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                  double lambda, int max_iters = 1000, double tol = 1e-8);

/// Minimizes (1/N)||y - X beta||^2 + 2*sum_d scad_penalty(|beta_d|) by cyclic
/// coordinate descent with the SCAD thresholding operator, initialized at the
/// LASSO solution. The penalty enters with the same factor-of-2 placement as
/// lasso_fit, so the orthonormal-design thresholds come out in the classical
/// three-region form.
CoordinateDescentResult scad_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                 double lambda, double a = 3.7, int max_iters = 1000,
                                 double tol = 1e-8);

/// Greedy selection of the column with the largest normalized residual
/// correlation (ties toward the lower index), least-squares refit on the
/// active set after every step, K steps total.
GreedyFit omp_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int sparsity);

/// J randomized-greedy passes where each step samples the next atom with
/// probability proportional to exp(c_d^2 / (2 * temperature * sigma2)), c_d
/// the normalized residual correlation and sigma2 the current residual
/// variance; coefficient vectors are averaged across passes and the support
/// is the top-K magnitudes of the average.
GreedyFit rand_omp_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int sparsity,
                       int runs, double temperature, Rng& rng);

/// Brute-force minimizer of the residual over all K-subsets (ties go to the
/// lexicographically smallest subset). Guarded: throws InstanceTooLargeError
/// when choose(D, K) exceeds 1e6.
std::vector<int> exhaustive_best_subset(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                        int sparsity);

}  // namespace projstg
