#pragma once

#include <Eigen/Dense>

#include <cstdint>

#include "projstg/rng.hpp"

namespace projstg {

/// Standard normal CDF, computed through erfc so the tails stay accurate.
double normal_cdf(double x);

/// Standard normal density.
double normal_pdf(double x);

/// Parameters of the stochastic gate vector z_d = clip(mu_d + delta_d, 0, 1)
/// with delta_d ~ N(0, tau^2), independent across coordinates.
struct GateParams {
  Eigen::VectorXd mu;
  double tau = 0.5;
};

/// First and second moments of the gate vector. sample_count > 0 marks a
/// Monte-Carlo estimate over that many gate draws; sample_count == 0 marks
/// the exact closed form.
struct GateMoments {
  Eigen::VectorXd q;  // E[z]
  Eigen::MatrixXd Q;  // E[z z^T]
  std::int64_t sample_count = 0;
};

/// Throws std::invalid_argument on tau <= 0 or non-finite mu.
void validate_gate_params(const GateParams& params);

/// One gate draw: clip(mu_d + delta, 0, 1), delta ~ N(0, tau^2).
double sample_gate(double mu_d, double tau, Rng& rng);

/// Expected number of open gates, sum_d Phi(mu_d / tau). Value in [0, D].
double gate_penalty(const Eigen::VectorXd& mu, double tau);

/// Mean and raw second moment of one clipped-Gaussian gate.
void exact_gate_marginal(double mu, double tau, double& mean, double& second_moment);

/// Closed-form moments of the clipped Gaussian; off-diagonals of Q are
/// q_i * q_j by independence.
GateMoments exact_gate_moments(const GateParams& params);

/// Empirical moments over `samples` i.i.d. gate vectors drawn from `rng`.
/// Throws std::invalid_argument when samples < 1.
GateMoments mc_gate_moments(const GateParams& params, std::int64_t samples, Rng& rng);

/// count x dim matrix of raw gate offsets delta ~ N(0, tau^2), drawn
/// row-major from the stream.
Eigen::MatrixXd sample_gate_deltas(int count, int dim, double tau, Rng& rng);

}  // namespace projstg
