#include "projstg/gates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace projstg {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

double clip01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

void validate_gate_params(const GateParams& params) {
  if (!(params.tau > 0.0)) {
    throw std::invalid_argument("gate tau must be positive");
  }
  if (!params.mu.allFinite()) {
    throw std::invalid_argument("gate mu must be finite");
  }
}

double sample_gate(double mu_d, double tau, Rng& rng) {
  if (!(tau > 0.0)) {
    throw std::invalid_argument("gate tau must be positive");
  }
  return clip01(mu_d + tau * rng.normal());
}

double gate_penalty(const Eigen::VectorXd& mu, double tau) {
  if (!(tau > 0.0)) {
    throw std::invalid_argument("gate tau must be positive");
  }
  double total = 0.0;
  for (Eigen::Index d = 0; d < mu.size(); ++d) {
    total += normal_cdf(mu[d] / tau);
  }
  return total;
}

void exact_gate_marginal(double mu, double tau, double& mean, double& second_moment) {
  // z = clip(mu + tau*s, 0, 1) with s standard normal. The gate sits at 0
  // below a = -mu/tau, at 1 above b = (1-mu)/tau, and follows the truncated
  // Gaussian in between.
  const double a = -mu / tau;
  const double b = (1.0 - mu) / tau;
  const double cdf_a = normal_cdf(a);
  const double cdf_b = normal_cdf(b);
  const double pdf_a = normal_pdf(a);
  const double pdf_b = normal_pdf(b);
  const double mass = cdf_b - cdf_a;

  mean = mu * mass + tau * (pdf_a - pdf_b) + (1.0 - cdf_b);
  second_moment = (1.0 - cdf_b) + mu * mu * mass + 2.0 * mu * tau * (pdf_a - pdf_b) +
                  tau * tau * (mass + a * pdf_a - b * pdf_b);

  mean = clip01(mean);
  // Round-off can push E[z^2] a hair below mean^2 or outside [0,1]; nudge it
  // back so Var(z) >= 0 holds bitwise.
  second_moment = std::min(1.0, std::max(second_moment, mean * mean));
}

GateMoments exact_gate_moments(const GateParams& params) {
  validate_gate_params(params);
  const Eigen::Index dim = params.mu.size();
  GateMoments moments;
  moments.q.resize(dim);
  Eigen::VectorXd m2(dim);
  for (Eigen::Index d = 0; d < dim; ++d) {
    exact_gate_marginal(params.mu[d], params.tau, moments.q[d], m2[d]);
  }
  moments.Q = moments.q * moments.q.transpose();
  moments.Q.diagonal() = m2;
  moments.sample_count = 0;
  return moments;
}

GateMoments mc_gate_moments(const GateParams& params, std::int64_t samples, Rng& rng) {
  validate_gate_params(params);
  if (samples < 1) {
    throw std::invalid_argument("mc_gate_moments: need at least one sample");
  }
  const Eigen::Index dim = params.mu.size();
  GateMoments moments;
  moments.q = Eigen::VectorXd::Zero(dim);
  moments.Q = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd z(dim);
  for (std::int64_t m = 0; m < samples; ++m) {
    for (Eigen::Index d = 0; d < dim; ++d) {
      z[d] = clip01(params.mu[d] + params.tau * rng.normal());
    }
    moments.q += z;
    moments.Q.selfadjointView<Eigen::Lower>().rankUpdate(z);
  }
  const double inv = 1.0 / static_cast<double>(samples);
  moments.q *= inv;
  moments.Q *= inv;
  moments.Q.triangularView<Eigen::StrictlyUpper>() =
      moments.Q.transpose().triangularView<Eigen::StrictlyUpper>();
  moments.sample_count = samples;
  return moments;
}

Eigen::MatrixXd sample_gate_deltas(int count, int dim, double tau, Rng& rng) {
  if (!(tau > 0.0)) {
    throw std::invalid_argument("gate tau must be positive");
  }
  Eigen::MatrixXd deltas(count, dim);
  for (int i = 0; i < count; ++i) {
    for (int d = 0; d < dim; ++d) {
      deltas(i, d) = tau * rng.normal();
    }
  }
  return deltas;
}

}  // namespace projstg
