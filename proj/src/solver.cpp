#include "projstg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "projstg/errors.hpp"

namespace projstg {

namespace {

struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  int step_count = 0;

  explicit AdamState(Eigen::Index dim)
      : m(Eigen::VectorXd::Zero(dim)), v(Eigen::VectorXd::Zero(dim)) {}

  void step(Eigen::VectorXd& x, const Eigen::VectorXd& grad, const AdamConfig& cfg) {
    ++step_count;
    m = cfg.decay1 * m + (1.0 - cfg.decay1) * grad;
    v = cfg.decay2 * v + (1.0 - cfg.decay2) * grad.cwiseProduct(grad);
    const double m_corr = 1.0 - std::pow(cfg.decay1, step_count);
    const double v_corr = 1.0 - std::pow(cfg.decay2, step_count);
    x.array() -= cfg.learning_rate * (m.array() / m_corr) /
                 ((v.array() / v_corr).sqrt() + cfg.epsilon);
  }
};

void validate_fit_inputs(const LinearDataset& data, int sparsity, const SolverConfig& config) {
  const Eigen::Index dim = data.X.cols();
  if (data.y.size() != data.X.rows()) {
    throw std::invalid_argument("dataset y length does not match X rows");
  }
  if (sparsity < 1 || sparsity > dim) {
    throw std::invalid_argument("fit sparsity must satisfy 1 <= K <= D");
  }
  for (Eigen::Index j = 0; j < dim; ++j) {
    if (data.X.col(j).squaredNorm() == 0.0) {
      throw std::invalid_argument("fit requires nonzero design columns (column " +
                                  std::to_string(j) + " is zero)");
    }
  }
  if (!(config.tau > 0.0) || config.lambda < 0.0 || config.moment_samples < 1 ||
      config.risk_samples < 1 || config.max_epochs < 1 || config.ridge_jitter < 0.0) {
    throw std::invalid_argument("invalid solver config");
  }
}

Eigen::VectorXd clipped_gates(const Eigen::VectorXd& mu, const Eigen::MatrixXd& deltas,
                              Eigen::Index row) {
  return (deltas.row(row).transpose() + mu).cwiseMax(0.0).cwiseMin(1.0);
}

GateMoments estimate_moments(const Eigen::VectorXd& mu, const SolverConfig& config, Rng& rng) {
  GateParams params{mu, config.tau};
  if (config.moment_mode == MomentMode::Exact) {
    return exact_gate_moments(params);
  }
  return mc_gate_moments(params, config.moment_samples, rng);
}

void check_finite(const Eigen::VectorXd& theta, const Eigen::VectorXd& mu, double risk,
                  int epoch) {
  if (!theta.allFinite() || !mu.allFinite() || !std::isfinite(risk)) {
    throw DivergenceError("solver state became non-finite at epoch " + std::to_string(epoch),
                          epoch);
  }
}

FitResult finalize(int sparsity, double tau, Eigen::VectorXd theta, Eigen::VectorXd mu,
                   int epochs_run, double final_risk) {
  // The final coefficient uses the exact gate mean E[z(mu)] rather than one
  // random draw; at converged, saturated gates the two coincide.
  FitResult result;
  GateMoments moments = exact_gate_moments(GateParams{mu, tau});
  result.beta_hat = theta.cwiseProduct(moments.q);
  result.support_hat = extract_support(result.beta_hat, sparsity);
  result.theta = std::move(theta);
  result.mu = std::move(mu);
  result.epochs_run = epochs_run;
  result.final_risk = final_risk;
  return result;
}

Eigen::VectorXd solve_gated_system(const Eigen::MatrixXd& gram, const Eigen::VectorXd& xty,
                                   const GateMoments& moments, double ridge_jitter) {
  Eigen::MatrixXd system = gram.cwiseProduct(moments.Q);
  const Eigen::VectorXd rhs = xty.cwiseProduct(moments.q);

  Eigen::LLT<Eigen::MatrixXd> llt(system);
  if (llt.info() == Eigen::Success) {
    return llt.solve(rhs);
  }

  // Fully closed gates can zero out entire rows (even the whole matrix), so
  // the jitter scale needs a floor to stay a usable ridge.
  const double scale = std::max(system.diagonal().mean(), 1.0);
  for (double jitter : {ridge_jitter, 10.0 * ridge_jitter}) {
    Eigen::MatrixXd bumped = system;
    bumped.diagonal().array() += jitter * scale;
    llt.compute(bumped);
    if (llt.info() == Eigen::Success) {
      return llt.solve(rhs);
    }
  }
  throw SingularSystemError(
      "gated normal equations are not positive definite (degenerate gates or zero columns)");
}

}  // namespace

Eigen::VectorXd projected_theta(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                const GateMoments& moments, double ridge_jitter) {
  const Eigen::Index dim = X.cols();
  if (moments.q.size() != dim || moments.Q.rows() != dim || moments.Q.cols() != dim) {
    throw std::invalid_argument("gate moments do not match design dim");
  }
  if (y.size() != X.rows()) {
    throw std::invalid_argument("y length does not match X rows");
  }
  return solve_gated_system(X.transpose() * X, X.transpose() * y, moments, ridge_jitter);
}

double frozen_risk(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   const Eigen::VectorXd& theta, const Eigen::VectorXd& mu, double tau,
                   double lambda, const Eigen::MatrixXd& deltas) {
  const Eigen::Index samples = deltas.rows();
  const double n = static_cast<double>(X.rows());
  double data_term = 0.0;
  for (Eigen::Index l = 0; l < samples; ++l) {
    const Eigen::VectorXd z = clipped_gates(mu, deltas, l);
    data_term += (y - X * theta.cwiseProduct(z)).squaredNorm();
  }
  data_term /= n * static_cast<double>(samples);
  return data_term + lambda * gate_penalty(mu, tau);
}

double mc_risk(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
               const Eigen::VectorXd& theta, const Eigen::VectorXd& mu, double tau,
               double lambda, int risk_samples, Rng& rng) {
  if (risk_samples < 1) {
    throw std::invalid_argument("mc_risk: need at least one gate sample");
  }
  const Eigen::MatrixXd deltas =
      sample_gate_deltas(risk_samples, static_cast<int>(mu.size()), tau, rng);
  return frozen_risk(X, y, theta, mu, tau, lambda, deltas);
}

Eigen::VectorXd mu_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& theta, const Eigen::VectorXd& mu,
                            double tau, double lambda, const Eigen::MatrixXd& deltas) {
  const Eigen::Index samples = deltas.rows();
  const Eigen::Index dim = mu.size();
  const double n = static_cast<double>(X.rows());

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index l = 0; l < samples; ++l) {
    const Eigen::VectorXd pre = deltas.row(l).transpose() + mu;
    const Eigen::VectorXd z = pre.cwiseMax(0.0).cwiseMin(1.0);
    const Eigen::VectorXd residual = X * theta.cwiseProduct(z) - y;
    const Eigen::VectorXd correlate = X.transpose() * residual;  // per-column inner products
    for (Eigen::Index d = 0; d < dim; ++d) {
      if (pre[d] > 0.0 && pre[d] < 1.0) {
        grad[d] += (2.0 / n) * theta[d] * correlate[d];
      }
    }
  }
  grad /= static_cast<double>(samples);
  for (Eigen::Index d = 0; d < dim; ++d) {
    grad[d] += lambda * normal_pdf(mu[d] / tau) / tau;
  }
  return grad;
}

Eigen::VectorXd theta_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               const Eigen::VectorXd& theta, const Eigen::VectorXd& mu,
                               const Eigen::MatrixXd& deltas) {
  const Eigen::Index samples = deltas.rows();
  const double n = static_cast<double>(X.rows());
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(theta.size());
  for (Eigen::Index l = 0; l < samples; ++l) {
    const Eigen::VectorXd z = clipped_gates(mu, deltas, l);
    const Eigen::VectorXd residual = X * theta.cwiseProduct(z) - y;
    grad += (2.0 / n) * (X.transpose() * residual).cwiseProduct(z);
  }
  return grad / static_cast<double>(samples);
}

double exact_penalized_risk(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& theta, const Eigen::VectorXd& mu,
                            double tau, double lambda) {
  const GateMoments moments = exact_gate_moments(GateParams{mu, tau});
  const Eigen::MatrixXd system = (X.transpose() * X).cwiseProduct(moments.Q);
  const Eigen::VectorXd rhs = (X.transpose() * y).cwiseProduct(moments.q);
  const double n = static_cast<double>(X.rows());
  const double quadratic =
      theta.dot(system * theta) - 2.0 * theta.dot(rhs) + y.squaredNorm();
  return quadratic / n + lambda * gate_penalty(mu, tau);
}

namespace {

struct EpochEval {
  double risk = 0.0;
  Eigen::VectorXd grad_mu;
  Eigen::VectorXd grad_theta;
};

/// One pass over the L gate samples producing the frozen risk together with
/// its mu (and optionally theta) gradients; algebra identical to frozen_risk
/// / mu_gradient / theta_gradient, just sharing the residuals.
EpochEval evaluate_epoch(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& theta, const Eigen::VectorXd& mu, double tau,
                         double lambda, const Eigen::MatrixXd& deltas, bool want_theta_grad) {
  const Eigen::Index samples = deltas.rows();
  const Eigen::Index dim = mu.size();
  const double n = static_cast<double>(X.rows());

  EpochEval eval;
  eval.grad_mu = Eigen::VectorXd::Zero(dim);
  if (want_theta_grad) {
    eval.grad_theta = Eigen::VectorXd::Zero(dim);
  }

  double data_term = 0.0;
  for (Eigen::Index l = 0; l < samples; ++l) {
    const Eigen::VectorXd pre = deltas.row(l).transpose() + mu;
    const Eigen::VectorXd z = pre.cwiseMax(0.0).cwiseMin(1.0);
    const Eigen::VectorXd residual = X * theta.cwiseProduct(z) - y;
    data_term += residual.squaredNorm();
    const Eigen::VectorXd correlate = X.transpose() * residual;
    for (Eigen::Index d = 0; d < dim; ++d) {
      if (pre[d] > 0.0 && pre[d] < 1.0) {
        eval.grad_mu[d] += theta[d] * correlate[d];
      }
    }
    if (want_theta_grad) {
      eval.grad_theta += correlate.cwiseProduct(z);
    }
  }

  const double scale = 2.0 / (n * static_cast<double>(samples));
  eval.grad_mu *= scale;
  for (Eigen::Index d = 0; d < dim; ++d) {
    eval.grad_mu[d] += lambda * normal_pdf(mu[d] / tau) / tau;
  }
  if (want_theta_grad) {
    eval.grad_theta *= scale;
  }
  eval.risk = data_term / (n * static_cast<double>(samples)) + lambda * gate_penalty(mu, tau);
  return eval;
}

FitResult run_stg_loop(const LinearDataset& data, int sparsity, const SolverConfig& config,
                       bool projected, SolverState* trace) {
  validate_fit_inputs(data, sparsity, config);
  const Eigen::MatrixXd& X = data.X;
  const Eigen::VectorXd& y = data.y;
  const Eigen::Index dim = X.cols();

  const Eigen::MatrixXd gram = X.transpose() * X;
  const Eigen::VectorXd xty = X.transpose() * y;

  Rng rng(config.seed);
  Eigen::VectorXd mu = Eigen::VectorXd::Constant(dim, 0.5);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
  AdamState adam_mu(dim);
  AdamState adam_theta(dim);

  if (trace != nullptr) {
    trace->risk_trace.clear();
  }

  double risk = 0.0;
  int epochs_run = 0;
  int stable_epochs = 0;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    epochs_run = epoch;

    if (projected) {
      const GateMoments moments = estimate_moments(mu, config, rng);
      theta = solve_gated_system(gram, xty, moments, config.ridge_jitter);
    }

    const Eigen::MatrixXd deltas =
        sample_gate_deltas(config.risk_samples, static_cast<int>(dim), config.tau, rng);
    const EpochEval eval = evaluate_epoch(X, y, theta, mu, config.tau, config.lambda, deltas,
                                          /*want_theta_grad=*/!projected);
    risk = eval.risk;
    if (trace != nullptr) {
      trace->risk_trace.emplace_back(epoch, risk);
    }

    // Plain variant: simultaneous descent, so both gradients are taken at
    // the pre-update (theta, mu).
    if (!projected) {
      adam_theta.step(theta, eval.grad_theta, config.adam);
    }

    const Eigen::VectorXd mu_before = mu;
    adam_mu.step(mu, eval.grad_mu, config.adam);
    mu = mu.cwiseMax(-config.mu_cap).cwiseMin(config.mu_cap);

    check_finite(theta, mu, risk, epoch);

    const double max_delta = (mu - mu_before).cwiseAbs().maxCoeff();
    stable_epochs = max_delta < config.stop_tol ? stable_epochs + 1 : 0;
    if (stable_epochs >= config.stop_patience) {
      break;
    }
  }

  if (trace != nullptr) {
    trace->theta = theta;
    trace->mu = mu;
  }
  return finalize(sparsity, config.tau, std::move(theta), std::move(mu), epochs_run, risk);
}

}  // namespace

FitResult fit_projected_stg(const LinearDataset& data, int sparsity, const SolverConfig& config,
                            SolverState* trace) {
  return run_stg_loop(data, sparsity, config, /*projected=*/true, trace);
}

FitResult fit_plain_stg(const LinearDataset& data, int sparsity, const SolverConfig& config,
                        SolverState* trace) {
  return run_stg_loop(data, sparsity, config, /*projected=*/false, trace);
}

std::vector<int> extract_support(const Eigen::VectorXd& beta, int sparsity) {
  const int dim = static_cast<int>(beta.size());
  if (sparsity < 0 || sparsity > dim) {
    throw std::invalid_argument("extract_support: K must satisfy 0 <= K <= D");
  }
  std::vector<int> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + sparsity, order.end(),
                    [&beta](int a, int b) {
                      const double va = std::abs(beta[a]);
                      const double vb = std::abs(beta[b]);
                      if (va != vb) {
                        return va > vb;
                      }
                      return a < b;
                    });
  std::vector<int> support(order.begin(), order.begin() + sparsity);
  std::sort(support.begin(), support.end());
  return support;
}

}  // namespace projstg
