#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

#include "projstg/gates.hpp"
#include "projstg/linmodel.hpp"

namespace projstg {

struct AdamConfig {
  double learning_rate = 0.05;
  double decay1 = 0.9;
  double decay2 = 0.999;
  double epsilon = 1e-8;
};

enum class MomentMode { MonteCarlo, Exact };

struct SolverConfig {
  double lambda = 0.0;
  double tau = 0.5;
  int moment_samples = 20;  // M, gate draws behind q and Q
  int risk_samples = 20;    // L, gate draws behind the risk and its gradient
  int max_epochs = 1000;    // R
  AdamConfig adam{};
  MomentMode moment_mode = MomentMode::MonteCarlo;
  double ridge_jitter = 1e-10;
  std::uint64_t seed = 0;
  // Descent never clips mu (the gates clip); this cap only prevents
  // overflow once Phi and phi have long saturated.
  double mu_cap = 1e3;
  double stop_tol = 1e-6;   // early stop once max|delta mu| stays below this
  int stop_patience = 20;   // ... for this many consecutive epochs
};

struct SolverState {
  Eigen::VectorXd theta;
  Eigen::VectorXd mu;
  std::vector<std::pair<int, double>> risk_trace;  // (epoch, penalized risk V)
};

struct FitResult {
  Eigen::VectorXd beta_hat;       // theta .* E[z(mu)]
  std::vector<int> support_hat;   // sorted indices of the K largest |beta_hat|
  Eigen::VectorXd theta;
  Eigen::VectorXd mu;
  int epochs_run = 0;
  double final_risk = 0.0;
};

/// Closed-form coefficient update: solves (X^T X .* Q) theta = (X^T y) .* q
/// by Cholesky. A failed factorization is retried with
/// ridge_jitter * mean(diag) added to the diagonal, then with 10x that
/// jitter, then raises SingularSystemError.
Eigen::VectorXd projected_theta(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                const GateMoments& moments, double ridge_jitter);

/// Monte-Carlo penalized risk with L fresh gate vectors:
/// (1/(N L)) sum_l ||y - X(theta .* z_l)||^2 + lambda * sum_d Phi(mu_d/tau).
double mc_risk(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
               const Eigen::VectorXd& theta, const Eigen::VectorXd& mu, double tau,
               double lambda, int risk_samples, Rng& rng);

/// Same risk evaluated on stored gate offsets (rows of `deltas`), so it can
/// be differentiated against fixed noise.
double frozen_risk(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   const Eigen::VectorXd& theta, const Eigen::VectorXd& mu, double tau,
                   double lambda, const Eigen::MatrixXd& deltas);

/// Pathwise gradient of the frozen risk in mu. The clip passes gradient only
/// where 0 < mu_d + delta_d < 1; the penalty adds lambda * phi(mu_d/tau)/tau.
Eigen::VectorXd mu_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& theta, const Eigen::VectorXd& mu,
                            double tau, double lambda, const Eigen::MatrixXd& deltas);

/// Gradient of the frozen risk in theta (plain-STG update path).
Eigen::VectorXd theta_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               const Eigen::VectorXd& theta, const Eigen::VectorXd& mu,
                               const Eigen::MatrixXd& deltas);

/// Penalized risk under exact gate moments:
/// [theta^T (X^T X .* Q) theta - 2 theta^T ((X^T y) .* q) + ||y||^2] / N
/// + lambda * sum_d Phi(mu_d/tau).
double exact_penalized_risk(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& theta, const Eigen::VectorXd& mu,
                            double tau, double lambda);

/// Projected stochastic-gate fit: each epoch estimates gate moments, sets
/// theta to the exact minimizer of the gated quadratic, then takes one Adam
/// step on mu along the Monte-Carlo risk gradient. Deterministic per seed.
FitResult fit_projected_stg(const LinearDataset& data, int sparsity, const SolverConfig& config,
                            SolverState* trace = nullptr);

/// Gradient-only variant: theta is updated by an Adam step on the same
/// Monte-Carlo risk instead of the closed-form projection; theta starts at 0.
FitResult fit_plain_stg(const LinearDataset& data, int sparsity, const SolverConfig& config,
                        SolverState* trace = nullptr);

/// Indices of the K largest |beta_d|, ties broken toward the lower index;
/// returned sorted ascending.
std::vector<int> extract_support(const Eigen::VectorXd& beta, int sparsity);

}  // namespace projstg
