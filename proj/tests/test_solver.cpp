#include "projstg/solver.hpp"

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "projstg/baselines.hpp"
#include "projstg/errors.hpp"

using namespace projstg;

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, Rng& rng) {
  Eigen::MatrixXd X(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      X(i, j) = rng.normal();
    }
  }
  return X;
}

Eigen::VectorXd random_vector(int size, Rng& rng, double lo, double hi) {
  Eigen::VectorXd v(size);
  for (int i = 0; i < size; ++i) {
    v[i] = lo + (hi - lo) * rng.uniform();
  }
  return v;
}

}  // namespace

TEST_CASE("projected_theta scalar closed form") {
  Eigen::MatrixXd X(3, 1);
  X << 1.0, 2.0, 3.0;
  Eigen::VectorXd y(3);
  y << 1.0, 0.5, -1.0;
  GateMoments moments;
  moments.q = Eigen::VectorXd::Constant(1, 0.6);
  moments.Q = Eigen::MatrixXd::Constant(1, 1, 0.5);
  const double s = X.col(0).squaredNorm();
  const double c = X.col(0).dot(y);
  const Eigen::VectorXd theta = projected_theta(X, y, moments, 1e-10);
  CHECK(theta[0] == doctest::Approx(c * 0.6 / (s * 0.5)).epsilon(1e-12));
}

TEST_CASE("projected_theta with all-open deterministic gates is least squares") {
  Rng rng(31);
  const Eigen::MatrixXd X = random_matrix(30, 5, rng);
  Eigen::VectorXd y = random_vector(30, rng, -2.0, 2.0);
  GateMoments moments;
  moments.q = Eigen::VectorXd::Ones(5);
  moments.Q = Eigen::MatrixXd::Ones(5, 5);
  const Eigen::VectorXd theta = projected_theta(X, y, moments, 1e-10);
  const Eigen::VectorXd ols = X.colPivHouseholderQr().solve(y);
  CHECK((theta - ols).norm() / ols.norm() < 1e-10);
}

TEST_CASE("projected_theta agrees with a gradient-descent minimizer of the quadratic") {
  Rng rng(32);
  const Eigen::MatrixXd X = random_matrix(30, 8, rng);
  const Eigen::VectorXd y = random_vector(30, rng, -1.0, 1.0);
  const Eigen::VectorXd mu = random_vector(8, rng, -1.0, 1.0);
  const GateMoments moments = exact_gate_moments({mu, 0.5});

  const Eigen::VectorXd theta = projected_theta(X, y, moments, 1e-10);
  const Eigen::MatrixXd A = (X.transpose() * X).cwiseProduct(moments.Q);
  const Eigen::VectorXd b = (X.transpose() * y).cwiseProduct(moments.q);
  const Eigen::VectorXd reference = oracles::quadratic_minimizer(A, b, 1e-10);
  CHECK((theta - reference).norm() / reference.norm() < 1e-6);
}

TEST_CASE("projected_theta jitter ladder and failure") {
  // Deterministic all-open gates plus a duplicated column make the system
  // exactly singular.
  Eigen::MatrixXd X(4, 2);
  X << 1, 1, 2, 2, -1, -1, 0.5, 0.5;
  Eigen::VectorXd y(4);
  y << 1, 2, 0, 1;
  GateMoments moments;
  moments.q = Eigen::VectorXd::Ones(2);
  moments.Q = Eigen::MatrixXd::Ones(2, 2);
  CHECK_THROWS_AS(projected_theta(X, y, moments, 0.0), SingularSystemError);
  const Eigen::VectorXd theta = projected_theta(X, y, moments, 1e-10);
  CHECK(theta.allFinite());
}

TEST_CASE("Schur system is positive definite without jitter, underdetermined included") {
  Rng rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = trial % 2 == 0 ? 40 : 25;
    const int d = trial % 2 == 0 ? 64 : 12;
    const Eigen::MatrixXd X = random_matrix(n, d, rng);
    const Eigen::VectorXd mu = random_vector(d, rng, -1.0, 1.5);
    const GateMoments moments = exact_gate_moments({mu, 0.5});
    const Eigen::VectorXd y = random_vector(n, rng, -1.0, 1.0);
    CHECK_NOTHROW(projected_theta(X, y, moments, 0.0));
  }
}

TEST_CASE("mc_risk trivial values") {
  Rng rng(41);
  const Eigen::MatrixXd X = random_matrix(12, 3, rng);
  const Eigen::VectorXd y = random_vector(12, rng, -1.0, 1.0);

  {
    Rng local(1);
    const double v =
        mc_risk(X, y, Eigen::VectorXd::Zero(3), random_vector(3, rng, -1.0, 1.0), 0.5, 0.0, 7,
                local);
    CHECK(v == doctest::Approx(y.squaredNorm() / 12.0).epsilon(1e-12));
  }
  {
    // Noiseless data, theta at truth, gates pinned open, no penalty.
    Eigen::VectorXd beta(3);
    beta << 1.0, -1.0, 0.0;
    const Eigen::VectorXd y0 = X * beta;
    Rng local(2);
    const double v = mc_risk(X, y0, beta, Eigen::VectorXd::Constant(3, 1e3), 0.5, 0.0, 5, local);
    CHECK(v == doctest::Approx(0.0));
  }
  {
    Rng local(3);
    const double v = mc_risk(X, Eigen::VectorXd::Zero(12), Eigen::VectorXd::Zero(3),
                             Eigen::VectorXd::Zero(3), 0.5, 1.0, 4, local);
    CHECK(v == doctest::Approx(1.5).epsilon(1e-15));  // D/2 with Phi(0) = 1/2
  }
}

TEST_CASE("mu_gradient saturated and zero-theta cases") {
  Rng rng(51);
  const Eigen::MatrixXd X = random_matrix(10, 3, rng);
  const Eigen::VectorXd y = random_vector(10, rng, -1.0, 1.0);
  const Eigen::MatrixXd deltas = sample_gate_deltas(6, 3, 0.5, rng);

  {
    // All gates clipped shut: only the (negligible) penalty slope remains.
    const Eigen::VectorXd mu = Eigen::VectorXd::Constant(3, -10.0);
    const Eigen::VectorXd theta = random_vector(3, rng, -1.0, 1.0);
    const Eigen::VectorXd grad = mu_gradient(X, y, theta, mu, 0.5, 0.7, deltas);
    for (int d = 0; d < 3; ++d) {
      CHECK(grad[d] == doctest::Approx(0.7 * normal_pdf(-20.0) / 0.5));
      CHECK(std::abs(grad[d]) < 1e-80);
    }
  }
  {
    const Eigen::VectorXd mu = random_vector(3, rng, 0.0, 1.0);
    const Eigen::VectorXd grad =
        mu_gradient(X, y, Eigen::VectorXd::Zero(3), mu, 0.5, 0.7, deltas);
    for (int d = 0; d < 3; ++d) {
      CHECK(grad[d] == 0.7 * normal_pdf(mu[d] / 0.5) / 0.5);
    }
  }
}

TEST_CASE("mu_gradient matches frozen-noise finite differences") {
  Rng rng(52);
  for (int instance = 0; instance < 5; ++instance) {
    const Eigen::MatrixXd X = random_matrix(20, 4, rng);
    const Eigen::VectorXd y = random_vector(20, rng, -1.0, 1.0);
    const Eigen::VectorXd theta = random_vector(4, rng, -1.5, 1.5);
    const Eigen::VectorXd mu = random_vector(4, rng, -0.2, 1.0);
    const Eigen::MatrixXd deltas = sample_gate_deltas(8, 4, 0.5, rng);

    const Eigen::VectorXd grad = mu_gradient(X, y, theta, mu, 0.5, 0.4, deltas);
    const Eigen::VectorXd fd = oracles::finite_difference_gradient(
        [&](const Eigen::VectorXd& m) { return frozen_risk(X, y, theta, m, 0.5, 0.4, deltas); },
        mu, 1e-5);

    for (int d = 0; d < 4; ++d) {
      bool near_boundary = false;
      for (int l = 0; l < 8; ++l) {
        const double pre = mu[d] + deltas(l, d);
        if (std::abs(pre) < 1e-4 || std::abs(pre - 1.0) < 1e-4) {
          near_boundary = true;
        }
      }
      if (near_boundary) {
        continue;
      }
      CHECK(std::abs(grad[d] - fd[d]) <= 1e-4 * std::max(std::abs(fd[d]), 1e-6));
    }
  }
}

TEST_CASE("theta_gradient matches finite differences and the zero-theta formula") {
  Rng rng(53);
  const Eigen::MatrixXd X = random_matrix(15, 4, rng);
  const Eigen::VectorXd y = random_vector(15, rng, -1.0, 1.0);
  const Eigen::VectorXd mu = random_vector(4, rng, 0.0, 1.0);
  const Eigen::MatrixXd deltas = sample_gate_deltas(6, 4, 0.5, rng);
  const Eigen::VectorXd theta = random_vector(4, rng, -1.0, 1.0);

  const Eigen::VectorXd grad = theta_gradient(X, y, theta, mu, deltas);
  const Eigen::VectorXd fd = oracles::finite_difference_gradient(
      [&](const Eigen::VectorXd& t) { return frozen_risk(X, y, t, mu, 0.5, 0.0, deltas); },
      theta, 1e-6);
  for (int d = 0; d < 4; ++d) {
    CHECK(std::abs(grad[d] - fd[d]) <= 1e-4 * std::max(std::abs(fd[d]), 1e-6));
  }

  // At theta = 0 the gradient is -(2/(N L)) sum_l (X^T y) .* z_l.
  const Eigen::VectorXd at_zero = theta_gradient(X, y, Eigen::VectorXd::Zero(4), mu, deltas);
  Eigen::VectorXd expected = Eigen::VectorXd::Zero(4);
  for (int l = 0; l < 6; ++l) {
    const Eigen::VectorXd z =
        (deltas.row(l).transpose() + mu).cwiseMax(0.0).cwiseMin(1.0);
    expected -= (2.0 / 15.0) * (X.transpose() * y).cwiseProduct(z);
  }
  expected /= 6.0;
  CHECK((at_zero - expected).norm() < 1e-12);
}

TEST_CASE("projection step never increases the exact-moment risk at fixed mu") {
  Rng rng(54);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd X = random_matrix(25, 6, rng);
    const Eigen::VectorXd y = random_vector(25, rng, -2.0, 2.0);
    const Eigen::VectorXd mu = random_vector(6, rng, -1.0, 1.5);
    const Eigen::VectorXd theta0 = random_vector(6, rng, -2.0, 2.0);
    const GateMoments moments = exact_gate_moments({mu, 0.5});

    const double before = exact_penalized_risk(X, y, theta0, mu, 0.5, 0.3);
    const Eigen::VectorXd theta1 = projected_theta(X, y, moments, 1e-10);
    const double after = exact_penalized_risk(X, y, theta1, mu, 0.5, 0.3);
    CHECK(after <= before + 1e-9);
  }
}

TEST_CASE("fit_projected_stg recovers clean supports and matches the subset oracle") {
  int recovered = 0;
  int oracle_agreement = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    Rng rng(1000 + static_cast<std::uint64_t>(t));
    DesignSpec spec{DesignEnsemble::GaussianIID, 100, 8, 0.0};
    const SparseSignal signal = generate_signal(8, 2, rng);
    const LinearDataset data = generate_dataset(spec, signal, 0.0, rng);

    SolverConfig config;
    config.seed = 9000 + static_cast<std::uint64_t>(t);
    const FitResult fit = fit_projected_stg(data, 2, config);
    if (fit.support_hat == signal.support) {
      ++recovered;
    }
    if (fit.support_hat == exhaustive_best_subset(data.X, data.y, 2)) {
      ++oracle_agreement;
    }
  }
  CHECK(recovered >= 98);
  CHECK(oracle_agreement >= 98);
}

TEST_CASE("fit_projected_stg edge cases") {
  {
    // K = D selects everything.
    Rng rng(61);
    DesignSpec spec{DesignEnsemble::GaussianIID, 40, 4, 0.0};
    const SparseSignal signal = generate_signal(4, 2, rng);
    const LinearDataset data = generate_dataset(spec, signal, 0.1, rng);
    SolverConfig config;
    config.max_epochs = 50;
    const FitResult fit = fit_projected_stg(data, 4, config);
    CHECK(fit.support_hat == std::vector<int>{0, 1, 2, 3});
  }
  {
    // One-column design: beta_hat converges to the planted coefficient.
    Rng rng(62);
    const LinearDataset data = semi_synthetic(Eigen::MatrixXd::Ones(50, 1), 1, 0.0, rng);
    SolverConfig config;
    config.seed = 5;
    const FitResult fit = fit_projected_stg(data, 1, config);
    CHECK(std::abs(fit.beta_hat[0] - data.truth->beta[0]) < 1e-2);
  }
}

TEST_CASE("one fit epoch equals the public ops composed by hand") {
  Rng rng(66);
  DesignSpec spec{DesignEnsemble::GaussianIID, 25, 5, 0.0};
  const SparseSignal signal = generate_signal(5, 2, rng);
  const LinearDataset data = generate_dataset(spec, signal, 0.4, rng);

  SolverConfig config;
  config.lambda = 0.15;
  config.seed = 321;
  config.max_epochs = 1;

  const FitResult fit = fit_projected_stg(data, 2, config);

  // Replay the epoch through the public operations, drawing from the same
  // stream in the same order.
  Rng replay(config.seed);
  const Eigen::VectorXd mu0 = Eigen::VectorXd::Constant(5, 0.5);
  const GateMoments moments =
      mc_gate_moments({mu0, config.tau}, config.moment_samples, replay);
  const Eigen::VectorXd theta =
      projected_theta(data.X, data.y, moments, config.ridge_jitter);
  const Eigen::MatrixXd deltas =
      sample_gate_deltas(config.risk_samples, 5, config.tau, replay);
  const double risk =
      frozen_risk(data.X, data.y, theta, mu0, config.tau, config.lambda, deltas);
  const Eigen::VectorXd grad =
      mu_gradient(data.X, data.y, theta, mu0, config.tau, config.lambda, deltas);

  // First Adam step with zero state: mu - lr * g/(|g| + eps*sqrt(1-beta2)).
  Eigen::VectorXd mu1(5);
  for (int d = 0; d < 5; ++d) {
    const double m_hat = (1.0 - config.adam.decay1) * grad[d] / (1.0 - config.adam.decay1);
    const double v_hat =
        (1.0 - config.adam.decay2) * grad[d] * grad[d] / (1.0 - config.adam.decay2);
    mu1[d] = mu0[d] - config.adam.learning_rate * m_hat /
                          (std::sqrt(v_hat) + config.adam.epsilon);
  }

  CHECK((fit.theta - theta).norm() == 0.0);
  CHECK((fit.mu - mu1).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(fit.final_risk == risk);
  CHECK(fit.epochs_run == 1);
}

TEST_CASE("fit is deterministic per seed") {
  Rng rng(63);
  DesignSpec spec{DesignEnsemble::GaussianIID, 30, 6, 0.0};
  const SparseSignal signal = generate_signal(6, 2, rng);
  const LinearDataset data = generate_dataset(spec, signal, 0.5, rng);
  SolverConfig config;
  config.lambda = 0.2;
  config.seed = 424242;
  config.max_epochs = 60;
  const FitResult a = fit_projected_stg(data, 2, config);
  const FitResult b = fit_projected_stg(data, 2, config);
  CHECK(a.beta_hat == b.beta_hat);
  CHECK(a.theta == b.theta);
  CHECK(a.mu == b.mu);
  CHECK(a.support_hat == b.support_hat);
  CHECK(a.epochs_run == b.epochs_run);
  CHECK(a.final_risk == b.final_risk);

  const FitResult c = fit_plain_stg(data, 2, config);
  const FitResult d = fit_plain_stg(data, 2, config);
  CHECK(c.beta_hat == d.beta_hat);
  CHECK(c.mu == d.mu);
}

TEST_CASE("fit_plain_stg tracks the projected variant on clean instances") {
  int agree = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    Rng rng(3000 + static_cast<std::uint64_t>(t));
    DesignSpec spec{DesignEnsemble::GaussianIID, 100, 8, 0.0};
    const SparseSignal signal = generate_signal(8, 2, rng);
    const LinearDataset data = generate_dataset(spec, signal, 0.0, rng);
    SolverConfig config;
    config.seed = 7000 + static_cast<std::uint64_t>(t);
    const FitResult plain = fit_plain_stg(data, 2, config);
    if (plain.support_hat == signal.support) {
      ++agree;
    }
  }
  CHECK(agree >= 90);
}

TEST_CASE("zero learning rate freezes the plain-STG parameters") {
  Rng rng(64);
  DesignSpec spec{DesignEnsemble::GaussianIID, 20, 4, 0.0};
  const SparseSignal signal = generate_signal(4, 1, rng);
  const LinearDataset data = generate_dataset(spec, signal, 0.2, rng);
  SolverConfig config;
  config.adam.learning_rate = 0.0;
  config.max_epochs = 1;
  const FitResult fit = fit_plain_stg(data, 1, config);
  CHECK(fit.theta == Eigen::VectorXd::Zero(4));
  CHECK(fit.mu == Eigen::VectorXd::Constant(4, 0.5));
}

TEST_CASE("runaway steps raise a divergence error carrying the epoch") {
  Rng rng(67);
  DesignSpec spec{DesignEnsemble::GaussianIID, 20, 4, 0.0};
  const SparseSignal signal = generate_signal(4, 1, rng);
  const LinearDataset data = generate_dataset(spec, signal, 0.2, rng);
  SolverConfig config;
  config.adam.learning_rate = 1e200;  // blows theta up on the plain path
  config.max_epochs = 10;
  try {
    fit_plain_stg(data, 1, config);
    FAIL("expected DivergenceError");
  } catch (const DivergenceError& err) {
    CHECK(err.epoch() >= 1);
    CHECK(err.epoch() <= 10);
  }
}

TEST_CASE("solver rejects bad inputs") {
  Rng rng(65);
  DesignSpec spec{DesignEnsemble::GaussianIID, 20, 4, 0.0};
  const SparseSignal signal = generate_signal(4, 1, rng);
  LinearDataset data = generate_dataset(spec, signal, 0.2, rng);
  SolverConfig config;
  CHECK_THROWS_AS(fit_projected_stg(data, 5, config), std::invalid_argument);
  data.X.col(2).setZero();
  CHECK_THROWS_AS(fit_projected_stg(data, 2, config), std::invalid_argument);
}

TEST_CASE("extract_support magnitude and tie rules") {
  Eigen::VectorXd beta(3);
  beta << -3.0, 1.0, 2.0;
  CHECK(extract_support(beta, 2) == std::vector<int>{0, 2});

  Eigen::VectorXd ties(3);
  ties << 1.0, 1.0, 0.0;
  CHECK(extract_support(ties, 1) == std::vector<int>{0});

  CHECK(extract_support(Eigen::VectorXd::Zero(3), 2) == std::vector<int>{0, 1});
  CHECK_THROWS_AS(extract_support(ties, 4), std::invalid_argument);
}
