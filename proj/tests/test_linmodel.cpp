#include "projstg/linmodel.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "projstg/bench.hpp"
#include "projstg/errors.hpp"
#include "projstg/solver.hpp"

using namespace projstg;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/projstg_test_" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("Toeplitz with rho = 0 reproduces the Gaussian ensemble bitwise") {
  DesignSpec gauss{DesignEnsemble::GaussianIID, 6, 4, 0.0};
  DesignSpec toep{DesignEnsemble::ToeplitzGaussian, 6, 4, 0.0};
  Rng a(42);
  Rng b(42);
  CHECK(generate_design(gauss, a) == generate_design(toep, b));
}

TEST_CASE("Rademacher entries are fair signs") {
  Rng rng(17);
  DesignSpec spec{DesignEnsemble::RademacherIID, 100, 100, 0.0};
  const Eigen::MatrixXd X = generate_design(spec, rng);
  double sum = 0.0;
  for (int i = 0; i < X.rows(); ++i) {
    for (int j = 0; j < X.cols(); ++j) {
      CHECK((X(i, j) == 1.0 || X(i, j) == -1.0));
      sum += X(i, j);
    }
  }
  CHECK(std::abs(sum / 1e4) < 0.05);
}

TEST_CASE("Toeplitz column correlation matches rho") {
  Rng rng(5);
  DesignSpec spec{DesignEnsemble::ToeplitzGaussian, 100000, 2, 0.3};
  const Eigen::MatrixXd X = generate_design(spec, rng);
  const Eigen::VectorXd a = X.col(0).array() - X.col(0).mean();
  const Eigen::VectorXd b = X.col(1).array() - X.col(1).mean();
  const double corr = a.dot(b) / (a.norm() * b.norm());
  CHECK(std::abs(corr - 0.3) < 0.02);
}

TEST_CASE("Toeplitz covariance stays positive definite near rho = 1") {
  Rng rng(6);
  DesignSpec spec{DesignEnsemble::ToeplitzGaussian, 5, 40, 0.95};
  CHECK_NOTHROW(generate_design(spec, rng));
  DesignSpec bad{DesignEnsemble::ToeplitzGaussian, 5, 4, 1.0};
  CHECK_THROWS_AS(generate_design(bad, rng), std::invalid_argument);
}

TEST_CASE("generate_signal places a uniform support with unit magnitudes") {
  Rng rng(8);
  {
    const SparseSignal s = generate_signal(4, 4, rng);
    CHECK(s.support == std::vector<int>{0, 1, 2, 3});
    for (int d = 0; d < 4; ++d) {
      CHECK(std::abs(s.beta[d]) == 1.0);
    }
  }
  {
    const SparseSignal s = generate_signal(5, 1, rng);
    CHECK(s.sparsity == 1);
    CHECK(s.support.size() == 1);
    int nonzeros = 0;
    for (int d = 0; d < 5; ++d) {
      if (s.beta[d] != 0.0) {
        ++nonzeros;
        CHECK(std::abs(s.beta[d]) == 1.0);
      }
    }
    CHECK(nonzeros == 1);
  }
  CHECK_THROWS_AS(generate_signal(3, 4, rng), std::invalid_argument);

  // Inclusion frequency = K/D = 0.4 for every index.
  const int draws = 10000;
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(5);
  for (int t = 0; t < draws; ++t) {
    for (int idx : generate_signal(5, 2, rng).support) {
      counts[idx] += 1.0;
    }
  }
  for (int d = 0; d < 5; ++d) {
    CHECK(std::abs(counts[d] / draws - 0.4) < 0.03);
  }
}

TEST_CASE("generate_dataset composes the linear model") {
  Rng rng(10);
  DesignSpec spec{DesignEnsemble::GaussianIID, 60, 8, 0.0};
  const SparseSignal signal = generate_signal(8, 3, rng);

  {
    Rng local(3);
    const LinearDataset data = generate_dataset(spec, signal, 0.0, local);
    CHECK((data.y - data.X * signal.beta).norm() == 0.0);
    CHECK(data.truth.has_value());
    CHECK(data.truth->support == signal.support);
  }
  {
    // Zero signal leaves pure noise (testing-only edge; K = 0 has no
    // generator path).
    SparseSignal zero;
    zero.beta = Eigen::VectorXd::Zero(8);
    zero.sparsity = 0;
    Rng local(4);
    DesignSpec big{DesignEnsemble::GaussianIID, 1000, 8, 0.0};
    const LinearDataset data = generate_dataset(big, zero, 1.5, local);
    const double sd = std::sqrt(data.y.squaredNorm() / 1000.0);
    CHECK(sd == doctest::Approx(1.5).epsilon(0.2));
  }
  {
    SparseSignal wrong;
    wrong.beta = Eigen::VectorXd::Zero(9);
    Rng local(5);
    CHECK_THROWS_AS(generate_dataset(spec, wrong, 0.5, local), std::invalid_argument);
  }
}

TEST_CASE("dataset generation is bit-reproducible per seed") {
  DesignSpec spec{DesignEnsemble::ToeplitzGaussian, 40, 6, 0.4};
  Rng a(77);
  Rng b(77);
  const SparseSignal sa = generate_signal(6, 2, a);
  const SparseSignal sb = generate_signal(6, 2, b);
  CHECK(sa.beta == sb.beta);
  const LinearDataset da = generate_dataset(spec, sa, 0.7, a);
  const LinearDataset db = generate_dataset(spec, sb, 0.7, b);
  CHECK(da.X == db.X);
  CHECK(da.y == db.y);
}

TEST_CASE("load_csv_dataset parses, selects the response, standardizes") {
  const std::string path =
      write_temp("basic.csv", "a,b,y\n1,0,2\n0,1,3\n1,1,5\n");
  const LinearDataset data = load_csv_dataset(path, "y", false);
  CHECK(data.X.rows() == 3);
  CHECK(data.X.cols() == 2);
  CHECK(data.y[0] == 2.0);
  CHECK(data.y[1] == 3.0);
  CHECK(data.y[2] == 5.0);
  CHECK(data.X(0, 0) == 1.0);
  CHECK(data.X(2, 1) == 1.0);
  CHECK_FALSE(data.truth.has_value());

  const std::string spath = write_temp("std.csv", "x,y\n1,0\n2,0\n3,0\n");
  const LinearDataset std_data = load_csv_dataset(spath, "y", true);
  // Sample std of (1,2,3) is exactly 1, so the column becomes (-1, 0, 1).
  CHECK(std_data.X(0, 0) == doctest::Approx(-1.0));
  CHECK(std_data.X(1, 0) == doctest::Approx(0.0));
  CHECK(std_data.X(2, 0) == doctest::Approx(1.0));
}

TEST_CASE("load_csv_dataset failure modes carry locations") {
  CHECK_THROWS_AS(load_csv_dataset("/tmp/projstg_does_not_exist.csv", "y", false), LoadError);

  const std::string path = write_temp("basic2.csv", "a,b,y\n1,0,2\n0,1,3\n");
  CHECK_THROWS_WITH_AS(load_csv_dataset(path, "zz", false),
                       doctest::Contains("\"zz\""), LoadError);

  const std::string bad_cell = write_temp("badcell.csv", "a,b,y\n1,oops,2\n");
  CHECK_THROWS_WITH_AS(load_csv_dataset(bad_cell, "y", false),
                       doctest::Contains("row 2"), LoadError);

  const std::string bad_arity = write_temp("badarity.csv", "a,b,y\n1,2,3\n1,2\n");
  CHECK_THROWS_WITH_AS(load_csv_dataset(bad_arity, "y", false),
                       doctest::Contains("row 3"), LoadError);

  const std::string constant = write_temp("const.csv", "a,y\n2,1\n2,2\n2,3\n");
  CHECK_THROWS_WITH_AS(load_csv_dataset(constant, "y", true),
                       doctest::Contains("constant"), LoadError);

  // Headerless numeric CSV addressed by index.
  const std::string headerless = write_temp("noheader.csv", "1,4\n2,5\n3,6\n");
  const LinearDataset data = load_csv_dataset(headerless, "1", false);
  CHECK(data.y[0] == 4.0);
  CHECK(data.X(2, 0) == 3.0);
  CHECK_THROWS_AS(load_csv_dataset(headerless, "name", false), LoadError);
}

TEST_CASE("semi_synthetic plants a recoverable truth") {
  Rng rng(12);
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(50, 1);
  const LinearDataset data = semi_synthetic(ones, 1, 0.0, rng);
  REQUIRE(data.truth.has_value());
  CHECK(data.truth->sparsity == 1);
  // y equals the selected column up to sign.
  CHECK((data.y - ones.col(0) * data.truth->beta[0]).norm() == 0.0);

  Rng rng2(13);
  Eigen::MatrixXd X(30, 6);
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 6; ++j) {
      X(i, j) = rng2.normal();
    }
  }
  for (int k = 1; k <= 6; ++k) {
    const LinearDataset d = semi_synthetic(X, k, 0.3, rng2);
    CHECK(d.truth->sparsity == k);
    CHECK(static_cast<int>(d.truth->support.size()) == k);
  }
  CHECK_THROWS_AS(semi_synthetic(X, 7, 0.3, rng2), std::invalid_argument);
}

TEST_CASE("semi-synthetic recovery degrades with the noise level") {
  // Standardized real-like design, replanted truths: the recovery rate at
  // sigma = 0.1 should be at least the rate at sigma = 1.0.
  Rng xrng(14);
  Eigen::MatrixXd X(100, 10);
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 10; ++j) {
      X(i, j) = xrng.normal() * (1.0 + 0.3 * j) + 0.2 * j;
    }
  }
  for (int j = 0; j < 10; ++j) {
    const double mean = X.col(j).mean();
    const double sd = std::sqrt((X.col(j).array() - mean).square().sum() / 99.0);
    X.col(j) = (X.col(j).array() - mean) / sd;
  }

  auto recovery_rate = [&](double sigma) {
    int hits = 0;
    for (int t = 0; t < 50; ++t) {
      Rng rng(4400 + static_cast<std::uint64_t>(t));
      const LinearDataset data = semi_synthetic(X, 2, sigma, rng);
      SolverConfig config;
      config.lambda = lambda_base(sigma, 10, 2, 100);
      config.seed = 4500 + static_cast<std::uint64_t>(t);
      config.max_epochs = 300;
      const FitResult fit = fit_projected_stg(data, 2, config);
      if (fit.support_hat == data.truth->support) {
        ++hits;
      }
    }
    return hits;
  };
  CHECK(recovery_rate(0.1) >= recovery_rate(1.0));
}
