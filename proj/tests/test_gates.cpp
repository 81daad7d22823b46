#include "projstg/gates.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"

using namespace projstg;

namespace {

Eigen::VectorXd vec1(double v) {
  Eigen::VectorXd out(1);
  out << v;
  return out;
}

}  // namespace

TEST_CASE("sample_gate clips the noisy mean into [0, 1]") {
  Rng rng(7);
  // Vanishing noise makes the draw land at mu itself.
  CHECK(sample_gate(0.5, 1e-14, rng) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(sample_gate(2.0, 1e-14, rng) == 1.0);
  CHECK(sample_gate(-3.0, 1e-14, rng) == 0.0);

  for (double mu : {-2.0, -0.3, 0.0, 0.4, 1.0, 3.5}) {
    for (int i = 0; i < 200; ++i) {
      const double z = sample_gate(mu, 0.5, rng);
      CHECK(z >= 0.0);
      CHECK(z <= 1.0);
    }
  }
  CHECK_THROWS_AS(sample_gate(0.5, 0.0, rng), std::invalid_argument);
}

TEST_CASE("gate_penalty counts expected open gates") {
  CHECK(gate_penalty(Eigen::VectorXd::Zero(3), 0.7) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(gate_penalty(vec1(100.0), 0.5) == doctest::Approx(1.0).epsilon(1e-12));

  // Phi(1) against an independent quadrature CDF and its frozen value.
  const double phi1 = gate_penalty(vec1(0.5), 0.5);
  CHECK(phi1 == doctest::Approx(oracles::normal_cdf(1.0)).epsilon(1e-12));
  CHECK(phi1 == doctest::Approx(0.841344746).epsilon(1e-9));
}

TEST_CASE("gate_penalty is monotone nondecreasing in each coordinate") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd mu(4);
    for (int d = 0; d < 4; ++d) {
      mu[d] = 4.0 * rng.uniform() - 2.0;
    }
    const double before = gate_penalty(mu, 0.5);
    const int d = rng.uniform_int(0, 3);
    mu[d] += rng.uniform();
    CHECK(gate_penalty(mu, 0.5) >= before);
  }
}

TEST_CASE("exact_gate_moments limits and invariants") {
  // Degenerate noise: the gate equals mu.
  GateMoments tiny = exact_gate_moments({vec1(0.5), 1e-9});
  CHECK(tiny.q[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(tiny.Q(0, 0) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(tiny.sample_count == 0);

  // Saturated gate.
  GateMoments open = exact_gate_moments({vec1(10.0 * 0.5 + 1.0), 0.5});
  CHECK(open.q[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(open.Q(0, 0) == doctest::Approx(1.0).epsilon(1e-9));

  Rng rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::VectorXd mu(5);
    for (int d = 0; d < 5; ++d) {
      mu[d] = 6.0 * rng.uniform() - 3.0;
    }
    const GateMoments m = exact_gate_moments({mu, 0.5});
    for (int i = 0; i < 5; ++i) {
      CHECK(m.q[i] >= 0.0);
      CHECK(m.q[i] <= 1.0);
      CHECK(m.Q(i, i) >= m.q[i] * m.q[i]);  // Var(z) >= 0
      CHECK(m.Q(i, i) <= 1.0);
      for (int j = 0; j < 5; ++j) {
        if (i != j) {
          CHECK(m.Q(i, j) == m.q[i] * m.q[j]);  // independence, exactly
        }
      }
    }
  }
}

TEST_CASE("Monte-Carlo moments match the closed form") {
  Rng rng(1234);
  const GateParams params{vec1(0.5), 0.5};
  const GateMoments exact = exact_gate_moments(params);
  const GateMoments mc = mc_gate_moments(params, 1000000, rng);
  CHECK(mc.sample_count == 1000000);
  CHECK(std::abs(mc.q[0] - exact.q[0]) < 3e-3);
  CHECK(std::abs(mc.Q(0, 0) - exact.Q(0, 0)) < 3e-3);
}

TEST_CASE("mc_gate_moments trivial cases and errors") {
  {
    // Vanishing noise, single sample: z == mu deterministically.
    Rng rng(5);
    Eigen::VectorXd mu(2);
    mu << 0.5, 0.5;
    const GateMoments m = mc_gate_moments({mu, 1e-14}, 1, rng);
    CHECK(m.q[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(m.q[1] == doctest::Approx(0.5).epsilon(1e-10));
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        CHECK(m.Q(i, j) == doctest::Approx(0.25).epsilon(1e-10));
      }
    }
  }
  {
    // Gate pinned at zero by a far-negative mean.
    Rng rng(6);
    const GateMoments m = mc_gate_moments({vec1(-100.0), 0.5}, 64, rng);
    CHECK(m.q[0] == 0.0);
    CHECK(m.Q(0, 0) == 0.0);
  }
  {
    Rng rng(7);
    CHECK_THROWS_AS(mc_gate_moments({vec1(0.0), 0.5}, 0, rng), std::invalid_argument);
  }
}

TEST_CASE("mc moment scatter shrinks like 1/sqrt(M)") {
  const GateParams params{vec1(0.4), 0.5};
  auto spread = [&](std::int64_t samples, std::uint64_t seed) {
    Rng rng(seed);
    const int reps = 200;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int r = 0; r < reps; ++r) {
      const double q = mc_gate_moments(params, samples, rng).q[0];
      sum += q;
      sum_sq += q * q;
    }
    return sum_sq / reps - (sum / reps) * (sum / reps);
  };
  const double var_small = spread(100, 21);
  const double var_large = spread(10000, 22);
  const double ratio = var_small / var_large;
  CHECK(ratio > 100.0 / 3.0);
  CHECK(ratio < 100.0 * 3.0);
}

TEST_CASE("gate moments are deterministic per stream seed") {
  Eigen::VectorXd mu(3);
  mu << -0.5, 0.2, 1.4;
  Rng a(99);
  Rng b(99);
  const GateMoments ma = mc_gate_moments({mu, 0.5}, 50, a);
  const GateMoments mb = mc_gate_moments({mu, 0.5}, 50, b);
  CHECK(ma.q == mb.q);
  CHECK(ma.Q == mb.Q);
  CHECK(ma.Q == ma.Q.transpose().eval());
  for (int i = 0; i < 3; ++i) {
    CHECK(ma.Q(i, i) >= ma.q[i] * ma.q[i]);
    for (int j = 0; j < 3; ++j) {
      CHECK(ma.Q(i, j) >= 0.0);
      CHECK(ma.Q(i, j) <= 1.0);
    }
  }
}

TEST_CASE("gate parameter validation") {
  CHECK_THROWS_AS(exact_gate_moments({vec1(0.0), -1.0}), std::invalid_argument);
  Eigen::VectorXd bad(1);
  bad << std::nan("");
  CHECK_THROWS_AS(exact_gate_moments({bad, 0.5}), std::invalid_argument);
}
