#include "projstg/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "projstg/errors.hpp"
#include "projstg/solver.hpp"

namespace projstg {

namespace {

struct ScaledDesign {
  Eigen::MatrixXd X;       // columns scaled to unit l2/sqrt(N)
  Eigen::VectorXd scales;  // s_j = ||X_j|| / sqrt(N); 0 marks a zero column
};

ScaledDesign scale_columns(const Eigen::MatrixXd& X) {
  const double n = static_cast<double>(X.rows());
  ScaledDesign out{X, Eigen::VectorXd::Zero(X.cols())};
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double s = X.col(j).norm() / std::sqrt(n);
    out.scales[j] = s;
    if (s > 0.0) {
      out.X.col(j) /= s;
    }
  }
  return out;
}

using Threshold = double (*)(double z, double lambda, double a);

double soft_threshold_op(double z, double lambda, double /*a*/) {
  return soft_threshold(z, lambda);
}

CoordinateDescentResult coordinate_descent(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                           double lambda, double a, int max_iters, double tol,
                                           Threshold op, const Eigen::VectorXd& init) {
  if (lambda < 0.0) {
    throw std::invalid_argument("penalty lambda must be nonnegative");
  }
  if (max_iters < 1 || !(tol > 0.0)) {
    throw std::invalid_argument("coordinate descent needs max_iters >= 1 and tol > 0");
  }
  const double n = static_cast<double>(X.rows());
  const Eigen::Index dim = X.cols();

  ScaledDesign scaled = scale_columns(X);
  Eigen::VectorXd beta = init.cwiseProduct(scaled.scales);  // work in the scaled basis
  Eigen::VectorXd residual = y - scaled.X * beta;

  CoordinateDescentResult result;
  for (int sweep = 1; sweep <= max_iters; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (scaled.scales[j] == 0.0) {
        continue;
      }
      const double old = beta[j];
      const double z = old + scaled.X.col(j).dot(residual) / n;
      const double updated = op(z, lambda, a);
      if (updated != old) {
        residual -= (updated - old) * scaled.X.col(j);
        beta[j] = updated;
        max_change = std::max(max_change, std::abs(updated - old));
      }
    }
    result.sweeps = sweep;
    if (max_change < tol) {
      result.converged = true;
      break;
    }
  }

  result.beta = beta;
  for (Eigen::Index j = 0; j < dim; ++j) {
    result.beta[j] = scaled.scales[j] > 0.0 ? beta[j] / scaled.scales[j] : 0.0;
  }
  return result;
}

Eigen::VectorXd active_set_refit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                 const std::vector<int>& active) {
  const Eigen::Index k = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd Xa(X.rows(), k);
  for (Eigen::Index i = 0; i < k; ++i) {
    Xa.col(i) = X.col(active[static_cast<std::size_t>(i)]);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(Xa.transpose() * Xa);
  if (llt.info() != Eigen::Success) {
    throw SingularSystemError("active-set least-squares system is singular");
  }
  const Eigen::VectorXd coef = llt.solve(Xa.transpose() * y);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(X.cols());
  for (Eigen::Index i = 0; i < k; ++i) {
    beta[active[static_cast<std::size_t>(i)]] = coef[i];
  }
  return beta;
}

/// |X_d^T r| / ||X_d|| for every column; zero columns score 0.
Eigen::VectorXd normalized_correlations(const Eigen::MatrixXd& X, const Eigen::VectorXd& residual,
                                        const Eigen::VectorXd& col_norms) {
  Eigen::VectorXd c = (X.transpose() * residual).cwiseAbs();
  for (Eigen::Index d = 0; d < c.size(); ++d) {
    c[d] = col_norms[d] > 0.0 ? c[d] / col_norms[d] : 0.0;
  }
  return c;
}

int argmax_lowest_index(const Eigen::VectorXd& values, const std::vector<bool>& used) {
  int best = -1;
  double best_value = -std::numeric_limits<double>::infinity();
  for (Eigen::Index d = 0; d < values.size(); ++d) {
    if (!used[static_cast<std::size_t>(d)] && values[d] > best_value) {
      best_value = values[d];
      best = static_cast<int>(d);
    }
  }
  return best;
}

void check_sparsity(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int sparsity) {
  if (y.size() != X.rows()) {
    throw std::invalid_argument("y length does not match X rows");
  }
  if (sparsity < 0 || sparsity > X.cols()) {
    throw std::invalid_argument("sparsity must satisfy 0 <= K <= D");
  }
}

}  // namespace

double soft_threshold(double value, double threshold) {
  if (value > threshold) {
    return value - threshold;
  }
  if (value < -threshold) {
    return value + threshold;
  }
  return 0.0;
}

double scad_penalty(double t, double lambda, double a) {
  t = std::abs(t);
  if (t <= lambda) {
    return lambda * t;
  }
  if (t <= a * lambda) {
    return (2.0 * a * lambda * t - t * t - lambda * lambda) / (2.0 * (a - 1.0));
  }
  return (a + 1.0) * lambda * lambda / 2.0;
}

double scad_threshold(double z, double lambda, double a) {
  const double abs_z = std::abs(z);
  if (abs_z <= 2.0 * lambda) {
    return soft_threshold(z, lambda);
  }
  if (abs_z <= a * lambda) {
    return ((a - 1.0) * z - std::copysign(a * lambda, z)) / (a - 2.0);
  }
  return z;
}

CoordinateDescentResult lasso_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                  double lambda, int max_iters, double tol) {
  return coordinate_descent(X, y, lambda, 0.0, max_iters, tol, soft_threshold_op,
                            Eigen::VectorXd::Zero(X.cols()));
}

CoordinateDescentResult scad_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                 double lambda, double a, int max_iters, double tol) {
  if (!(a > 2.0)) {
    throw std::invalid_argument("scad_fit needs a > 2");
  }
  // LASSO warm start keeps the non-convex descent away from poor local minima.
  const CoordinateDescentResult warm = lasso_fit(X, y, lambda, max_iters, tol);
  return coordinate_descent(X, y, lambda, a, max_iters, tol, scad_threshold, warm.beta);
}

GreedyFit omp_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int sparsity) {
  check_sparsity(X, y, sparsity);
  const Eigen::Index dim = X.cols();
  Eigen::VectorXd col_norms(dim);
  for (Eigen::Index d = 0; d < dim; ++d) {
    col_norms[d] = X.col(d).norm();
  }

  GreedyFit fit;
  fit.beta = Eigen::VectorXd::Zero(dim);
  std::vector<bool> used(static_cast<std::size_t>(dim), false);
  Eigen::VectorXd residual = y;

  for (int step = 0; step < sparsity; ++step) {
    const Eigen::VectorXd c = normalized_correlations(X, residual, col_norms);
    const int pick = argmax_lowest_index(c, used);
    used[static_cast<std::size_t>(pick)] = true;
    fit.support.push_back(pick);
    fit.beta = active_set_refit(X, y, fit.support);
    residual = y - X * fit.beta;
  }
  std::sort(fit.support.begin(), fit.support.end());
  return fit;
}

GreedyFit rand_omp_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int sparsity,
                       int runs, double temperature, Rng& rng) {
  check_sparsity(X, y, sparsity);
  if (runs < 1) {
    throw std::invalid_argument("rand_omp_fit needs at least one run");
  }
  if (!(temperature > 0.0)) {
    throw std::invalid_argument("rand_omp_fit temperature must be positive");
  }
  const Eigen::Index dim = X.cols();
  const double n = static_cast<double>(X.rows());
  Eigen::VectorXd col_norms(dim);
  for (Eigen::Index d = 0; d < dim; ++d) {
    col_norms[d] = X.col(d).norm();
  }

  Eigen::VectorXd average = Eigen::VectorXd::Zero(dim);
  for (int run = 0; run < runs; ++run) {
    std::vector<bool> used(static_cast<std::size_t>(dim), false);
    std::vector<int> active;
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd residual = y;

    for (int step = 0; step < sparsity; ++step) {
      const Eigen::VectorXd c = normalized_correlations(X, residual, col_norms);
      const double sigma2 = residual.squaredNorm() / n;
      const double denom = 2.0 * temperature * sigma2;

      int pick;
      if (!(denom > 0.0) || !std::isfinite(denom)) {
        // Residual already zero: every correlation is zero, take the lowest
        // unused index.
        pick = argmax_lowest_index(c, used);
      } else {
        double c2_max = 0.0;
        for (Eigen::Index d = 0; d < dim; ++d) {
          if (!used[static_cast<std::size_t>(d)]) {
            c2_max = std::max(c2_max, c[d] * c[d]);
          }
        }
        Eigen::VectorXd weights = Eigen::VectorXd::Zero(dim);
        double total = 0.0;
        for (Eigen::Index d = 0; d < dim; ++d) {
          if (!used[static_cast<std::size_t>(d)]) {
            weights[d] = std::exp((c[d] * c[d] - c2_max) / denom);
            total += weights[d];
          }
        }
        const double u = rng.uniform() * total;
        double cumulative = 0.0;
        pick = -1;
        for (Eigen::Index d = 0; d < dim; ++d) {
          if (used[static_cast<std::size_t>(d)]) {
            continue;
          }
          cumulative += weights[d];
          pick = static_cast<int>(d);
          if (cumulative > u) {
            break;
          }
        }
      }

      used[static_cast<std::size_t>(pick)] = true;
      active.push_back(pick);
      beta = active_set_refit(X, y, active);
      residual = y - X * beta;
    }
    average += beta;
  }

  GreedyFit fit;
  fit.beta = average / static_cast<double>(runs);
  fit.support = extract_support(fit.beta, sparsity);
  return fit;
}

std::vector<int> exhaustive_best_subset(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                        int sparsity) {
  check_sparsity(X, y, sparsity);
  const int dim = static_cast<int>(X.cols());

  double combinations = 1.0;
  for (int i = 1; i <= sparsity; ++i) {
    combinations *= static_cast<double>(dim - sparsity + i) / static_cast<double>(i);
    if (combinations > 1e6) {
      throw InstanceTooLargeError("exhaustive_best_subset: choose(D, K) exceeds 1e6");
    }
  }

  if (sparsity == 0) {
    return {};
  }

  const Eigen::MatrixXd gram = X.transpose() * X;
  const Eigen::VectorXd xty = X.transpose() * y;
  const double yty = y.squaredNorm();

  std::vector<int> subset(static_cast<std::size_t>(sparsity));
  std::iota(subset.begin(), subset.end(), 0);

  std::vector<int> best = subset;
  double best_residual = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd gram_s(sparsity, sparsity);
  Eigen::VectorXd xty_s(sparsity);

  while (true) {
    for (int i = 0; i < sparsity; ++i) {
      xty_s[i] = xty[subset[static_cast<std::size_t>(i)]];
      for (int j = 0; j < sparsity; ++j) {
        gram_s(i, j) = gram(subset[static_cast<std::size_t>(i)], subset[static_cast<std::size_t>(j)]);
      }
    }

    double residual;
    Eigen::LLT<Eigen::MatrixXd> llt(gram_s);
    if (llt.info() == Eigen::Success) {
      residual = std::max(0.0, yty - xty_s.dot(llt.solve(xty_s)));
    } else {
      // Rank-deficient subset: fall back to a rank-revealing least squares.
      Eigen::MatrixXd Xs(X.rows(), sparsity);
      for (int i = 0; i < sparsity; ++i) {
        Xs.col(i) = X.col(subset[static_cast<std::size_t>(i)]);
      }
      residual = (y - Xs * Xs.completeOrthogonalDecomposition().solve(y)).squaredNorm();
    }

    if (residual < best_residual) {
      best_residual = residual;
      best = subset;
    }

    // Advance to the next combination in lexicographic order.
    int pos = sparsity - 1;
    while (pos >= 0 && subset[static_cast<std::size_t>(pos)] == dim - sparsity + pos) {
      --pos;
    }
    if (pos < 0) {
      break;
    }
    ++subset[static_cast<std::size_t>(pos)];
    for (int i = pos + 1; i < sparsity; ++i) {
      subset[static_cast<std::size_t>(i)] = subset[static_cast<std::size_t>(i - 1)] + 1;
    }
  }
  return best;
}

}  // namespace projstg
