#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "projstg/rng.hpp"

namespace projstg {

enum class DesignEnsemble { GaussianIID, RademacherIID, ToeplitzGaussian };

struct DesignSpec {
  DesignEnsemble ensemble = DesignEnsemble::GaussianIID;
  int rows = 0;      // N
  int dim = 0;       // D
  double rho = 0.0;  // Toeplitz correlation, ToeplitzGaussian only
};

/// K-sparse coefficient vector with nonzero entries in {-1, +1} on a sorted
/// support set.
struct SparseSignal {
  Eigen::VectorXd beta;
  std::vector<int> support;
  int sparsity = 0;  // K
};

struct LinearDataset {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  double sigma = 0.0;
  std::optional<SparseSignal> truth;
};

/// Draws the design matrix. ToeplitzGaussian rows are i.i.d. N(0, Sigma)
/// with Sigma_{l,m} = rho^|l-m|, realized through the Cholesky factor of
/// Sigma. Throws std::invalid_argument on a bad spec and
/// SingularSystemError if the covariance Cholesky fails.
Eigen::MatrixXd generate_design(const DesignSpec& spec, Rng& rng);

/// Uniformly random K-subset support, nonzeros i.i.d. uniform {-1, +1}.
SparseSignal generate_signal(int dim, int sparsity, Rng& rng);

/// y = X beta* + sigma * g with g standard normal; truth attached.
LinearDataset generate_dataset(const DesignSpec& spec, const SparseSignal& signal,
                               double sigma, Rng& rng);

/// Numeric CSV with an optional single header row. `response_column` is a
/// column name (requires a header), a 0-based integer index, or empty for
/// the last column. When
/// `standardize` is set, each predictor column is centered and scaled to
/// unit sample standard deviation (N-1 denominator). Throws LoadError with
/// the offending row/column on parse problems.
LinearDataset load_csv_dataset(const std::string& path, const std::string& response_column,
                               bool standardize);

/// Plants a synthetic K-sparse signal on a real design matrix and draws a
/// fresh response, giving real-data runs a measurable ground truth.
LinearDataset semi_synthetic(const Eigen::MatrixXd& X, int sparsity, double sigma, Rng& rng);

}  // namespace projstg
