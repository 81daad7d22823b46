#include "projstg/linmodel.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "projstg/errors.hpp"

namespace projstg {

namespace {

void validate_spec(const DesignSpec& spec) {
  if (spec.rows < 1 || spec.dim < 1) {
    throw std::invalid_argument("design spec needs rows >= 1 and dim >= 1");
  }
  if (spec.rho < 0.0 || spec.rho >= 1.0) {
    throw std::invalid_argument("design spec rho must lie in [0, 1)");
  }
}

Eigen::MatrixXd gaussian_iid(int rows, int dim, Rng& rng) {
  Eigen::MatrixXd X(rows, dim);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < dim; ++j) {
      X(i, j) = rng.normal();
    }
  }
  return X;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') {
    cells.emplace_back();
  }
  return cells;
}

bool parse_double(const std::string& text, double& out) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  out = std::strtod(begin, &end);
  if (end == begin || errno == ERANGE) {
    return false;
  }
  while (*end == ' ' || *end == '\t' || *end == '\r') {
    ++end;
  }
  return *end == '\0';
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) {
    return "";
  }
  return s.substr(b, e - b + 1);
}

}  // namespace

Eigen::MatrixXd generate_design(const DesignSpec& spec, Rng& rng) {
  validate_spec(spec);
  switch (spec.ensemble) {
    case DesignEnsemble::GaussianIID:
      return gaussian_iid(spec.rows, spec.dim, rng);
    case DesignEnsemble::RademacherIID: {
      Eigen::MatrixXd X(spec.rows, spec.dim);
      for (int i = 0; i < spec.rows; ++i) {
        for (int j = 0; j < spec.dim; ++j) {
          X(i, j) = rng.uniform() < 0.5 ? -1.0 : 1.0;
        }
      }
      return X;
    }
    case DesignEnsemble::ToeplitzGaussian: {
      Eigen::MatrixXd sigma(spec.dim, spec.dim);
      for (int l = 0; l < spec.dim; ++l) {
        for (int m = 0; m < spec.dim; ++m) {
          sigma(l, m) = std::pow(spec.rho, std::abs(l - m));
        }
      }
      Eigen::LLT<Eigen::MatrixXd> llt(sigma);
      if (llt.info() != Eigen::Success) {
        throw SingularSystemError("Toeplitz covariance is not positive definite");
      }
      Eigen::MatrixXd G = gaussian_iid(spec.rows, spec.dim, rng);
      return G * llt.matrixL().transpose();
    }
  }
  throw std::invalid_argument("unknown design ensemble");
}

SparseSignal generate_signal(int dim, int sparsity, Rng& rng) {
  if (sparsity < 1 || sparsity > dim) {
    throw std::invalid_argument("signal sparsity must satisfy 1 <= K <= D");
  }
  // Partial Fisher-Yates gives a uniformly random K-subset.
  std::vector<int> indices(static_cast<std::size_t>(dim));
  std::iota(indices.begin(), indices.end(), 0);
  for (int k = 0; k < sparsity; ++k) {
    const int swap = rng.uniform_int(k, dim - 1);
    std::swap(indices[static_cast<std::size_t>(k)], indices[static_cast<std::size_t>(swap)]);
  }

  SparseSignal signal;
  signal.sparsity = sparsity;
  signal.support.assign(indices.begin(), indices.begin() + sparsity);
  std::sort(signal.support.begin(), signal.support.end());
  signal.beta = Eigen::VectorXd::Zero(dim);
  for (int idx : signal.support) {
    signal.beta[idx] = rng.uniform() < 0.5 ? -1.0 : 1.0;
  }
  return signal;
}

LinearDataset generate_dataset(const DesignSpec& spec, const SparseSignal& signal,
                               double sigma, Rng& rng) {
  if (sigma < 0.0) {
    throw std::invalid_argument("sigma must be nonnegative");
  }
  if (signal.beta.size() != spec.dim) {
    throw std::invalid_argument("signal length does not match design dim");
  }
  LinearDataset data;
  data.X = generate_design(spec, rng);
  data.y = data.X * signal.beta;
  if (sigma > 0.0) {
    for (int i = 0; i < spec.rows; ++i) {
      data.y[i] += sigma * rng.normal();
    }
  }
  data.sigma = sigma;
  data.truth = signal;
  return data;
}

LinearDataset load_csv_dataset(const std::string& path, const std::string& response_column,
                               bool standardize) {
  std::ifstream in(path);
  if (!in) {
    throw LoadError("cannot open dataset file: " + path);
  }

  std::vector<std::vector<double>> rows;
  std::vector<std::string> header;
  bool has_header = false;
  std::string line;
  std::size_t line_no = 0;
  std::size_t arity = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    auto cells = split_line(line);
    if (rows.empty() && header.empty()) {
      // First non-empty line: header iff any cell fails to parse as a number.
      bool all_numeric = true;
      double v;
      for (const auto& cell : cells) {
        if (!parse_double(trim(cell), v)) {
          all_numeric = false;
          break;
        }
      }
      arity = cells.size();
      if (!all_numeric) {
        has_header = true;
        header.reserve(cells.size());
        for (const auto& cell : cells) {
          header.push_back(trim(cell));
        }
        continue;
      }
    }
    if (cells.size() != arity) {
      throw LoadError(path + ": row " + std::to_string(line_no) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(arity));
    }
    std::vector<double> parsed(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!parse_double(trim(cells[c]), parsed[c])) {
        throw LoadError(path + ": non-numeric cell at row " + std::to_string(line_no) +
                        ", column " + std::to_string(c + 1));
      }
    }
    rows.push_back(std::move(parsed));
  }

  if (rows.empty()) {
    throw LoadError(path + ": no data rows");
  }

  // Resolve the response column: empty means the last column, a bare integer
  // is a 0-based index, anything else is looked up in the header.
  std::size_t response_idx = arity - 1;
  const std::string wanted = trim(response_column);
  bool is_index = !wanted.empty() &&
                  std::all_of(wanted.begin(), wanted.end(), [](char c) { return c >= '0' && c <= '9'; });
  if (wanted.empty()) {
    // keep the default
  } else if (is_index) {
    response_idx = static_cast<std::size_t>(std::stoul(wanted));
    if (response_idx >= arity) {
      throw LoadError(path + ": response column index " + wanted + " out of range (" +
                      std::to_string(arity) + " columns)");
    }
  } else {
    if (!has_header) {
      throw LoadError(path + ": response column \"" + wanted + "\" needs a header row");
    }
    auto it = std::find(header.begin(), header.end(), wanted);
    if (it == header.end()) {
      throw LoadError(path + ": response column \"" + wanted + "\" not found in header");
    }
    response_idx = static_cast<std::size_t>(it - header.begin());
  }

  const int n = static_cast<int>(rows.size());
  const int d = static_cast<int>(arity) - 1;
  if (d < 1) {
    throw LoadError(path + ": need at least one predictor column");
  }

  LinearDataset data;
  data.X.resize(n, d);
  data.y.resize(n);
  for (int i = 0; i < n; ++i) {
    int col = 0;
    for (std::size_t c = 0; c < arity; ++c) {
      if (c == response_idx) {
        data.y[i] = rows[static_cast<std::size_t>(i)][c];
      } else {
        data.X(i, col++) = rows[static_cast<std::size_t>(i)][c];
      }
    }
  }

  if (standardize) {
    if (n < 2) {
      throw LoadError(path + ": standardization needs at least two rows");
    }
    for (int j = 0; j < d; ++j) {
      const double mean = data.X.col(j).mean();
      const double ss = (data.X.col(j).array() - mean).square().sum();
      const double stddev = std::sqrt(ss / (n - 1));
      if (!(stddev > 0.0)) {
        throw LoadError(path + ": predictor column " + std::to_string(j + 1) +
                        " is constant; cannot standardize");
      }
      data.X.col(j) = (data.X.col(j).array() - mean) / stddev;
    }
  }
  return data;
}

LinearDataset semi_synthetic(const Eigen::MatrixXd& X, int sparsity, double sigma, Rng& rng) {
  if (sparsity < 1 || sparsity > X.cols()) {
    throw std::invalid_argument("semi_synthetic sparsity must satisfy 1 <= K <= D");
  }
  if (sigma < 0.0) {
    throw std::invalid_argument("sigma must be nonnegative");
  }
  SparseSignal signal = generate_signal(static_cast<int>(X.cols()), sparsity, rng);
  LinearDataset data;
  data.X = X;
  data.y = X * signal.beta;
  if (sigma > 0.0) {
    for (Eigen::Index i = 0; i < data.y.size(); ++i) {
      data.y[i] += sigma * rng.normal();
    }
  }
  data.sigma = sigma;
  data.truth = std::move(signal);
  return data;
}

}  // namespace projstg
