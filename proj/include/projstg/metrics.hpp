#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "projstg/rng.hpp"

namespace projstg {

/// Outcome of one recovery trial.
struct TrialRecord {
  std::string method;
  int n = 0;
  int d = 0;
  int k = 0;
  double sigma = 0.0;
  bool recovered = false;  // exact support match
  double tpr = 0.0;
  double fdr = 0.0;
  double l2_error = 0.0;
  std::uint64_t seed = 0;
};

/// One aggregated point of a success curve with its 90% bootstrap band.
struct CurvePoint {
  std::string method;
  double x = 0.0;  // the swept variable (N or K)
  double success_rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  int trials = 0;
};

struct SupportScore {
  int true_positives = 0;
  int false_positives = 0;
  int false_negatives = 0;
  double tpr = 0.0;
  double fdr = 0.0;  // 0 by convention when nothing is selected
  bool recovered = false;
  double l2_error = 0.0;
};

/// Set-overlap scores between the estimated and true supports plus the
/// coefficient l2 error. Throws std::invalid_argument on an empty truth set
/// (the TPR denominator would vanish).
SupportScore score_trial(const std::vector<int>& estimated, const std::vector<int>& truth,
                         const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta_star);

struct BootstrapBand {
  double rate = 0.0;
  double low = 0.0;
  double high = 0.0;
};

/// Percentile bootstrap of the success rate: `resamples` means of resampled
/// outcome vectors, quantiles at (1-level)/2 and 1-(1-level)/2.
BootstrapBand bootstrap_band(const std::vector<bool>& outcomes, double level, int resamples,
                             Rng& rng);

}  // namespace projstg
