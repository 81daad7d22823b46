#include "projstg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace projstg {

SupportScore score_trial(const std::vector<int>& estimated, const std::vector<int>& truth,
                         const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta_star) {
  if (truth.empty()) {
    throw std::invalid_argument("score_trial: truth support must be nonempty");
  }
  if (beta_hat.size() != beta_star.size()) {
    throw std::invalid_argument("score_trial: coefficient vectors differ in length");
  }

  std::vector<int> est_sorted = estimated;
  std::vector<int> truth_sorted = truth;
  std::sort(est_sorted.begin(), est_sorted.end());
  std::sort(truth_sorted.begin(), truth_sorted.end());

  std::vector<int> intersection;
  std::set_intersection(est_sorted.begin(), est_sorted.end(), truth_sorted.begin(),
                        truth_sorted.end(), std::back_inserter(intersection));

  SupportScore score;
  score.true_positives = static_cast<int>(intersection.size());
  score.false_positives = static_cast<int>(est_sorted.size()) - score.true_positives;
  score.false_negatives = static_cast<int>(truth_sorted.size()) - score.true_positives;
  score.tpr = static_cast<double>(score.true_positives) /
              static_cast<double>(score.true_positives + score.false_negatives);
  const int selected = score.true_positives + score.false_positives;
  score.fdr = selected == 0 ? 0.0
                            : static_cast<double>(score.false_positives) /
                                  static_cast<double>(selected);
  score.recovered = est_sorted == truth_sorted;
  score.l2_error = (beta_hat - beta_star).norm();
  return score;
}

namespace {

double interpolated_quantile(const std::vector<double>& sorted, double q) {
  const std::size_t count = sorted.size();
  const double h = q * static_cast<double>(count - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= count) {
    return sorted.back();
  }
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

BootstrapBand bootstrap_band(const std::vector<bool>& outcomes, double level, int resamples,
                             Rng& rng) {
  if (outcomes.empty()) {
    throw std::invalid_argument("bootstrap_band: outcomes must be nonempty");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("bootstrap_band: level must lie in (0, 1)");
  }
  if (resamples < 1) {
    throw std::invalid_argument("bootstrap_band: need at least one resample");
  }

  const int n = static_cast<int>(outcomes.size());
  BootstrapBand band;
  int successes = 0;
  for (bool outcome : outcomes) {
    successes += outcome ? 1 : 0;
  }
  band.rate = static_cast<double>(successes) / static_cast<double>(n);

  std::vector<double> means(static_cast<std::size_t>(resamples));
  for (int b = 0; b < resamples; ++b) {
    int count = 0;
    for (int i = 0; i < n; ++i) {
      count += outcomes[static_cast<std::size_t>(rng.uniform_int(0, n - 1))] ? 1 : 0;
    }
    means[static_cast<std::size_t>(b)] = static_cast<double>(count) / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());

  const double alpha = 1.0 - level;
  band.low = interpolated_quantile(means, alpha / 2.0);
  band.high = interpolated_quantile(means, 1.0 - alpha / 2.0);
  // Quantiles of resample means can land a hair past the point estimate at
  // tiny n; pin the invariant low <= rate <= high.
  band.low = std::min(band.low, band.rate);
  band.high = std::max(band.high, band.rate);
  return band;
}

}  // namespace projstg
