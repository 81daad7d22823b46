#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "projstg/baselines.hpp"
#include "projstg/linmodel.hpp"
#include "projstg/metrics.hpp"
#include "projstg/solver.hpp"

namespace projstg {

enum class SweepKind { VaryN, VaryK };

enum class Method { ProjSTG, PlainSTG, Lasso, OMP, RandOMP, SCAD };

std::string method_name(Method method);
std::optional<Method> parse_method(const std::string& name);  // case-insensitive
std::string sweep_name(SweepKind sweep);
std::optional<SweepKind> parse_sweep(const std::string& name);

/// 10 logarithmically spaced points in [0.1, 10].
std::vector<double> default_c_grid();

/// How the gate regularizer lambda_N = C * lambda_base is chosen. When
/// override_lambda is set the rule and cross-validation are bypassed and the
/// given value is used everywhere (required for sweeps touching K <= 1 or
/// D - K <= 1, where lambda_base is undefined).
struct LambdaRule {
  std::vector<double> c_grid = default_c_grid();
  int cv_folds = 5;
  bool cv_per_point = true;  // false: select C once, at the first grid point
  std::optional<double> override_lambda{};
};

struct FixedParams {
  int d = 64;
  int k = 10;  // held fixed when sweeping N
  int n = 40;  // held fixed when sweeping K
  double sigma = 0.5;
  DesignEnsemble ensemble = DesignEnsemble::GaussianIID;
  double rho = 0.0;
};

struct ExperimentConfig {
  SweepKind sweep = SweepKind::VaryN;
  std::vector<int> grid;  // N values or K values, strictly increasing
  FixedParams fixed{};
  int trials = 100;
  std::vector<Method> methods{Method::ProjSTG};
  LambdaRule lambda_rule{};
  std::uint64_t master_seed = 0;
  SolverConfig solver{};        // lambda and seed are filled in per trial
  BaselineConfig baselines{};
  int threads = 0;  // 0 = hardware concurrency
};

struct ExperimentResult {
  SweepKind sweep = SweepKind::VaryN;
  std::vector<TrialRecord> records;  // grid-major, trial, then method
  std::vector<CurvePoint> curves;    // grid-major, then method
  int failed_trials = 0;
};

/// Reference regularization level sqrt(2 sigma^2 log(D-K) log(K) / N).
/// Throws std::invalid_argument when K <= 1 or D - K <= 1.
double lambda_base(double sigma, int d, int k, int n);

/// Cross-validated grid search for the constant C in lambda_N = C *
/// lambda_base: same round-robin row folds for every C, held-out squared
/// prediction error of the projected-STG coefficient, ties toward the
/// smaller C. Fits are skipped entirely for a single-entry grid.
double select_c(const LinearDataset& data, int sparsity, const LambdaRule& rule,
                const SolverConfig& solver, std::uint64_t seed);

/// Throws std::invalid_argument describing the first problem found.
void validate_config(const ExperimentConfig& config);

/// Runs the full seeded sweep. Output is a pure function of the config
/// (master_seed included) and independent of thread count. Individual trial
/// failures are recorded (recovered = false, l2_error = inf); more than 10%
/// failures at any grid point raises SweepHealthError.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Fixed 12-significant-digit numeric formatting used by all CSV output.
std::string format_real(double value);

std::string records_csv(const std::vector<TrialRecord>& records, SweepKind sweep);
std::string curves_csv(const std::vector<CurvePoint>& curves);

/// Self-contained SVG success-curve plot: one polyline per method with a
/// distinct dash pattern, shaded 90% bands, axes and a legend.
/// Throws std::invalid_argument on an empty curve set.
std::string plot_svg(const std::vector<CurvePoint>& curves, SweepKind sweep);

void emit_records_csv(const std::vector<TrialRecord>& records, SweepKind sweep,
                      const std::string& path);
void emit_curves_csv(const std::vector<CurvePoint>& curves, const std::string& path);
void emit_plot(const std::vector<CurvePoint>& curves, SweepKind sweep, const std::string& path);

/// Parses the documented JSON experiment schema; unknown keys are rejected.
ExperimentConfig config_from_json(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

}  // namespace projstg
