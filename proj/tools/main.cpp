// Command-line front end: seeded benchmark sweeps, single-dataset fits,
// cross-validation of the regularization constant, and the exhaustive
// subset oracle.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 sweep health
// error (too many failed trials), 4 I/O error.

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "projstg/baselines.hpp"
#include "projstg/bench.hpp"
#include "projstg/errors.hpp"
#include "projstg/linmodel.hpp"
#include "projstg/metrics.hpp"
#include "projstg/solver.hpp"

namespace {

using namespace projstg;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSweepHealth = 3;
constexpr int kExitIo = 4;

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string out_dir = ".";
  std::string config_path;
};

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") {
    return name;
  }
  return dir.back() == '/' ? dir + name : dir + "/" + name;
}

int run_sweep(const GlobalOptions& global) {
  if (global.config_path.empty()) {
    std::cerr << "sweep: --config is required\n";
    return kExitConfig;
  }
  ExperimentConfig config = load_config(global.config_path);
  if (global.seed) {
    config.master_seed = *global.seed;
  }
  if (global.threads > 0) {
    config.threads = global.threads;
  }

  const ExperimentResult result = run_experiment(config);
  const std::string records_path = join_path(global.out_dir, "records.csv");
  const std::string curves_path = join_path(global.out_dir, "curves.csv");
  const std::string plot_path = join_path(global.out_dir, "curves.svg");
  emit_records_csv(result.records, result.sweep, records_path);
  emit_curves_csv(result.curves, curves_path);
  emit_plot(result.curves, result.sweep, plot_path);
  std::cout << "wrote " << records_path << ", " << curves_path << ", " << plot_path << "\n";
  if (result.failed_trials > 0) {
    std::cout << result.failed_trials << " trial(s) failed; see stderr\n";
  }
  return kExitOk;
}

struct FitOptions {
  std::string data_path;
  std::string response;
  bool standardize = false;
  int sparsity = 0;
  std::string method = "ProjSTG";
  std::optional<double> lambda;
  std::optional<double> sigma;
  bool plant = false;  // semi-synthetic ground truth
};

double resolve_lambda(const FitOptions& opt, int d, int n) {
  if (opt.lambda) {
    return *opt.lambda;
  }
  if (!opt.sigma) {
    throw std::invalid_argument(
        "need --lambda, or --sigma so the lambda rule can be applied");
  }
  return lambda_base(*opt.sigma, d, opt.sparsity, n);
}

int run_fit(const GlobalOptions& global, const FitOptions& opt) {
  const auto method = parse_method(opt.method);
  if (!method) {
    std::cerr << "fit: unknown method \"" << opt.method << "\"\n";
    return kExitConfig;
  }

  LinearDataset data = load_csv_dataset(opt.data_path, opt.response, opt.standardize);
  const std::uint64_t seed = global.seed.value_or(0);
  if (opt.plant) {
    if (!opt.sigma) {
      throw std::invalid_argument("--semi-synthetic needs --sigma");
    }
    Rng rng(derive_seed(seed, "plant"));
    data = semi_synthetic(data.X, opt.sparsity, *opt.sigma, rng);
  }

  const int n = static_cast<int>(data.X.rows());
  const int d = static_cast<int>(data.X.cols());

  Eigen::VectorXd beta_hat;
  std::vector<int> support;
  switch (*method) {
    case Method::ProjSTG:
    case Method::PlainSTG: {
      SolverConfig config;
      config.lambda = resolve_lambda(opt, d, n);
      config.seed = derive_seed(seed, "solver");
      const FitResult fit = *method == Method::ProjSTG
                                ? fit_projected_stg(data, opt.sparsity, config)
                                : fit_plain_stg(data, opt.sparsity, config);
      beta_hat = fit.beta_hat;
      support = fit.support_hat;
      break;
    }
    case Method::Lasso: {
      beta_hat = lasso_fit(data.X, data.y, resolve_lambda(opt, d, n)).beta;
      support = extract_support(beta_hat, opt.sparsity);
      break;
    }
    case Method::OMP: {
      const GreedyFit fit = omp_fit(data.X, data.y, opt.sparsity);
      beta_hat = fit.beta;
      support = fit.support;
      break;
    }
    case Method::RandOMP: {
      Rng rng(derive_seed(seed, "randomp"));
      const GreedyFit fit = rand_omp_fit(data.X, data.y, opt.sparsity, 10, 1.0, rng);
      beta_hat = fit.beta;
      support = fit.support;
      break;
    }
    case Method::SCAD: {
      beta_hat = scad_fit(data.X, data.y, resolve_lambda(opt, d, n)).beta;
      support = extract_support(beta_hat, opt.sparsity);
      break;
    }
  }

  std::string csv = "index,beta_hat,selected\n";
  std::vector<bool> selected(static_cast<std::size_t>(d), false);
  for (int idx : support) {
    selected[static_cast<std::size_t>(idx)] = true;
  }
  for (int j = 0; j < d; ++j) {
    csv += std::to_string(j) + "," + format_real(beta_hat[j]) + "," +
           (selected[static_cast<std::size_t>(j)] ? "1" : "0") + "\n";
  }
  const std::string out_path = join_path(global.out_dir, "fit.csv");
  {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      throw IoError("cannot open for writing: " + out_path);
    }
    out << csv;
  }

  std::cout << "support:";
  for (int idx : support) {
    std::cout << ' ' << idx;
  }
  std::cout << "\nwrote " << out_path << "\n";

  if (data.truth) {
    const SupportScore score =
        score_trial(support, data.truth->support, beta_hat, data.truth->beta);
    std::cout << "planted truth: recovered=" << (score.recovered ? 1 : 0)
              << " tpr=" << format_real(score.tpr) << " fdr=" << format_real(score.fdr)
              << " l2_error=" << format_real(score.l2_error) << "\n";
  }
  return kExitOk;
}

struct CvOptions {
  std::string data_path;
  std::string response;
  bool standardize = false;
  int sparsity = 0;
  double sigma = 0.0;
  int folds = 5;
  std::vector<double> c_grid;
};

int run_cv(const GlobalOptions& global, const CvOptions& opt) {
  LinearDataset data = load_csv_dataset(opt.data_path, opt.response, opt.standardize);
  data.sigma = opt.sigma;
  LambdaRule rule;
  if (!opt.c_grid.empty()) {
    rule.c_grid = opt.c_grid;
  }
  rule.cv_folds = opt.folds;
  SolverConfig solver;
  const double c = select_c(data, opt.sparsity, rule, solver, global.seed.value_or(0));
  std::cout << format_real(c) << "\n";
  return kExitOk;
}

struct OracleOptions {
  std::string data_path;
  std::string response;
  bool standardize = false;
  int sparsity = 0;
};

int run_oracle(const OracleOptions& opt) {
  const LinearDataset data = load_csv_dataset(opt.data_path, opt.response, opt.standardize);
  const std::vector<int> support = exhaustive_best_subset(data.X, data.y, opt.sparsity);
  for (std::size_t i = 0; i < support.size(); ++i) {
    std::cout << (i > 0 ? "," : "") << support[i];
  }
  std::cout << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse support recovery with projected stochastic gates"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Master seed override");
  app.add_option("--threads", global.threads, "Worker threads (0 = all cores)");
  app.add_option("--out-dir", global.out_dir, "Output directory");
  app.add_option("--config", global.config_path, "JSON experiment config");

  auto* sweep = app.add_subcommand("sweep", "Run a seeded benchmark sweep from a JSON config");

  FitOptions fit_opt;
  auto* fit = app.add_subcommand("fit", "Fit one method on a CSV dataset");
  fit->add_option("--data", fit_opt.data_path, "CSV dataset path")->required();
  fit->add_option("--response", fit_opt.response,
                  "Response column (name or 0-based index; default: last column)");
  fit->add_flag("--standardize", fit_opt.standardize, "Standardize predictor columns");
  fit->add_option("--k", fit_opt.sparsity, "Support size K")->required();
  fit->add_option("--method", fit_opt.method,
                  "ProjSTG | PlainSTG | LASSO | OMP | RandOMP | SCAD");
  double lambda_value = 0.0;
  auto* lambda_flag = fit->add_option("--lambda", lambda_value, "Penalty level");
  double sigma_value = 0.0;
  auto* sigma_flag = fit->add_option("--sigma", sigma_value, "Known noise level");
  fit->add_flag("--semi-synthetic", fit_opt.plant,
                "Plant a synthetic K-sparse truth on the real design");

  CvOptions cv_opt;
  auto* cv = app.add_subcommand("cv", "Cross-validate the constant C in lambda = C*lambda0");
  cv->add_option("--data", cv_opt.data_path, "CSV dataset path")->required();
  cv->add_option("--response", cv_opt.response, "Response column");
  cv->add_flag("--standardize", cv_opt.standardize, "Standardize predictor columns");
  cv->add_option("--k", cv_opt.sparsity, "Support size K")->required();
  cv->add_option("--sigma", cv_opt.sigma, "Known noise level")->required();
  cv->add_option("--folds", cv_opt.folds, "Cross-validation folds");
  cv->add_option("--c-grid", cv_opt.c_grid, "Grid of C values");

  OracleOptions oracle_opt;
  auto* oracle = app.add_subcommand("oracle", "Exhaustive best-subset search (tiny instances)");
  oracle->add_option("--data", oracle_opt.data_path, "CSV dataset path")->required();
  oracle->add_option("--response", oracle_opt.response, "Response column");
  oracle->add_flag("--standardize", oracle_opt.standardize, "Standardize predictor columns");
  oracle->add_option("--k", oracle_opt.sparsity, "Support size K")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (seed_opt->count() > 0) {
    global.seed = seed_value;
  }
  if (lambda_flag->count() > 0) {
    fit_opt.lambda = lambda_value;
  }
  if (sigma_flag->count() > 0) {
    fit_opt.sigma = sigma_value;
  }

  try {
    if (sweep->parsed()) {
      return run_sweep(global);
    }
    if (fit->parsed()) {
      return run_fit(global, fit_opt);
    }
    if (cv->parsed()) {
      return run_cv(global, cv_opt);
    }
    if (oracle->parsed()) {
      return run_oracle(oracle_opt);
    }
  } catch (const SweepHealthError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitSweepHealth;
  } catch (const LoadError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitIo;
  } catch (const IoError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
