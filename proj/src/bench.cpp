#include "projstg/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "projstg/errors.hpp"

namespace projstg {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

/// Runs fn(0..count-1) on a bounded pool. Tasks own their seeds, so the
/// schedule cannot change results; the first escaped exception is rethrown.
void parallel_tasks(int threads, std::size_t count, const std::function<void(std::size_t)>& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) {
        return;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back(worker);
  }
  for (auto& th : pool) {
    th.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

}  // namespace

std::string method_name(Method method) {
  switch (method) {
    case Method::ProjSTG:
      return "ProjSTG";
    case Method::PlainSTG:
      return "PlainSTG";
    case Method::Lasso:
      return "LASSO";
    case Method::OMP:
      return "OMP";
    case Method::RandOMP:
      return "RandOMP";
    case Method::SCAD:
      return "SCAD";
  }
  return "?";
}

std::optional<Method> parse_method(const std::string& name) {
  const std::string key = lower(name);
  if (key == "projstg" || key == "proj-stg" || key == "proj_stg") return Method::ProjSTG;
  if (key == "plainstg" || key == "plain-stg" || key == "plain_stg" || key == "stg")
    return Method::PlainSTG;
  if (key == "lasso") return Method::Lasso;
  if (key == "omp") return Method::OMP;
  if (key == "randomp" || key == "rand-omp" || key == "rand_omp") return Method::RandOMP;
  if (key == "scad") return Method::SCAD;
  return std::nullopt;
}

std::string sweep_name(SweepKind sweep) {
  return sweep == SweepKind::VaryN ? "vary_n" : "vary_k";
}

std::optional<SweepKind> parse_sweep(const std::string& name) {
  const std::string key = lower(name);
  if (key == "vary_n" || key == "varyn" || key == "n") return SweepKind::VaryN;
  if (key == "vary_k" || key == "varyk" || key == "k") return SweepKind::VaryK;
  return std::nullopt;
}

std::vector<double> default_c_grid() {
  std::vector<double> grid(10);
  for (int i = 0; i < 10; ++i) {
    grid[static_cast<std::size_t>(i)] = std::pow(10.0, -1.0 + 2.0 * i / 9.0);
  }
  return grid;
}

double lambda_base(double sigma, int d, int k, int n) {
  if (sigma < 0.0) {
    throw std::invalid_argument("lambda_base: sigma must be nonnegative");
  }
  if (n < 1) {
    throw std::invalid_argument("lambda_base: n must be positive");
  }
  if (k <= 1 || d - k <= 1) {
    throw std::invalid_argument(
        "lambda_base: needs K >= 2 and D - K >= 2 (logarithms degenerate); override lambda "
        "explicitly for such sweeps");
  }
  return std::sqrt(2.0 * sigma * sigma * std::log(static_cast<double>(d - k)) *
                   std::log(static_cast<double>(k)) / static_cast<double>(n));
}

double select_c(const LinearDataset& data, int sparsity, const LambdaRule& rule,
                const SolverConfig& solver, std::uint64_t seed) {
  if (rule.c_grid.empty()) {
    throw std::invalid_argument("select_c: C grid must be nonempty");
  }
  std::vector<double> grid = rule.c_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.size() == 1) {
    return grid.front();  // nothing to compare; skip the fits
  }

  const int folds = rule.cv_folds;
  const int n = static_cast<int>(data.X.rows());
  const int d = static_cast<int>(data.X.cols());
  if (folds < 2) {
    throw std::invalid_argument("select_c: cv_folds must be at least 2");
  }
  if (n < folds) {
    throw std::invalid_argument("select_c: every fold needs at least one row");
  }

  // Round-robin row partition, identical for every C.
  std::vector<std::vector<int>> test_rows(static_cast<std::size_t>(folds));
  for (int i = 0; i < n; ++i) {
    test_rows[static_cast<std::size_t>(i % folds)].push_back(i);
  }

  const double base_full = lambda_base(data.sigma, d, sparsity, n);

  // Distinct C values can induce identical lambdas (sigma = 0 collapses them
  // all); cache fold errors per effective lambda scale.
  std::map<double, double> error_by_scale;

  double best_c = grid.front();
  double best_error = std::numeric_limits<double>::infinity();
  for (double c : grid) {
    const double scale = c * base_full;
    double cv_error;
    auto hit = error_by_scale.find(scale);
    if (hit != error_by_scale.end()) {
      cv_error = hit->second;
    } else {
      cv_error = 0.0;
      for (int f = 0; f < folds; ++f) {
        const auto& test = test_rows[static_cast<std::size_t>(f)];
        const int n_test = static_cast<int>(test.size());
        const int n_train = n - n_test;

        LinearDataset train;
        train.X.resize(n_train, d);
        train.y.resize(n_train);
        Eigen::MatrixXd x_test(n_test, d);
        Eigen::VectorXd y_test(n_test);
        int it = 0;
        int iv = 0;
        for (int i = 0; i < n; ++i) {
          if (i % folds == f) {
            x_test.row(iv) = data.X.row(i);
            y_test[iv++] = data.y[i];
          } else {
            train.X.row(it) = data.X.row(i);
            train.y[it++] = data.y[i];
          }
        }
        train.sigma = data.sigma;

        SolverConfig fold_cfg = solver;
        fold_cfg.lambda = c * lambda_base(data.sigma, d, sparsity, n_train);
        fold_cfg.seed = derive_seed(seed, "cvfold/" + std::to_string(f));
        const FitResult fit = fit_projected_stg(train, sparsity, fold_cfg);
        cv_error += (y_test - x_test * fit.beta_hat).squaredNorm() /
                    static_cast<double>(n_test);
      }
      cv_error /= static_cast<double>(folds);
      error_by_scale.emplace(scale, cv_error);
    }
    if (cv_error < best_error) {
      best_error = cv_error;
      best_c = c;
    }
  }
  return best_c;
}

void validate_config(const ExperimentConfig& config) {
  if (config.grid.empty()) {
    throw std::invalid_argument("config: grid must be nonempty");
  }
  for (std::size_t i = 0; i + 1 < config.grid.size(); ++i) {
    if (config.grid[i] >= config.grid[i + 1]) {
      throw std::invalid_argument("config: grid must be strictly increasing");
    }
  }
  if (config.trials < 1) {
    throw std::invalid_argument("config: trials must be at least 1");
  }
  if (config.methods.empty()) {
    throw std::invalid_argument("config: methods must be nonempty");
  }
  const FixedParams& fx = config.fixed;
  if (fx.d < 1 || fx.sigma < 0.0 || fx.rho < 0.0 || fx.rho >= 1.0) {
    throw std::invalid_argument("config: fixed parameters out of range");
  }
  for (double c : config.lambda_rule.c_grid) {
    if (c < 0.1 || c > 10.0) {
      throw std::invalid_argument("config: C grid values must lie in [0.1, 10]");
    }
  }
  if (config.lambda_rule.cv_folds < 2) {
    throw std::invalid_argument("config: cv_folds must be at least 2");
  }
  if (config.threads < 0) {
    throw std::invalid_argument("config: threads must be nonnegative");
  }

  const bool needs_rule = !config.lambda_rule.override_lambda.has_value();
  for (int x : config.grid) {
    const int n = config.sweep == SweepKind::VaryN ? x : fx.n;
    const int k = config.sweep == SweepKind::VaryK ? x : fx.k;
    if (n < 1) {
      throw std::invalid_argument("config: every grid point needs N >= 1");
    }
    if (k < 1 || k > fx.d) {
      throw std::invalid_argument("config: every grid point needs 1 <= K <= D");
    }
    if (needs_rule && (k <= 1 || fx.d - k <= 1)) {
      throw std::invalid_argument(
          "config: lambda_base is undefined at K <= 1 or D - K <= 1; set "
          "lambda_rule.override_lambda for this sweep");
    }
  }
}

namespace {

struct PointSetup {
  int x = 0;
  int n = 0;
  int k = 0;
  double lambda_stg = 0.0;    // lambda_N for the gate solvers
  double lambda_basic = 0.0;  // lambda_{N,0} for LASSO and SCAD
};

struct TaskResult {
  TrialRecord record;
  std::string error;
};

TrialRecord run_trial(const ExperimentConfig& config, const PointSetup& point, Method method,
                      std::uint64_t seed) {
  Rng rng(seed);
  DesignSpec spec{config.fixed.ensemble, point.n, config.fixed.d, config.fixed.rho};
  const SparseSignal signal = generate_signal(config.fixed.d, point.k, rng);
  const LinearDataset data = generate_dataset(spec, signal, config.fixed.sigma, rng);

  Eigen::VectorXd beta_hat;
  std::vector<int> support;
  switch (method) {
    case Method::ProjSTG:
    case Method::PlainSTG: {
      SolverConfig cfg = config.solver;
      cfg.lambda = point.lambda_stg;
      cfg.seed = derive_seed(seed, "solver");
      const FitResult fit = method == Method::ProjSTG ? fit_projected_stg(data, point.k, cfg)
                                                      : fit_plain_stg(data, point.k, cfg);
      beta_hat = fit.beta_hat;
      support = fit.support_hat;
      break;
    }
    case Method::Lasso: {
      const auto fit = lasso_fit(data.X, data.y, point.lambda_basic,
                                 config.baselines.lasso.max_iters, config.baselines.lasso.tol);
      beta_hat = fit.beta;
      support = extract_support(beta_hat, point.k);
      break;
    }
    case Method::OMP: {
      const GreedyFit fit = omp_fit(data.X, data.y, point.k);
      beta_hat = fit.beta;
      support = fit.support;
      break;
    }
    case Method::RandOMP: {
      Rng method_rng(derive_seed(seed, "randomp"));
      const GreedyFit fit =
          rand_omp_fit(data.X, data.y, point.k, config.baselines.rand_omp.runs,
                       config.baselines.rand_omp.temperature, method_rng);
      beta_hat = fit.beta;
      support = fit.support;
      break;
    }
    case Method::SCAD: {
      const auto fit = scad_fit(data.X, data.y, point.lambda_basic, config.baselines.scad.a,
                                config.baselines.scad.max_iters, config.baselines.scad.tol);
      beta_hat = fit.beta;
      support = extract_support(beta_hat, point.k);
      break;
    }
  }

  const SupportScore score = score_trial(support, signal.support, beta_hat, signal.beta);
  TrialRecord record;
  record.method = method_name(method);
  record.n = point.n;
  record.d = config.fixed.d;
  record.k = point.k;
  record.sigma = config.fixed.sigma;
  record.recovered = score.recovered;
  record.tpr = score.tpr;
  record.fdr = score.fdr;
  record.l2_error = score.l2_error;
  record.seed = seed;
  return record;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  const int threads = config.threads > 0
                          ? config.threads
                          : std::max(1u, std::thread::hardware_concurrency());

  std::vector<PointSetup> points(config.grid.size());
  for (std::size_t p = 0; p < config.grid.size(); ++p) {
    PointSetup& point = points[p];
    point.x = config.grid[p];
    point.n = config.sweep == SweepKind::VaryN ? point.x : config.fixed.n;
    point.k = config.sweep == SweepKind::VaryK ? point.x : config.fixed.k;
  }

  const bool needs_stg_lambda =
      std::any_of(config.methods.begin(), config.methods.end(), [](Method m) {
        return m == Method::ProjSTG || m == Method::PlainSTG;
      });

  if (config.lambda_rule.override_lambda.has_value()) {
    for (PointSetup& point : points) {
      point.lambda_stg = *config.lambda_rule.override_lambda;
      point.lambda_basic = *config.lambda_rule.override_lambda;
    }
  } else {
    for (PointSetup& point : points) {
      point.lambda_basic = lambda_base(config.fixed.sigma, config.fixed.d, point.k, point.n);
    }
    if (needs_stg_lambda) {
      // Pick C by cross-validation on a dedicated dataset per grid point (or
      // once at the first point when cv_per_point is off).
      const std::size_t cv_count = config.lambda_rule.cv_per_point ? points.size() : 1;
      std::vector<double> selected(cv_count);
      parallel_tasks(threads, cv_count, [&](std::size_t p) {
        const PointSetup& point = points[p];
        const std::uint64_t cv_seed =
            derive_seed(config.master_seed, "cv/x=" + std::to_string(point.x));
        Rng rng(cv_seed);
        DesignSpec spec{config.fixed.ensemble, point.n, config.fixed.d, config.fixed.rho};
        const SparseSignal signal = generate_signal(config.fixed.d, point.k, rng);
        const LinearDataset cv_data =
            generate_dataset(spec, signal, config.fixed.sigma, rng);
        SolverConfig cv_solver = config.solver;
        selected[p] = select_c(cv_data, point.k, config.lambda_rule, cv_solver, cv_seed);
      });
      for (std::size_t p = 0; p < points.size(); ++p) {
        const double c = selected[config.lambda_rule.cv_per_point ? p : 0];
        points[p].lambda_stg = c * points[p].lambda_basic;
      }
    }
  }

  // Canonical task order: grid-major, then trial, method fastest.
  struct Task {
    std::size_t point;
    int trial;
    std::size_t method;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  tasks.reserve(points.size() * static_cast<std::size_t>(config.trials) *
                config.methods.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (int t = 0; t < config.trials; ++t) {
      for (std::size_t m = 0; m < config.methods.size(); ++m) {
        const std::uint64_t seed = derive_seed(
            config.master_seed, "x=" + std::to_string(points[p].x) + "/trial=" +
                                    std::to_string(t) + "/method=" +
                                    method_name(config.methods[m]));
        tasks.push_back(Task{p, t, m, seed});
      }
    }
  }

  std::vector<TaskResult> results(tasks.size());
  parallel_tasks(threads, tasks.size(), [&](std::size_t i) {
    const Task& task = tasks[i];
    try {
      results[i].record = run_trial(config, points[task.point], config.methods[task.method],
                                    task.seed);
    } catch (const std::exception& err) {
      const PointSetup& point = points[task.point];
      TrialRecord failed;
      failed.method = method_name(config.methods[task.method]);
      failed.n = point.n;
      failed.d = config.fixed.d;
      failed.k = point.k;
      failed.sigma = config.fixed.sigma;
      failed.recovered = false;
      failed.tpr = 0.0;
      failed.fdr = 0.0;
      failed.l2_error = std::numeric_limits<double>::infinity();
      failed.seed = task.seed;
      results[i].record = failed;
      results[i].error = err.what();
    }
  });

  ExperimentResult out;
  out.sweep = config.sweep;
  out.records.reserve(results.size());

  std::vector<int> failures_per_point(points.size(), 0);
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].error.empty()) {
      ++failures_per_point[tasks[i].point];
      ++out.failed_trials;
      std::cerr << "trial failed (x=" << points[tasks[i].point].x
                << ", method=" << results[i].record.method << ", seed=" << tasks[i].seed
                << "): " << results[i].error << "\n";
    }
    out.records.push_back(std::move(results[i].record));
  }

  const int per_point = config.trials * static_cast<int>(config.methods.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    if (failures_per_point[p] * 10 > per_point) {
      throw SweepHealthError("more than 10% of trials failed at grid point x=" +
                             std::to_string(points[p].x));
    }
  }

  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t m = 0; m < config.methods.size(); ++m) {
      std::vector<bool> outcomes;
      outcomes.reserve(static_cast<std::size_t>(config.trials));
      for (int t = 0; t < config.trials; ++t) {
        const std::size_t idx =
            (p * static_cast<std::size_t>(config.trials) + static_cast<std::size_t>(t)) *
                config.methods.size() +
            m;
        outcomes.push_back(out.records[idx].recovered);
      }
      Rng band_rng(derive_seed(config.master_seed,
                               "band/x=" + std::to_string(points[p].x) + "/method=" +
                                   method_name(config.methods[m])));
      const BootstrapBand band = bootstrap_band(outcomes, 0.90, 1000, band_rng);
      CurvePoint curve;
      curve.method = method_name(config.methods[m]);
      curve.x = static_cast<double>(points[p].x);
      curve.success_rate = band.rate;
      curve.ci_low = band.low;
      curve.ci_high = band.high;
      curve.trials = config.trials;
      out.curves.push_back(curve);
    }
  }
  return out;
}

std::string format_real(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

std::string records_csv(const std::vector<TrialRecord>& records, SweepKind sweep) {
  std::ostringstream out;
  out << "method,sweep_x,N,D,K,sigma,seed,recovered,tpr,fdr,l2_error\n";
  for (const TrialRecord& r : records) {
    const int x = sweep == SweepKind::VaryN ? r.n : r.k;
    out << r.method << ',' << x << ',' << r.n << ',' << r.d << ',' << r.k << ','
        << format_real(r.sigma) << ',' << r.seed << ',' << (r.recovered ? 1 : 0) << ','
        << format_real(r.tpr) << ',' << format_real(r.fdr) << ',' << format_real(r.l2_error)
        << '\n';
  }
  return out.str();
}

std::string curves_csv(const std::vector<CurvePoint>& curves) {
  std::ostringstream out;
  out << "method,sweep_x,success_rate,ci_low,ci_high,trials\n";
  for (const CurvePoint& c : curves) {
    out << c.method << ',' << format_real(c.x) << ',' << format_real(c.success_rate) << ','
        << format_real(c.ci_low) << ',' << format_real(c.ci_high) << ',' << c.trials << '\n';
  }
  return out.str();
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open for writing: " + path);
  }
  out << content;
  out.flush();
  if (!out) {
    throw IoError("write failed: " + path);
  }
}

}  // namespace

void emit_records_csv(const std::vector<TrialRecord>& records, SweepKind sweep,
                      const std::string& path) {
  write_file(path, records_csv(records, sweep));
}

void emit_curves_csv(const std::vector<CurvePoint>& curves, const std::string& path) {
  write_file(path, curves_csv(curves));
}

void emit_plot(const std::vector<CurvePoint>& curves, SweepKind sweep,
               const std::string& path) {
  write_file(path, plot_svg(curves, sweep));
}

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::vector<std::string>& known,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      throw std::invalid_argument("config: unknown key \"" + it.key() + "\" in " + where);
    }
  }
}

}  // namespace

ExperimentConfig config_from_json(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& err) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") + err.what());
  }

  try {
    ExperimentConfig config;
    reject_unknown_keys(root,
                        {"sweep", "grid", "fixed", "trials", "methods", "lambda_rule",
                         "master_seed", "solver", "baselines", "threads"},
                        "top level");

    if (root.contains("sweep")) {
      const auto parsed = parse_sweep(root.at("sweep").get<std::string>());
      if (!parsed) {
        throw std::invalid_argument("config: unknown sweep kind");
      }
      config.sweep = *parsed;
    }
    config.grid = root.at("grid").get<std::vector<int>>();
    if (root.contains("trials")) {
      config.trials = root.at("trials").get<int>();
    }
    if (root.contains("master_seed")) {
      config.master_seed = root.at("master_seed").get<std::uint64_t>();
    }
    if (root.contains("threads")) {
      config.threads = root.at("threads").get<int>();
    }

    if (root.contains("fixed")) {
      const json& fx = root.at("fixed");
      reject_unknown_keys(fx, {"D", "K", "N", "sigma", "ensemble", "rho"}, "fixed");
      if (fx.contains("D")) config.fixed.d = fx.at("D").get<int>();
      if (fx.contains("K")) config.fixed.k = fx.at("K").get<int>();
      if (fx.contains("N")) config.fixed.n = fx.at("N").get<int>();
      if (fx.contains("sigma")) config.fixed.sigma = fx.at("sigma").get<double>();
      if (fx.contains("rho")) config.fixed.rho = fx.at("rho").get<double>();
      if (fx.contains("ensemble")) {
        const std::string name = lower(fx.at("ensemble").get<std::string>());
        if (name == "gaussian") {
          config.fixed.ensemble = DesignEnsemble::GaussianIID;
        } else if (name == "rademacher" || name == "bernoulli") {
          config.fixed.ensemble = DesignEnsemble::RademacherIID;
        } else if (name == "toeplitz") {
          config.fixed.ensemble = DesignEnsemble::ToeplitzGaussian;
        } else {
          throw std::invalid_argument("config: unknown ensemble \"" + name + "\"");
        }
      }
    }

    if (root.contains("methods")) {
      config.methods.clear();
      for (const auto& entry : root.at("methods")) {
        const auto parsed = parse_method(entry.get<std::string>());
        if (!parsed) {
          throw std::invalid_argument("config: unknown method \"" +
                                      entry.get<std::string>() + "\"");
        }
        config.methods.push_back(*parsed);
      }
    }

    if (root.contains("lambda_rule")) {
      const json& rule = root.at("lambda_rule");
      reject_unknown_keys(rule, {"C_grid", "cv_folds", "cv_per_point", "override_lambda"},
                          "lambda_rule");
      if (rule.contains("C_grid")) {
        config.lambda_rule.c_grid = rule.at("C_grid").get<std::vector<double>>();
      }
      if (rule.contains("cv_folds")) {
        config.lambda_rule.cv_folds = rule.at("cv_folds").get<int>();
      }
      if (rule.contains("cv_per_point")) {
        config.lambda_rule.cv_per_point = rule.at("cv_per_point").get<bool>();
      }
      if (rule.contains("override_lambda") && !rule.at("override_lambda").is_null()) {
        config.lambda_rule.override_lambda = rule.at("override_lambda").get<double>();
      }
    }

    if (root.contains("solver")) {
      const json& sv = root.at("solver");
      reject_unknown_keys(sv,
                          {"tau", "moment_samples", "risk_samples", "max_epochs", "adam",
                           "moment_mode", "ridge_jitter", "stop_tol", "stop_patience"},
                          "solver");
      if (sv.contains("tau")) config.solver.tau = sv.at("tau").get<double>();
      if (sv.contains("moment_samples"))
        config.solver.moment_samples = sv.at("moment_samples").get<int>();
      if (sv.contains("risk_samples"))
        config.solver.risk_samples = sv.at("risk_samples").get<int>();
      if (sv.contains("max_epochs")) config.solver.max_epochs = sv.at("max_epochs").get<int>();
      if (sv.contains("ridge_jitter"))
        config.solver.ridge_jitter = sv.at("ridge_jitter").get<double>();
      if (sv.contains("stop_tol")) config.solver.stop_tol = sv.at("stop_tol").get<double>();
      if (sv.contains("stop_patience"))
        config.solver.stop_patience = sv.at("stop_patience").get<int>();
      if (sv.contains("moment_mode")) {
        const std::string mode = lower(sv.at("moment_mode").get<std::string>());
        if (mode == "monte_carlo" || mode == "mc") {
          config.solver.moment_mode = MomentMode::MonteCarlo;
        } else if (mode == "exact") {
          config.solver.moment_mode = MomentMode::Exact;
        } else {
          throw std::invalid_argument("config: unknown moment_mode \"" + mode + "\"");
        }
      }
      if (sv.contains("adam")) {
        const json& adam = sv.at("adam");
        reject_unknown_keys(adam, {"learning_rate", "decay1", "decay2", "epsilon"},
                            "solver.adam");
        if (adam.contains("learning_rate"))
          config.solver.adam.learning_rate = adam.at("learning_rate").get<double>();
        if (adam.contains("decay1")) config.solver.adam.decay1 = adam.at("decay1").get<double>();
        if (adam.contains("decay2")) config.solver.adam.decay2 = adam.at("decay2").get<double>();
        if (adam.contains("epsilon"))
          config.solver.adam.epsilon = adam.at("epsilon").get<double>();
      }
    }

    if (root.contains("baselines")) {
      const json& bl = root.at("baselines");
      reject_unknown_keys(bl, {"lasso", "scad", "rand_omp"}, "baselines");
      if (bl.contains("lasso")) {
        const json& lasso = bl.at("lasso");
        reject_unknown_keys(lasso, {"max_iters", "tol"}, "baselines.lasso");
        if (lasso.contains("max_iters"))
          config.baselines.lasso.max_iters = lasso.at("max_iters").get<int>();
        if (lasso.contains("tol")) config.baselines.lasso.tol = lasso.at("tol").get<double>();
      }
      if (bl.contains("scad")) {
        const json& scad = bl.at("scad");
        reject_unknown_keys(scad, {"a", "max_iters", "tol"}, "baselines.scad");
        if (scad.contains("a")) config.baselines.scad.a = scad.at("a").get<double>();
        if (scad.contains("max_iters"))
          config.baselines.scad.max_iters = scad.at("max_iters").get<int>();
        if (scad.contains("tol")) config.baselines.scad.tol = scad.at("tol").get<double>();
      }
      if (bl.contains("rand_omp")) {
        const json& ro = bl.at("rand_omp");
        reject_unknown_keys(ro, {"runs", "temperature"}, "baselines.rand_omp");
        if (ro.contains("runs")) config.baselines.rand_omp.runs = ro.at("runs").get<int>();
        if (ro.contains("temperature"))
          config.baselines.rand_omp.temperature = ro.at("temperature").get<double>();
      }
    }

    validate_config(config);
    return config;
  } catch (const json::exception& err) {
    throw std::invalid_argument(std::string("config: ") + err.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return config_from_json(buffer.str());
}

}  // namespace projstg
