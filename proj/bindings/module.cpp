#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "projstg/baselines.hpp"
#include "projstg/bench.hpp"
#include "projstg/errors.hpp"
#include "projstg/gates.hpp"
#include "projstg/linmodel.hpp"
#include "projstg/metrics.hpp"
#include "projstg/solver.hpp"

namespace py = pybind11;
using namespace projstg;

namespace {

DesignEnsemble ensemble_from_name(const std::string& name) {
  if (name == "gaussian") return DesignEnsemble::GaussianIID;
  if (name == "rademacher" || name == "bernoulli") return DesignEnsemble::RademacherIID;
  if (name == "toeplitz") return DesignEnsemble::ToeplitzGaussian;
  throw std::invalid_argument("unknown ensemble: " + name);
}

SolverConfig solver_config_from_kwargs(double lambda, double tau, int moment_samples,
                                       int risk_samples, int max_epochs, double learning_rate,
                                       bool exact_moments, std::uint64_t seed) {
  SolverConfig config;
  config.lambda = lambda;
  config.tau = tau;
  config.moment_samples = moment_samples;
  config.risk_samples = risk_samples;
  config.max_epochs = max_epochs;
  config.adam.learning_rate = learning_rate;
  config.moment_mode = exact_moments ? MomentMode::Exact : MomentMode::MonteCarlo;
  config.seed = seed;
  return config;
}

py::dict fit_to_dict(const FitResult& fit) {
  py::dict out;
  out["beta_hat"] = fit.beta_hat;
  out["support"] = fit.support_hat;
  out["theta"] = fit.theta;
  out["mu"] = fit.mu;
  out["epochs_run"] = fit.epochs_run;
  out["final_risk"] = fit.final_risk;
  return out;
}

LinearDataset dataset_from_parts(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                 double sigma) {
  LinearDataset data;
  data.X = X;
  data.y = y;
  data.sigma = sigma;
  return data;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sparse support recovery with projected stochastic gates";

  py::register_exception<SingularSystemError>(m, "SingularSystemError", PyExc_RuntimeError);
  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);
  py::register_exception<InstanceTooLargeError>(m, "InstanceTooLargeError", PyExc_ValueError);

  // --- gates ---------------------------------------------------------------
  m.def(
      "gate_penalty",
      [](const Eigen::VectorXd& mu, double tau) { return gate_penalty(mu, tau); },
      py::arg("mu"), py::arg("tau") = 0.5,
      "Expected number of open gates, sum_d Phi(mu_d / tau).");

  m.def(
      "exact_gate_moments",
      [](const Eigen::VectorXd& mu, double tau) {
        const GateMoments moments = exact_gate_moments({mu, tau});
        return py::make_tuple(moments.q, moments.Q);
      },
      py::arg("mu"), py::arg("tau") = 0.5, "Closed-form (q, Q) of the clipped-Gaussian gates.");

  m.def(
      "mc_gate_moments",
      [](const Eigen::VectorXd& mu, double tau, std::int64_t samples, std::uint64_t seed) {
        Rng rng(seed);
        const GateMoments moments = mc_gate_moments({mu, tau}, samples, rng);
        return py::make_tuple(moments.q, moments.Q);
      },
      py::arg("mu"), py::arg("tau") = 0.5, py::arg("samples") = 20, py::arg("seed") = 0,
      "Monte-Carlo (q, Q) over `samples` gate draws.");

  // --- linmodel ------------------------------------------------------------
  m.def(
      "generate_dataset",
      [](int n, int d, int k, double sigma, const std::string& ensemble, double rho,
         std::uint64_t seed) {
        Rng rng(seed);
        DesignSpec spec{ensemble_from_name(ensemble), n, d, rho};
        const SparseSignal signal = generate_signal(d, k, rng);
        const LinearDataset data = generate_dataset(spec, signal, sigma, rng);
        py::dict out;
        out["X"] = data.X;
        out["y"] = data.y;
        out["beta_star"] = signal.beta;
        out["support"] = signal.support;
        return out;
      },
      py::arg("n"), py::arg("d"), py::arg("k"), py::arg("sigma"),
      py::arg("ensemble") = "gaussian", py::arg("rho") = 0.0, py::arg("seed") = 0,
      "Synthetic K-sparse regression dataset (X, y, beta_star, support).");

  m.def(
      "load_csv_dataset",
      [](const std::string& path, const std::string& response, bool standardize) {
        const LinearDataset data = load_csv_dataset(path, response, standardize);
        return py::make_tuple(data.X, data.y);
      },
      py::arg("path"), py::arg("response") = "", py::arg("standardize") = false,
      "Load a numeric CSV; empty response means the last column.");

  m.def(
      "semi_synthetic",
      [](const Eigen::MatrixXd& X, int k, double sigma, std::uint64_t seed) {
        Rng rng(seed);
        const LinearDataset data = semi_synthetic(X, k, sigma, rng);
        py::dict out;
        out["X"] = data.X;
        out["y"] = data.y;
        out["beta_star"] = data.truth->beta;
        out["support"] = data.truth->support;
        return out;
      },
      py::arg("X"), py::arg("k"), py::arg("sigma"), py::arg("seed") = 0,
      "Plant a synthetic K-sparse truth on a real design matrix.");

  // --- solver --------------------------------------------------------------
  m.def(
      "fit_projected_stg",
      [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int k, double lambda, double tau,
         int moment_samples, int risk_samples, int max_epochs, double learning_rate,
         bool exact_moments, std::uint64_t seed) {
        const SolverConfig config =
            solver_config_from_kwargs(lambda, tau, moment_samples, risk_samples, max_epochs,
                                      learning_rate, exact_moments, seed);
        return fit_to_dict(fit_projected_stg(dataset_from_parts(X, y, 0.0), k, config));
      },
      py::arg("X"), py::arg("y"), py::arg("k"), py::arg("lambda_") = 0.0, py::arg("tau") = 0.5,
      py::arg("moment_samples") = 20, py::arg("risk_samples") = 20, py::arg("max_epochs") = 1000,
      py::arg("learning_rate") = 0.05, py::arg("exact_moments") = false, py::arg("seed") = 0,
      "Projected stochastic-gate fit; returns a dict with beta_hat, support, theta, mu.");

  m.def(
      "fit_plain_stg",
      [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int k, double lambda, double tau,
         int moment_samples, int risk_samples, int max_epochs, double learning_rate,
         bool exact_moments, std::uint64_t seed) {
        const SolverConfig config =
            solver_config_from_kwargs(lambda, tau, moment_samples, risk_samples, max_epochs,
                                      learning_rate, exact_moments, seed);
        return fit_to_dict(fit_plain_stg(dataset_from_parts(X, y, 0.0), k, config));
      },
      py::arg("X"), py::arg("y"), py::arg("k"), py::arg("lambda_") = 0.0, py::arg("tau") = 0.5,
      py::arg("moment_samples") = 20, py::arg("risk_samples") = 20, py::arg("max_epochs") = 1000,
      py::arg("learning_rate") = 0.05, py::arg("exact_moments") = false, py::arg("seed") = 0,
      "Gradient-only stochastic-gate fit (theta by Adam instead of projection).");

  m.def(
      "projected_theta",
      [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& q,
         const Eigen::MatrixXd& Q, double ridge_jitter) {
        GateMoments moments;
        moments.q = q;
        moments.Q = Q;
        return projected_theta(X, y, moments, ridge_jitter);
      },
      py::arg("X"), py::arg("y"), py::arg("q"), py::arg("Q"), py::arg("ridge_jitter") = 1e-10,
      "Closed-form solution of (X^T X .* Q) theta = (X^T y) .* q.");

  m.def("extract_support", &extract_support, py::arg("beta"), py::arg("k"),
        "Indices of the K largest |beta_d|, ties toward the lower index.");

  // --- baselines -----------------------------------------------------------
  m.def(
      "lasso_fit",
      [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda, int max_iters,
         double tol) {
        const auto fit = lasso_fit(X, y, lambda, max_iters, tol);
        py::dict out;
        out["beta"] = fit.beta;
        out["converged"] = fit.converged;
        out["sweeps"] = fit.sweeps;
        return out;
      },
      py::arg("X"), py::arg("y"), py::arg("lambda_"), py::arg("max_iters") = 1000,
      py::arg("tol") = 1e-8, "Coordinate-descent LASSO on internally normalized columns.");

  m.def(
      "scad_fit",
      [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda, double a,
         int max_iters, double tol) {
        const auto fit = scad_fit(X, y, lambda, a, max_iters, tol);
        py::dict out;
        out["beta"] = fit.beta;
        out["converged"] = fit.converged;
        out["sweeps"] = fit.sweeps;
        return out;
      },
      py::arg("X"), py::arg("y"), py::arg("lambda_"), py::arg("a") = 3.7,
      py::arg("max_iters") = 1000, py::arg("tol") = 1e-8,
      "Coordinate-descent SCAD, warm-started at the LASSO solution.");

  m.def(
      "omp_fit",
      [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int k) {
        const GreedyFit fit = omp_fit(X, y, k);
        return py::make_tuple(fit.beta, fit.support);
      },
      py::arg("X"), py::arg("y"), py::arg("k"), "Orthogonal matching pursuit, K steps.");

  m.def(
      "rand_omp_fit",
      [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int k, int runs,
         double temperature, std::uint64_t seed) {
        Rng rng(seed);
        const GreedyFit fit = rand_omp_fit(X, y, k, runs, temperature, rng);
        return py::make_tuple(fit.beta, fit.support);
      },
      py::arg("X"), py::arg("y"), py::arg("k"), py::arg("runs") = 10,
      py::arg("temperature") = 1.0, py::arg("seed") = 0,
      "Randomized OMP: averaged coefficients over J randomized-greedy passes.");

  m.def("exhaustive_best_subset", &exhaustive_best_subset, py::arg("X"), py::arg("y"),
        py::arg("k"), "Brute-force residual-optimal K-subset (tiny instances only).");

  // --- metrics -------------------------------------------------------------
  m.def(
      "score_trial",
      [](const std::vector<int>& estimated, const std::vector<int>& truth,
         const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta_star) {
        const SupportScore s = score_trial(estimated, truth, beta_hat, beta_star);
        py::dict out;
        out["tpr"] = s.tpr;
        out["fdr"] = s.fdr;
        out["recovered"] = s.recovered;
        out["l2_error"] = s.l2_error;
        return out;
      },
      py::arg("estimated"), py::arg("truth"), py::arg("beta_hat"), py::arg("beta_star"),
      "TPR/FDR/exact-recovery scores of an estimated support.");

  m.def(
      "bootstrap_band",
      [](const std::vector<bool>& outcomes, double level, int resamples, std::uint64_t seed) {
        Rng rng(seed);
        const BootstrapBand band = bootstrap_band(outcomes, level, resamples, rng);
        return py::make_tuple(band.rate, band.low, band.high);
      },
      py::arg("outcomes"), py::arg("level") = 0.9, py::arg("resamples") = 1000,
      py::arg("seed") = 0, "Percentile-bootstrap confidence band of a success rate.");

  // --- bench ---------------------------------------------------------------
  m.def("lambda_base", &lambda_base, py::arg("sigma"), py::arg("d"), py::arg("k"),
        py::arg("n"), "Reference level sqrt(2 sigma^2 log(D-K) log(K) / N).");

  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        const ExperimentConfig config = config_from_json(config_json);
        const ExperimentResult result = run_experiment(config);
        py::dict out;
        out["records_csv"] = records_csv(result.records, result.sweep);
        out["curves_csv"] = curves_csv(result.curves);
        out["svg"] = plot_svg(result.curves, result.sweep);
        out["failed_trials"] = result.failed_trials;
        return out;
      },
      py::arg("config_json"),
      "Run a sweep from a JSON config string; returns CSV/SVG text outputs.");
}
