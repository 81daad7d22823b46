"""Sparse linear-regression support recovery with projected stochastic gates.

The heavy lifting lives in the compiled extension; this package re-exports
its functions.
"""

from ._core import (
    DivergenceError,
    InstanceTooLargeError,
    SingularSystemError,
    bootstrap_band,
    exact_gate_moments,
    exhaustive_best_subset,
    extract_support,
    fit_plain_stg,
    fit_projected_stg,
    gate_penalty,
    generate_dataset,
    lambda_base,
    lasso_fit,
    load_csv_dataset,
    mc_gate_moments,
    omp_fit,
    projected_theta,
    rand_omp_fit,
    run_experiment,
    scad_fit,
    score_trial,
    semi_synthetic,
)

__all__ = [
    "DivergenceError",
    "InstanceTooLargeError",
    "SingularSystemError",
    "bootstrap_band",
    "exact_gate_moments",
    "exhaustive_best_subset",
    "extract_support",
    "fit_plain_stg",
    "fit_projected_stg",
    "gate_penalty",
    "generate_dataset",
    "lambda_base",
    "lasso_fit",
    "load_csv_dataset",
    "mc_gate_moments",
    "omp_fit",
    "projected_theta",
    "rand_omp_fit",
    "run_experiment",
    "scad_fit",
    "score_trial",
    "semi_synthetic",
]

__version__ = "0.1.0"
