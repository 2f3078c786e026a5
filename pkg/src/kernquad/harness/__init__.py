"""Misspecification experiments: integrands, runs, rate fits and CSV tables."""

from .experiment import (
    METHODS,
    ConfigError,
    ConvergenceRecord,
    ExperimentConfig,
    build_integrand,
    check_invariants,
    load_config,
    n_grid,
    parse_config,
    run_convergence,
)
from .fitting import FitError, RateFit, TooManyFailures, aggregate, aggregate_and_fit, fit_groups
from .integrands import (
    Integrand,
    constant_integrand,
    make_integrand,
    make_matern_integrand,
    make_ridge_integrand,
)
from .rates import TheoreticalRate, method_prediction, predicted_rate, predicted_rate_sobolev
from .table import HEADER, TableError, export_table, import_table

__all__ = [
    "HEADER",
    "METHODS",
    "ConfigError",
    "ConvergenceRecord",
    "ExperimentConfig",
    "FitError",
    "Integrand",
    "RateFit",
    "TableError",
    "TheoreticalRate",
    "TooManyFailures",
    "aggregate",
    "aggregate_and_fit",
    "build_integrand",
    "check_invariants",
    "constant_integrand",
    "export_table",
    "fit_groups",
    "import_table",
    "load_config",
    "make_integrand",
    "make_matern_integrand",
    "make_ridge_integrand",
    "method_prediction",
    "n_grid",
    "parse_config",
    "predicted_rate",
    "predicted_rate_sobolev",
    "run_convergence",
]
