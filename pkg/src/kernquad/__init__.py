"""Kernel quadrature on the unit cube: Korobov and Matérn kernels, lattice and
Bayesian quadrature rules, worst-case errors, and convergence-rate experiments
for integrands that are less smooth than the kernel assumes."""

from .kernels import (
    KorobovKernel,
    MaternKernel,
    PowerKernel,
    bernoulli_poly,
    korobov_eval,
    korobov_eval_1d,
    matern_eval,
    mercer_truncated,
)
from .pointsets import (
    GeneratorVector,
    PointSet,
    cbc_construct,
    diameter,
    random_shift,
    rank1_lattice,
    regular_grid,
    sample_iid_uniform,
    separation_radius,
)
from .wce import EmbeddingSpec, WceReport, kernel_mean_korobov, kernel_mean_numeric, wce_bruteforce, wce_eval
from .weights import (
    ConditioningError,
    QuadratureRule,
    SolveReport,
    bq_weights_constrained,
    bq_weights_exact,
    solve_spd,
    uniform_weights,
)

__all__ = [
    "ConditioningError",
    "EmbeddingSpec",
    "GeneratorVector",
    "KorobovKernel",
    "MaternKernel",
    "PointSet",
    "PowerKernel",
    "QuadratureRule",
    "SolveReport",
    "WceReport",
    "bernoulli_poly",
    "bq_weights_constrained",
    "bq_weights_exact",
    "cbc_construct",
    "diameter",
    "kernel_mean_korobov",
    "kernel_mean_numeric",
    "korobov_eval",
    "korobov_eval_1d",
    "matern_eval",
    "mercer_truncated",
    "random_shift",
    "rank1_lattice",
    "regular_grid",
    "sample_iid_uniform",
    "separation_radius",
    "solve_spd",
    "uniform_weights",
    "wce_bruteforce",
    "wce_eval",
]

__version__ = "0.1.0"
