"""Convergence experiments: methods x sample sizes x replicates."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, fields
from pathlib import Path

from ..kernels import KorobovKernel, MaternKernel
from ..pointsets import (
    PointSet,
    cbc_construct,
    next_prime,
    random_shift,
    rank1_lattice,
    regular_grid,
    sample_iid_uniform,
    separation_radius,
)
from ..wce import CLOSED_FORM, NUMERIC, EmbeddingSpec, NumericalInconsistencyError, kernel_mean, wce_eval
from ..weights import (
    ConditioningError,
    QuadratureRule,
    bq_weights_constrained,
    bq_weights_exact,
    uniform_weights,
)
from .integrands import (
    FAMILIES,
    Integrand,
    constant_integrand,
    make_integrand,
    make_matern_integrand,
    make_ridge_integrand,
)

__all__ = [
    "METHODS",
    "ConfigError",
    "ConvergenceRecord",
    "ExperimentConfig",
    "build_integrand",
    "check_invariants",
    "load_config",
    "n_grid",
    "parse_config",
    "run_convergence",
]

log = logging.getLogger(__name__)

METHODS = ("mc", "lattice-shift", "bq-exact", "bq-constrained", "grid-bq")

class ConfigError(ValueError):
    pass

@dataclass(frozen=True)
class ConvergenceRecord:
    method: str
    assumed_order: int
    smoothness_s: int
    dim: int
    n: int
    replicate: int
    seed: int
    abs_error: float | None
    wce: float | None
    weight_sq_norm: float | None

    @property
    def missing(self) -> bool:
        return self.abs_error is None

    def __post_init__(self):
        for name in ("abs_error", "wce", "weight_sq_norm"):
            v = getattr(self, name)
            if v is not None and not v >= 0.0:
                raise ValueError(f"{name} must be a nonnegative number, got {v}")

@dataclass(frozen=True)
class ExperimentConfig:
    """One convergence experiment.

    ``alpha`` is the assumed order: Korobov smoothness for the random-point
    methods, Sobolev order ``r`` of the Matérn kernel for ``grid-bq``.
    ``integrand`` defaults to ``bernoulli-ridge`` (``matern-section`` for
    ``grid-bq``).
    """

    method: str
    alpha: int
    s: int
    d: int = 1
    j_min: int = 4
    j_max: int = 10
    replicates: int = 20
    seed: int = 0
    n_min_fit: int = 16
    integrand: str | None = None
    anchor: float = 0.3
    resolution: int = 2048

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}; expected one of {', '.join(METHODS)}")
        if self.integrand is None:
            default = "matern-section" if self.method == "grid-bq" else "bernoulli-ridge"
            object.__setattr__(self, "integrand", default)
        if self.integrand not in FAMILIES:
            raise ConfigError(f"unknown integrand {self.integrand!r}; expected one of {', '.join(FAMILIES)}")
        if self.alpha < 1 or self.s < 1 or self.d < 1:
            raise ConfigError("alpha, s and d must be positive")
        if not 0 <= self.j_min <= self.j_max:
            raise ConfigError("need 0 <= j_min <= j_max")
        if self.replicates < 1:
            raise ConfigError("replicates must be >= 1")
        if self.n_min_fit < 1:
            raise ConfigError("n_min_fit must be >= 1")
        if self.integrand == "matern-section" and self.method != "grid-bq":
            raise ConfigError("matern-section integrands pair with grid-bq only")

    @property
    def effective_replicates(self) -> int:
        # the grid rule is deterministic
        return 1 if self.method == "grid-bq" else self.replicates

_INT_KEYS = {"alpha", "s", "d", "j_min", "j_max", "replicates", "seed", "n_min_fit", "resolution"}
_FLOAT_KEYS = {"anchor"}
_KNOWN_KEYS = {f.name for f in fields(ExperimentConfig)}

def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    """Parse flat ``key=value`` lines; ``#`` starts a comment."""
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            if key in _INT_KEYS:
                values[key] = int(value)
            elif key in _FLOAT_KEYS:
                values[key] = float(value)
            else:
                values[key] = value
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {value!r}") from exc
    for required in ("method", "alpha", "s"):
        if required not in values:
            raise ConfigError(f"{source}: missing required key {required!r}")
    return ExperimentConfig(**values)

def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, str(path))

def n_grid(config: ExperimentConfig) -> list[int]:
    """Sample sizes for targets ``2^j``.

    Lattices use the smallest prime ``>= 2^j``; grids use ``m^d`` with
    ``m = round(2^(j/d))``.
    """
    out = []
    for j in range(config.j_min, config.j_max + 1):
        target = 2**j
        if config.method == "lattice-shift":
            n = next_prime(target)
        elif config.method == "grid-bq":
            n = max(1, round(target ** (1.0 / config.d))) ** config.d
        else:
            n = target
        if n not in out:
            out.append(n)
    return out

def build_integrand(config: ExperimentConfig) -> Integrand:
    family = config.integrand
    if family == "constant":
        return constant_integrand(config.d)
    if family == "kernel-section":
        return make_integrand(config.s, config.d, config.anchor)
    if family == "bernoulli-ridge":
        return make_ridge_integrand(config.s, config.d, config.anchor)
    return make_matern_integrand(config.s, config.d, config.anchor, config.resolution)

def _record(config, n, rep, seed, err=None, wce=None, wsq=None) -> ConvergenceRecord:
    return ConvergenceRecord(
        method=config.method,
        assumed_order=config.alpha,
        smoothness_s=config.s,
        dim=config.d,
        n=n,
        replicate=rep,
        seed=seed,
        abs_error=err,
        wce=wce,
        weight_sq_norm=wsq,
    )

class _Cell:
    """Build one quadrature rule; returns (rule, wce)."""

    def __init__(self, config: ExperimentConfig):
        self.config = config
        if config.method == "grid-bq":
            self.kernel = MaternKernel(r=config.alpha, dim=config.d)
            self.embedding = EmbeddingSpec(NUMERIC, config.resolution)
        else:
            self.kernel = KorobovKernel(config.alpha, config.d)
            self.embedding = EmbeddingSpec(CLOSED_FORM)
        self._lattice_cache: dict[int, tuple[PointSet, float]] = {}

    def lattice(self, n: int) -> tuple[PointSet, float]:
        if n not in self._lattice_cache:
            base = rank1_lattice(cbc_construct(n, self.config.d, self.config.alpha))
            rule = QuadratureRule(base, uniform_weights(n))
            # shift-invariant kernel: the shift does not change the worst-case error
            self._lattice_cache[n] = (base, wce_eval(self.kernel, self.embedding, rule).e)
        return self._lattice_cache[n]

    def build(self, n: int, seed: int) -> tuple[QuadratureRule, float]:
        method = self.config.method
        d = self.config.d
        if method == "lattice-shift":
            base, e = self.lattice(n)
            return QuadratureRule(random_shift(base, seed), uniform_weights(n)), e
        if method == "grid-bq":
            m = round(n ** (1.0 / d))
            ps = regular_grid(m, d)
        else:
            ps = sample_iid_uniform(n, d, seed)
        if method == "mc":
            rule = QuadratureRule(ps, uniform_weights(n))
            return rule, wce_eval(self.kernel, self.embedding, rule).e
        gram = self.kernel.gram(ps.points)
        _, z = kernel_mean(self.kernel, self.embedding, ps.points)
        if method == "bq-constrained":
            rep = bq_weights_constrained(gram, z, 4.0 / n)
        else:
            rep = bq_weights_exact(gram, z)
        rule = QuadratureRule(ps, rep.weights)
        return rule, wce_eval(self.kernel, self.embedding, rule, gram=gram, kmean=z).e

def run_convergence(config: ExperimentConfig, integrand: Integrand | None = None) -> list[ConvergenceRecord]:
    """Run every (n, replicate) cell of ``config``.

    Replicate ``r`` uses seed ``config.seed + r``. A cell whose weight solve
    fails is kept as a record with missing error fields.
    """
    if integrand is None:
        integrand = build_integrand(config)
    cell = _Cell(config)
    records = []
    for n in n_grid(config):
        for rep in range(config.effective_replicates):
            seed = config.seed + rep
            try:
                rule, e = cell.build(n, seed)
            except (ConditioningError, NumericalInconsistencyError) as exc:
                log.warning("%s n=%d replicate=%d failed: %s", config.method, n, rep, exc)
                records.append(_record(config, n, rep, seed))
                continue
            err = abs(rule.apply(integrand(rule.points.points)) - integrand.true_integral)
            w = rule.weights
            records.append(_record(config, n, rep, seed, err, e, float(w @ w)))
    records.sort(key=lambda r: (r.method, r.n, r.replicate))
    return records

def check_invariants(config: ExperimentConfig, integrand: Integrand, records) -> list[str]:
    """Return descriptions of violated per-record invariants (empty if all hold)."""
    problems = []
    for r in records:
        if r.missing:
            continue
        tag = f"{r.method} n={r.n} replicate={r.replicate}"
        if r.method in ("mc", "lattice-shift") and not math.isclose(r.weight_sq_norm, 1.0 / r.n, rel_tol=1e-12):
            problems.append(f"{tag}: sum w^2 = {r.weight_sq_norm!r} != 1/n")
        if r.method == "bq-constrained" and r.weight_sq_norm > 4.0 / r.n * (1 + 1e-6):
            problems.append(f"{tag}: sum w^2 = {r.weight_sq_norm!r} exceeds 4/n")
        if (
            integrand.rkhs_norm is not None
            and r.method != "grid-bq"
            and integrand.smoothness_s == r.assumed_order
            and r.abs_error > integrand.rkhs_norm * r.wce + 1e-8
        ):
            problems.append(f"{tag}: error {r.abs_error:.3e} exceeds norm * wce {integrand.rkhs_norm * r.wce:.3e}")
    if config.method == "grid-bq":
        for n in n_grid(config):
            m = round(n ** (1.0 / config.d))
            if m >= 2 and not math.isclose(separation_radius(regular_grid(m, config.d)), 1.0 / m, rel_tol=1e-12):
                problems.append(f"grid m={m}: separation radius differs from 1/m")
    return problems

