"""Quadrature weights: equal weights and Bayesian-quadrature solves."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, eigh

from .pointsets import PointSet

__all__ = [
    "ConditioningError",
    "QuadratureRule",
    "SolveReport",
    "bq_weights_constrained",
    "bq_weights_exact",
    "solve_spd",
    "uniform_weights",
]

JITTER_LEVELS = (0.0, 1e-12, 1e-11, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4)
BISECTION_RTOL = 1e-6
BISECTION_MAXITER = 200


class ConditioningError(RuntimeError):
    """A linear solve failed even at the largest diagonal jitter."""


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes plus real weights; weights may be negative and need not sum to one."""

    points: PointSet
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float, copy=True).ravel()
        if w.shape[0] != self.points.n:
            raise ValueError(f"{w.shape[0]} weights for {self.points.n} points")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def apply(self, values) -> float:
        """Weighted sum of integrand values at the nodes."""
        return float(np.dot(self.weights, values))


@dataclass(frozen=True)
class SolveReport:
    weights: np.ndarray
    jitter_used: float
    lam: float
    weight_sq_norm: float


def uniform_weights(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be >= 1")
    return np.full(n, 1.0 / n)


def solve_spd(matrix, rhs) -> tuple[np.ndarray, float]:
    """Cholesky solve with escalating diagonal jitter.

    Tries jitter 0, then ``eps * trace / n`` for ``eps = 1e-12 .. 1e-4``
    (factor 10 per step). Returns the solution and the jitter that worked.
    """
    a = np.asarray(matrix, dtype=float)
    b = np.asarray(rhs, dtype=float)
    n = a.shape[0]
    scale = np.trace(a) / n
    for eps in JITTER_LEVELS:
        jitter = eps * scale
        try:
            factor = cho_factor(a + jitter * np.eye(n), lower=True, check_finite=True)
        except LinAlgError:
            continue
        x = cho_solve(factor, b)
        if np.all(np.isfinite(x)):
            return x, float(jitter)
    raise ConditioningError(
        f"Cholesky failed for {n}x{n} matrix at maximum jitter {JITTER_LEVELS[-1]:g}*trace/n"
    )


def bq_weights_exact(gram, kmean) -> SolveReport:
    """Weights minimising the worst-case error for fixed nodes: ``gram @ w = kmean``."""
    w, jitter = solve_spd(gram, kmean)
    return SolveReport(weights=w, jitter_used=jitter, lam=0.0, weight_sq_norm=float(w @ w))


def bq_weights_constrained(gram, kmean, bound: float) -> SolveReport:
    """Worst-case-error minimiser subject to ``sum w_i^2 <= bound``.

    When the unconstrained minimiser is infeasible, the constrained one is the
    ridge solution ``(gram + lam I) w = kmean`` whose squared norm equals
    ``bound``; ``lam`` is found by bisection.
    """
    if bound <= 0:
        raise ValueError("bound must be positive")
    exact = bq_weights_exact(gram, kmean)
    if exact.weight_sq_norm <= bound:
        return exact

    mu, vecs = eigh(np.asarray(gram, dtype=float))
    proj = vecs.T @ np.asarray(kmean, dtype=float)

    def weights_at(lam):
        shifted = mu + lam
        if np.any(shifted <= 0.0):
            return None
        return vecs @ (proj / shifted)

    def sq_norm(lam):
        w = weights_at(lam)
        return np.inf if w is None else float(w @ w)

    lo, hi = 0.0, max(float(np.trace(gram)) / len(mu), 1e-300)
    for _ in range(BISECTION_MAXITER):
        if sq_norm(hi) < bound:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise ConditioningError("could not bracket the ridge parameter")

    for _ in range(BISECTION_MAXITER):
        mid = 0.5 * (lo + hi)
        norm = sq_norm(mid)
        if abs(norm - bound) <= BISECTION_RTOL * bound:
            w = weights_at(mid)
            return SolveReport(weights=w, jitter_used=0.0, lam=mid, weight_sq_norm=float(w @ w))
        if norm > bound:
            lo = mid
        else:
            hi = mid
    raise ConditioningError(f"ridge bisection did not converge in {BISECTION_MAXITER} iterations")
