"""Worst-case integration error in an RKHS, for the uniform measure on [0,1]^d.

The squared worst-case error of a rule ``sum_i w_i f(X_i)`` is

    initial_sq - 2 * sum_i w_i z_i + sum_ij w_i w_j k(X_i, X_j)

where ``z_i`` is the kernel mean embedding of the uniform measure evaluated
at ``X_i`` and ``initial_sq`` its squared RKHS norm. For Korobov kernels both
are 1. For other kernels the uniform measure is replaced by a tensor
trapezoid reference measure, so every quantity stays a genuine squared norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .kernels import KorobovKernel, PowerKernel
from .weights import QuadratureRule

__all__ = [
    "CLOSED_FORM",
    "NUMERIC",
    "EmbeddingSpec",
    "NumericalInconsistencyError",
    "WceReport",
    "kernel_mean",
    "kernel_mean_korobov",
    "kernel_mean_numeric",
    "reference_grid",
    "wce_bruteforce",
    "wce_eval",
]

CLOSED_FORM = "korobov-uniform-closed-form"
NUMERIC = "numeric-reference"
RADICAND_TOL = 1e-10
MIN_RESOLUTION = 64


class NumericalInconsistencyError(ArithmeticError):
    """Squared worst-case error came out materially negative."""


@dataclass(frozen=True)
class EmbeddingSpec:
    kind: str = CLOSED_FORM
    resolution: int = 2048

    def __post_init__(self):
        if self.kind not in (CLOSED_FORM, NUMERIC):
            raise ValueError(f"unknown embedding kind {self.kind!r}")
        if self.kind == NUMERIC and self.resolution < MIN_RESOLUTION:
            raise ValueError(f"reference resolution must be >= {MIN_RESOLUTION}")


@dataclass(frozen=True)
class WceReport:
    initial_sq: float
    cross: float
    quad: float
    e: float

    @property
    def radicand(self) -> float:
        return self.initial_sq - 2.0 * self.cross + self.quad


def _radicand_to_e(radicand: float) -> float:
    if radicand < -RADICAND_TOL:
        raise NumericalInconsistencyError(f"squared worst-case error {radicand:.3e} is negative")
    return math.sqrt(max(0.0, radicand))


def kernel_mean_korobov(y):
    """Embedding of the uniform measure under any Korobov kernel: identically 1."""
    y = np.atleast_2d(np.asarray(y, dtype=float))
    out = np.ones(y.shape[0])
    return out if out.shape[0] > 1 else 1.0


@lru_cache(maxsize=32)
def reference_grid(dim: int, resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """Tensor composite-trapezoid nodes and weights on ``[0,1]^dim``.

    ``resolution`` is the number of nodes per axis. Returned arrays are
    read-only so the cache can be shared.
    """
    if dim > 2:
        raise ValueError("numeric reference grid supports dim <= 2")
    if resolution < MIN_RESOLUTION:
        raise ValueError(f"resolution must be >= {MIN_RESOLUTION}")
    axis = np.linspace(0.0, 1.0, resolution)
    w1 = np.full(resolution, 1.0 / (resolution - 1))
    w1[[0, -1]] *= 0.5
    mesh = np.meshgrid(*([axis] * dim), indexing="ij")
    nodes = np.stack([g.ravel() for g in mesh], axis=1)
    weights = w1
    for _ in range(dim - 1):
        weights = np.outer(weights, w1).ravel()
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def kernel_mean_numeric(kernel, y, resolution: int = 2048, *, block: int = 4096):
    """Trapezoid approximation of ``integral k(x, y) dx`` over ``[0,1]^d``."""
    nodes, weights = reference_grid(kernel.dim, resolution)
    y = np.atleast_2d(np.asarray(y, dtype=float))
    out = np.empty(y.shape[0])
    for start in range(0, y.shape[0], block):
        out[start:start + block] = weights @ kernel.gram(nodes, y[start:start + block])
    return out if out.shape[0] > 1 else float(out[0])


@lru_cache(maxsize=32)
def _initial_sq_numeric(kernel, resolution: int) -> float:
    nodes, weights = reference_grid(kernel.dim, resolution)
    means = np.atleast_1d(kernel_mean_numeric(kernel, nodes, resolution))
    return float(weights @ means)


def _is_korobov(kernel) -> bool:
    return isinstance(kernel, (KorobovKernel, PowerKernel))


def kernel_mean(kernel, embedding: EmbeddingSpec, points) -> tuple[float, np.ndarray]:
    """Return ``(initial_sq, z)`` for the given embedding at ``points``."""
    points = np.atleast_2d(points)
    if embedding.kind == CLOSED_FORM:
        if not _is_korobov(kernel):
            raise ValueError("closed-form embedding is only valid for Korobov kernels")
        return 1.0, np.ones(points.shape[0])
    z = np.atleast_1d(kernel_mean_numeric(kernel, points, embedding.resolution))
    return _initial_sq_numeric(kernel, embedding.resolution), z


def wce_eval(kernel, embedding: EmbeddingSpec, rule: QuadratureRule, *, gram=None, kmean=None) -> WceReport:
    """Decomposed worst-case error of ``rule``.

    ``gram`` and ``kmean`` may be passed in when the caller already has them.
    """
    pts = rule.points.points
    w = rule.weights
    if kmean is None:
        initial, z = kernel_mean(kernel, embedding, pts)
    else:
        initial, _ = kernel_mean(kernel, embedding, pts[:1])
        z = np.asarray(kmean, dtype=float)
    if gram is None:
        gram = kernel.gram(pts)
    cross = float(w @ z)
    quad = float(w @ (gram @ w))
    radicand = initial - 2.0 * cross + quad
    return WceReport(initial_sq=initial, cross=cross, quad=quad, e=_radicand_to_e(radicand))


def wce_bruteforce(kernel, embedding: EmbeddingSpec, rule: QuadratureRule) -> float:
    """Same quantity as :func:`wce_eval`, by literal loops over node pairs."""
    pts = rule.points.points
    w = rule.weights
    n = len(w)
    if n > 256:
        raise ValueError("brute-force oracle limited to n <= 256")
    if embedding.kind == CLOSED_FORM:
        if not _is_korobov(kernel):
            raise ValueError("closed-form embedding is only valid for Korobov kernels")
        initial = 1.0
        means = [1.0] * n
    else:
        nodes, ref_w = reference_grid(kernel.dim, embedding.resolution)
        initial = 0.0
        for node, wt in zip(nodes, ref_w):
            initial += wt * float(kernel_mean_numeric(kernel, node, embedding.resolution))
        means = [float(kernel_mean_numeric(kernel, pts[i], embedding.resolution)) for i in range(n)]

    total = initial
    for i in range(n):
        total -= 2.0 * w[i] * means[i]
    for i in range(n):
        for j in range(n):
            total += w[i] * w[j] * float(kernel(pts[i], pts[j]))
    return _radicand_to_e(total)
