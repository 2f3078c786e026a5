"""Test integrands on [0,1]^d with exactly known integrals.

Three families are provided:

``kernel-section``
    ``x -> prod_j k_s(x_j, y_j)``, a Korobov kernel section. Its Fourier
    coefficients decay like ``|h|^(-2s)``, so it is considerably smoother
    than its label ``s`` suggests.
``bernoulli-ridge``
    ``x -> prod_j [1 + sign_s (2 pi)^s / s! * B_s({x_j - y_j})]``. Fourier
    coefficients have modulus exactly ``|h|^(-s)``; for even ``s`` this is
    the Korobov kernel section of order ``s/2``. The default for
    convergence experiments since its decay matches the label.
``matern-section``
    A Matérn kernel section on the non-periodic cube; its integral is taken
    against the same trapezoid reference measure used for the embeddings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..kernels import MaternKernel, bernoulli_poly, frac, korobov_eval_1d
from ..wce import kernel_mean_numeric, reference_grid

__all__ = [
    "FAMILIES",
    "Integrand",
    "constant_integrand",
    "make_integrand",
    "make_matern_integrand",
    "make_ridge_integrand",
    "ridge_sign",
]

DEFAULT_ANCHOR = 0.3
FAMILIES = ("bernoulli-ridge", "kernel-section", "matern-section", "constant")


@dataclass(frozen=True, eq=False)
class Integrand:
    dim: int
    smoothness_s: int
    anchor: np.ndarray
    true_integral: float
    eval: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    family: str = "kernel-section"
    # RKHS norm in the Korobov space of order s; only known for kernel sections
    rkhs_norm: float | None = None

    def __call__(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if x.shape[1] != self.dim:
            raise ValueError(f"integrand expects points of dimension {self.dim}")
        return self.eval(x)


def _anchor(anchor, d: int) -> np.ndarray:
    if anchor is None:
        anchor = DEFAULT_ANCHOR
    a = np.broadcast_to(np.asarray(anchor, dtype=float), (d,)).copy()
    a.setflags(write=False)
    return a


def make_integrand(s: int, d: int, anchor=None) -> Integrand:
    """Korobov kernel section ``prod_j k_s(x_j, y_j)``; its integral is 1."""
    y = _anchor(anchor, d)

    def f(x):
        return np.prod(korobov_eval_1d(s, x, y), axis=1)

    norm = math.sqrt(float(np.prod(korobov_eval_1d(s, y, y))))
    return Integrand(d, s, y, 1.0, f, "kernel-section", norm)


def ridge_sign(s: int) -> int:
    """Sign making the ridge equal ``1 + 2 sum cos`` (even s) or ``1 - 2 sum sin`` (odd s)."""
    return (-1) ** (math.ceil(s / 2) + 1)


def make_ridge_integrand(s: int, d: int, anchor=None) -> Integrand:
    """Bernoulli ridge with Fourier decay ``|h|^(-s)``; its integral is 1."""
    if not 1 <= s <= 12:
        raise ValueError(f"ridge smoothness s={s} outside 1..12")
    y = _anchor(anchor, d)
    scale = ridge_sign(s) * (2 * math.pi) ** s / math.factorial(s)

    def f(x):
        return np.prod(1.0 + scale * bernoulli_poly(s, frac(x - y)), axis=1)

    return Integrand(d, s, y, 1.0, f, "bernoulli-ridge")


def make_matern_integrand(s: int, d: int, anchor=None, resolution: int = 2048) -> Integrand:
    """Section of the Matérn kernel of Sobolev order ``s`` (``nu = s - d/2``).

    The reference integral uses the trapezoid measure at ``resolution`` nodes
    per axis, matching the numeric embedding used for the rule's weights.
    """
    y = _anchor(anchor, d)
    kernel = MaternKernel(r=s, dim=d)
    truth = float(kernel_mean_numeric(kernel, y, resolution))

    def f(x):
        return kernel.gram(x, y[None, :])[:, 0]

    return Integrand(d, s, y, truth, f, "matern-section")


def constant_integrand(d: int) -> Integrand:
    """``f = 1``; every rule whose weights sum to one integrates it exactly."""
    return Integrand(d, 0, _anchor(0.0, d), 1.0, lambda x: np.ones(x.shape[0]), "constant")


def trapezoid_integral(integrand: Integrand, resolution: int) -> float:
    """Reference integral on the trapezoid grid (test oracle helper)."""
    nodes, weights = reference_grid(integrand.dim, resolution)
    return float(weights @ integrand(nodes))
