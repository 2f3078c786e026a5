"""Reproducing kernels on the unit cube.

Korobov kernels are evaluated in closed form through Bernoulli polynomials,
their fractional powers through a truncated Fourier (Mercer) series, and
Matérn kernels through the usual half-integer closed forms.

All evaluation routines broadcast over numpy arrays; the last axis of a point
array is the coordinate axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "BERNOULLI_COEFFS",
    "KorobovKernel",
    "MaternKernel",
    "PowerKernel",
    "bernoulli_poly",
    "frac",
    "korobov_eval",
    "korobov_eval_1d",
    "korobov_scale",
    "matern_eval",
    "mercer_truncated",
    "periodic_distance",
    "power_tail_bound",
]

# Monomial coefficients of B_m, lowest degree first. Even degrees serve the
# Korobov kernels; odd ones are used by the Bernoulli ridge test integrands.
_F = Fraction
BERNOULLI_COEFFS: dict[int, tuple[Fraction, ...]] = {
    1: (_F(-1, 2), _F(1)),
    2: (_F(1, 6), _F(-1), _F(1)),
    3: (_F(0), _F(1, 2), _F(-3, 2), _F(1)),
    4: (_F(-1, 30), _F(0), _F(1), _F(-2), _F(1)),
    5: (_F(0), _F(-1, 6), _F(0), _F(5, 3), _F(-5, 2), _F(1)),
    6: (_F(1, 42), _F(0), _F(-1, 2), _F(0), _F(5, 2), _F(-3), _F(1)),
    7: (_F(0), _F(1, 6), _F(0), _F(-7, 6), _F(0), _F(7, 2), _F(-7, 2), _F(1)),
    8: (_F(-1, 30), _F(0), _F(2, 3), _F(0), _F(-7, 3), _F(0), _F(14, 3), _F(-4), _F(1)),
    9: (_F(0), _F(-3, 10), _F(0), _F(2), _F(0), _F(-21, 5), _F(0), _F(6), _F(-9, 2), _F(1)),
    10: (
        _F(5, 66), _F(0), _F(-3, 2), _F(0), _F(5), _F(0), _F(-7), _F(0),
        _F(15, 2), _F(-5), _F(1),
    ),
    11: (
        _F(0), _F(5, 6), _F(0), _F(-11, 2), _F(0), _F(11), _F(0), _F(-11),
        _F(0), _F(55, 6), _F(-11, 2), _F(1),
    ),
    12: (
        _F(-691, 2730), _F(0), _F(5), _F(0), _F(-33, 2), _F(0), _F(22), _F(0),
        _F(-33, 2), _F(0), _F(11), _F(-6), _F(1),
    ),
}

_FLOAT_COEFFS = {m: np.array([float(c) for c in cs]) for m, cs in BERNOULLI_COEFFS.items()}

MAX_ALPHA = max(BERNOULLI_COEFFS) // 2
SUPPORTED_NU = (0.5, 1.5, 2.5)


def frac(x):
    """Componentwise fractional part, guaranteed to land in [0, 1)."""
    x = np.asarray(x, dtype=float)
    r = x - np.floor(x)
    # x slightly below an integer can round up to exactly 1.0; +0.0 drops -0.0
    return np.where(r >= 1.0, 0.0, r) + 0.0


def bernoulli_poly(m: int, x):
    """Evaluate the Bernoulli polynomial ``B_m`` for ``1 <= m <= 12``."""
    if m not in _FLOAT_COEFFS:
        raise ValueError(
            f"Bernoulli degree {m} unsupported: need m in 1..12 "
            f"(Korobov order alpha in 1..{MAX_ALPHA})"
        )
    x = np.asarray(x, dtype=float)
    # Horner, highest degree first
    out = np.zeros_like(x)
    for c in _FLOAT_COEFFS[m][::-1]:
        out = out * x + c
    return out if out.ndim else float(out)


def korobov_scale(alpha: int) -> float:
    """The factor ``(-1)^(alpha-1) (2 pi)^(2 alpha) / (2 alpha)!``."""
    return (-1) ** (alpha - 1) * (2 * math.pi) ** (2 * alpha) / math.factorial(2 * alpha)


def _check_alpha(alpha: int) -> None:
    if int(alpha) != alpha or not 1 <= alpha <= MAX_ALPHA:
        raise ValueError(f"Korobov order alpha={alpha} outside supported range 1..{MAX_ALPHA}")


def periodic_distance(x, y):
    """``min({x - y}, 1 - {x - y})``, computed identically for (x, y) and (y, x)."""
    t = frac(np.abs(np.subtract(x, y)))
    return np.minimum(t, 1.0 - t)


def korobov_eval_1d(alpha: int, x, y):
    """One-dimensional Korobov kernel ``1 + scale * B_{2 alpha}({x - y})``.

    Even Bernoulli polynomials are symmetric about 1/2, so the polynomial is
    evaluated at the periodic distance; this makes the kernel exactly
    symmetric in floating point.
    """
    _check_alpha(alpha)
    return 1.0 + korobov_scale(alpha) * bernoulli_poly(2 * alpha, periodic_distance(x, y))


def korobov_eval(alpha: int, d: int, x, y):
    """Tensor-product Korobov kernel on ``[0,1]^d``.

    ``x`` and ``y`` must have trailing dimension ``d``; leading dimensions
    broadcast against each other.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[-1:] != (d,) or y.shape[-1:] != (d,):
        raise ValueError(f"expected points of dimension {d}, got shapes {x.shape} and {y.shape}")
    out = np.prod(korobov_eval_1d(alpha, x, y), axis=-1)
    return out if out.ndim else float(out)


def power_tail_bound(alpha: int, theta: float, n_terms: int) -> float:
    """Upper bound ``2 N^(1-2 alpha theta) / (2 alpha theta - 1)`` on the truncated tail."""
    p = 2.0 * alpha * theta
    if p <= 1.0:
        raise ValueError("tail bound requires 2*alpha*theta > 1")
    return 2.0 * n_terms ** (1.0 - p) / (p - 1.0)


def mercer_truncated(alpha: int, theta: float, n_terms: int, x, y, *, chunk: int = 2048):
    """Truncated Fourier series of the ``theta``-th power of the 1-d Korobov kernel.

    Returns ``1 + sum_{i<=N} i^(-2 alpha theta) [c_i(x) c_i(y) + s_i(x) s_i(y)]``
    with ``c_i = sqrt(2) cos(2 pi i .)`` and ``s_i = sqrt(2) sin(2 pi i .)``.
    """
    if not 0.0 < theta <= 1.0:
        raise ValueError(f"theta={theta} must lie in (0, 1]")
    if 2.0 * alpha * theta <= 1.0:
        raise ValueError("2*alpha*theta <= 1: power series is not summable")
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    xs, ys = x[..., None], y[..., None]
    total = np.zeros(x.shape)
    root2 = math.sqrt(2.0)
    for start in range(1, n_terms + 1, chunk):
        i = np.arange(start, min(start + chunk, n_terms + 1), dtype=float)
        ax, ay = 2 * math.pi * i * xs, 2 * math.pi * i * ys
        terms = (root2 * np.cos(ax)) * (root2 * np.cos(ay)) + (root2 * np.sin(ax)) * (root2 * np.sin(ay))
        total += np.sum(terms * i ** (-2.0 * alpha * theta), axis=-1)
    out = 1.0 + total
    return out if out.ndim else float(out)


def _pairwise(x, y, d: int):
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    if x.shape[1] != d or y.shape[1] != d:
        raise ValueError(f"expected points of dimension {d}")
    return x[:, None, :], y[None, :, :]


@dataclass(frozen=True)
class KorobovKernel:
    """Korobov kernel of smoothness ``alpha`` on ``[0,1]^dim``."""

    alpha: int
    dim: int = 1

    def __post_init__(self):
        _check_alpha(self.alpha)
        if self.dim < 1:
            raise ValueError("dim must be >= 1")

    def __call__(self, x, y):
        return korobov_eval(self.alpha, self.dim, x, y)

    def gram(self, x, y=None):
        """Kernel matrix between the rows of ``x`` and ``y`` (``y`` defaults to ``x``)."""
        xa, ya = _pairwise(x, x if y is None else y, self.dim)
        return np.prod(korobov_eval_1d(self.alpha, xa, ya), axis=-1)

    def diag(self, x):
        k0 = 1.0 + korobov_scale(self.alpha) * bernoulli_poly(2 * self.alpha, 0.0)
        return np.full(np.atleast_2d(x).shape[0], k0**self.dim)


@dataclass(frozen=True)
class PowerKernel:
    """``theta``-th power of a Korobov kernel, evaluated by truncated series."""

    base: KorobovKernel
    theta: float
    truncation: int = 10_000

    def __post_init__(self):
        if not 0.0 < self.theta <= 1.0:
            raise ValueError(f"theta={self.theta} must lie in (0, 1]")
        if 2.0 * self.base.alpha * self.theta <= 1.0:
            raise ValueError("2*alpha*theta <= 1: power series is not summable")

    @property
    def dim(self) -> int:
        return self.base.dim

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        vals = mercer_truncated(self.base.alpha, self.theta, self.truncation, x, y)
        out = np.prod(vals, axis=-1)
        return out if out.ndim else float(out)

    def gram(self, x, y=None):
        xa, ya = _pairwise(x, x if y is None else y, self.dim)
        return np.prod(mercer_truncated(self.base.alpha, self.theta, self.truncation, xa, ya), axis=-1)

    def tail_bound(self) -> float:
        """Per-coordinate truncation error bound."""
        return power_tail_bound(self.base.alpha, self.theta, self.truncation)


def _matern_profile(nu: float, t):
    if nu == 0.5:
        return np.exp(-t)
    if nu == 1.5:
        a = math.sqrt(3.0) * t
        return (1.0 + a) * np.exp(-a)
    if nu == 2.5:
        a = math.sqrt(5.0) * t
        return (1.0 + a + a * a / 3.0) * np.exp(-a)
    raise ValueError(f"Matérn smoothness nu={nu} unsupported; supported: {SUPPORTED_NU}")


@dataclass(frozen=True)
class MaternKernel:
    """Unit-variance Matérn kernel whose RKHS is the Sobolev space of order ``r``.

    The smoothness parameter is ``nu = r - dim/2`` and must be one of
    1/2, 3/2, 5/2.
    """

    r: int
    dim: int = 1
    lengthscale: float = 1.0

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if not self.r > self.dim / 2:
            raise ValueError(f"need r > dim/2 for an RKHS, got r={self.r}, dim={self.dim}")
        if self.lengthscale <= 0:
            raise ValueError("lengthscale must be positive")
        if self.nu not in SUPPORTED_NU:
            raise ValueError(f"nu = r - dim/2 = {self.nu} unsupported; supported: {SUPPORTED_NU}")

    @property
    def nu(self) -> float:
        return self.r - self.dim / 2

    def __call__(self, x, y):
        return matern_eval(self, x, y)

    def gram(self, x, y=None):
        xa, ya = _pairwise(x, x if y is None else y, self.dim)
        t = np.sqrt(np.sum((xa - ya) ** 2, axis=-1))
        return _matern_profile(self.nu, t / self.lengthscale)

    def diag(self, x):
        return np.ones(np.atleast_2d(x).shape[0])


def matern_eval(kernel: MaternKernel, x, y):
    """Evaluate a half-integer Matérn kernel at Euclidean distance ``|x - y|``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[-1:] != (kernel.dim,) or y.shape[-1:] != (kernel.dim,):
        raise ValueError(f"expected points of dimension {kernel.dim}")
    t = np.sqrt(np.sum((x - y) ** 2, axis=-1))
    out = _matern_profile(kernel.nu, t / kernel.lengthscale)
    return out if out.ndim else float(out)
