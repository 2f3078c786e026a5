"""Convergence exponents predicted for misspecified kernel quadrature.

All exponents are reported as positive decay rates: an exponent ``a`` means
the error behaves like ``n^(-a)``.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["TheoreticalRate", "predicted_rate", "predicted_rate_sobolev", "method_prediction"]


@dataclass(frozen=True)
class TheoreticalRate:
    b: float
    c: float
    theta: float

    def __post_init__(self):
        if self.b <= 0:
            raise ValueError("b must be positive")
        if not 0.0 < self.c <= 0.5:
            raise ValueError("c must lie in (0, 1/2]")
        if not 0.0 < self.theta <= 1.0:
            raise ValueError("theta must lie in (0, 1]")

    @property
    def exponent(self) -> float:
        return predicted_rate(self.b, self.c, self.theta)


def predicted_rate(b: float, c: float, theta: float) -> float:
    """Decay exponent ``theta*b - (1/2 - c)(1 - theta)`` for integrands in the theta-power space."""
    return theta * b - (0.5 - c) * (1.0 - theta)


def predicted_rate_sobolev(b: float, c: float, s: int, r: int) -> float:
    """Decay exponent ``b s/r - (1/2 - c)(1 - s/r)`` for ``W_2^s`` integrands, ``s <= r``."""
    if s > r:
        raise ValueError(f"integrand order s={s} exceeds assumed order r={r}")
    return predicted_rate(b, c, s / r)


def method_prediction(method: str, order: int, s: int, d: int) -> float:
    """Exponent printed next to an empirical slope.

    Korobov-based methods take ``b = order`` (assumed smoothness),
    ``theta = min(1, s/order)`` and ``c = 1/2``; Monte Carlo is always 1/2;
    the Matérn grid rule takes the optimal ``b = r/d``.
    """
    if method == "mc":
        return 0.5
    if method == "grid-bq":
        return predicted_rate_sobolev(order / d, 0.5, min(s, order), order)
    return predicted_rate(order, 0.5, min(1.0, s / order))
