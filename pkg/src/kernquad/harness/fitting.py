"""Log-log rate fits of replicate-averaged errors."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

__all__ = ["FitError", "RateFit", "aggregate", "aggregate_and_fit", "fit_groups"]

MAX_MISSING_FRACTION = 0.2


class FitError(ValueError):
    """Not enough usable data to fit a rate."""


class TooManyFailures(FitError):
    """More than 20% of the replicates at some sample size failed."""


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    n_min: int
    points_used: int


def aggregate(records) -> dict[int, float]:
    """Mean absolute error per ``n`` over the non-missing replicates."""
    by_n: dict[int, list] = defaultdict(list)
    for r in records:
        by_n[r.n].append(r.abs_error)
    out = {}
    for n in sorted(by_n):
        vals = by_n[n]
        present = [v for v in vals if v is not None]
        if len(vals) - len(present) > MAX_MISSING_FRACTION * len(vals):
            raise TooManyFailures(f"n={n}: {len(vals) - len(present)} of {len(vals)} replicates failed")
        if present:
            out[n] = float(np.mean(present))
    return out


def aggregate_and_fit(records, n_min: int) -> RateFit:
    """Least-squares line through ``(log2 n, log2 mean error)`` for ``n >= n_min``."""
    # failure threshold applies at every n, including those below n_min
    means = {n: e for n, e in aggregate(records).items() if n >= n_min}
    if len(means) < 2:
        raise FitError(f"need at least two sample sizes n >= {n_min}, got {len(means)}")
    ns = np.array(sorted(means), dtype=float)
    errs = np.array([means[n] for n in sorted(means)])
    if np.any(errs <= 0.0):
        raise FitError("mean error is zero at some n; log-log fit undefined")
    slope, intercept = np.polyfit(np.log2(ns), np.log2(errs), 1)
    return RateFit(float(slope), float(intercept), n_min, len(ns))


def fit_groups(records, n_min: int) -> dict[tuple[str, int, int], RateFit]:
    """One fit per ``(method, assumed_order, smoothness_s)`` group."""
    groups = defaultdict(list)
    for r in records:
        groups[(r.method, r.assumed_order, r.smoothness_s)].append(r)
    return {key: aggregate_and_fit(recs, n_min) for key, recs in sorted(groups.items())}
