"""Quadrature node sets on the unit cube and simple geometry diagnostics."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial.distance import pdist

from .kernels import frac, korobov_eval_1d

__all__ = [
    "GeneratorVector",
    "PointSet",
    "cbc_construct",
    "cbc_criterion",
    "diameter",
    "is_prime",
    "next_prime",
    "random_shift",
    "rank1_lattice",
    "read_generator",
    "regular_grid",
    "sample_iid_uniform",
    "separation_radius",
    "torus_separation_radius",
    "write_generator",
]

MAX_GRID_POINTS = 10_000_000


@dataclass(frozen=True, eq=False)
class PointSet:
    """An immutable ``(n, dim)`` array of points in ``[0, 1)^dim``."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float, copy=True)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError(f"point array must have shape (n>=1, d>=1), got {pts.shape}")
        if np.any(pts < 0.0) or np.any(pts >= 1.0):
            raise ValueError("point coordinates must lie in [0, 1)")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return np.array_equal(self.points, other.points)

    __hash__ = None


@dataclass(frozen=True)
class GeneratorVector:
    """Generator ``z`` of a rank-1 lattice with a prime number ``n`` of points."""

    n: int
    z: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "z", tuple(int(v) for v in self.z))
        if not is_prime(self.n):
            raise ValueError(f"lattice size n={self.n} is not prime")
        if not self.z:
            raise ValueError("generator vector must have at least one component")
        if any(not 1 <= v <= self.n - 1 for v in self.z):
            raise ValueError(f"generator components must lie in 1..{self.n - 1}")

    @property
    def dim(self) -> int:
        return len(self.z)


def is_prime(n: int) -> bool:
    if n < 2 or int(n) != n:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def next_prime(n: int) -> int:
    """Smallest prime ``>= n``."""
    p = max(2, int(n))
    while not is_prime(p):
        p += 1
    return p


def sample_iid_uniform(n: int, d: int, seed: int) -> PointSet:
    if n < 1 or d < 1:
        raise ValueError("n and d must be >= 1")
    rng = np.random.default_rng(seed)
    return PointSet(rng.random((n, d)))


def rank1_lattice(gen: GeneratorVector) -> PointSet:
    """Points ``{i z / n}`` for ``i = 1..n``; the last point is the origin."""
    i = np.arange(1, gen.n + 1, dtype=np.int64)[:, None]
    z = np.asarray(gen.z, dtype=np.int64)[None, :]
    # integer modulus keeps the points exact multiples of 1/n
    return PointSet(((i * z) % gen.n) / gen.n)


def cbc_criterion(n: int, z, alpha: int) -> float:
    """Squared worst-case error of the equal-weight lattice rule in the Korobov space.

    Uses the group structure of the lattice:
    ``-1 + (1/n) sum_{i=0}^{n-1} prod_j k_alpha({i z_j / n}, 0)``.
    """
    i = np.arange(n, dtype=np.int64)[:, None]
    z = np.asarray(z, dtype=np.int64)[None, :]
    vals = korobov_eval_1d(alpha, ((i * z) % n) / n, 0.0)
    return float(-1.0 + np.mean(np.prod(vals, axis=1)))


def _argmin_first(values: np.ndarray, rtol: float = 1e-12) -> int:
    # near-ties (equal up to round-off) resolve to the smallest candidate
    best = values.min()
    slack = rtol * max(abs(best), 1.0)
    return int(np.flatnonzero(values <= best + slack)[0])


def cbc_construct(n: int, d: int, alpha: int) -> GeneratorVector:
    """Component-by-component search for a lattice generator vector.

    Each new component is the candidate in ``1..n-1`` minimising the squared
    worst-case error with earlier components held fixed. Costs ``O(d n^2)``.
    """
    if not is_prime(n):
        raise ValueError(f"n={n} is not prime")
    if d < 1:
        raise ValueError("d must be >= 1")
    table = korobov_eval_1d(alpha, np.arange(n) / n, 0.0)
    i = np.arange(n, dtype=np.int64)
    cand = np.arange(1, n, dtype=np.int64) if n > 2 else np.array([1], dtype=np.int64)
    prod = np.ones(n)
    z: list[int] = []
    for _ in range(d):
        # rows: candidates, cols: lattice index
        scores = (table[np.outer(cand, i) % n] @ prod) / n - 1.0
        c = int(cand[_argmin_first(scores)])
        z.append(c)
        prod = prod * table[(i * c) % n]
    return GeneratorVector(n, tuple(z))


def random_shift(ps: PointSet, seed: int, *, shift=None) -> PointSet:
    """Shift every point by one uniform offset modulo 1.

    ``shift`` overrides the random draw (testing hook).
    """
    if shift is None:
        shift = np.random.default_rng(seed).random(ps.dim)
    shift = np.broadcast_to(np.asarray(shift, dtype=float), (ps.dim,))
    return PointSet(frac(ps.points + shift))


def regular_grid(m: int, d: int) -> PointSet:
    """Midpoint grid with coordinates ``(i + 1/2) / m`` along each axis."""
    if m < 1 or d < 1:
        raise ValueError("m and d must be >= 1")
    if m**d > MAX_GRID_POINTS:
        raise OverflowError(f"grid of {m}^{d} points exceeds limit {MAX_GRID_POINTS}")
    axis = (np.arange(m) + 0.5) / m
    mesh = np.meshgrid(*([axis] * d), indexing="ij")
    return PointSet(np.stack([g.ravel() for g in mesh], axis=1))


def separation_radius(ps: PointSet) -> float:
    """Minimum pairwise Euclidean distance between nodes."""
    if ps.n < 2:
        raise ValueError("separation radius needs at least two points")
    return float(pdist(ps.points).min())


def torus_separation_radius(ps: PointSet) -> float:
    """Minimum pairwise distance in the wrap-around metric of the unit torus."""
    if ps.n < 2:
        raise ValueError("separation radius needs at least two points")
    diff = np.abs(ps.points[:, None, :] - ps.points[None, :, :])
    diff = np.minimum(diff, 1.0 - diff)
    dist = np.sqrt(np.sum(diff**2, axis=-1))
    return float(dist[np.triu_indices(ps.n, k=1)].min())


def diameter(ps: PointSet) -> float:
    if ps.n < 2:
        return 0.0
    return float(pdist(ps.points).max())


def write_generator(path, gen: GeneratorVector, alpha: int) -> None:
    """Write ``"n d alpha"`` then the generator components on a second line."""
    text = f"{gen.n} {gen.dim} {alpha}\n{' '.join(str(v) for v in gen.z)}\n"
    Path(path).write_text(text)


def read_generator(path) -> tuple[GeneratorVector, int]:
    lines = Path(path).read_text().split("\n")
    try:
        n, d, alpha = (int(tok) for tok in lines[0].split())
        z = tuple(int(tok) for tok in lines[1].split())
    except (IndexError, ValueError) as exc:
        raise ValueError(f"malformed generator file {path}: {exc}") from exc
    if len(z) != d:
        raise ValueError(f"generator file {path} declares d={d} but lists {len(z)} components")
    return GeneratorVector(n, z), alpha
