import math

import numpy as np
import pytest

from kernquad.kernels import KorobovKernel
from kernquad.pointsets import sample_iid_uniform
from kernquad.wce import EmbeddingSpec, wce_eval
from kernquad.weights import (
    ConditioningError,
    QuadratureRule,
    bq_weights_constrained,
    bq_weights_exact,
    solve_spd,
    uniform_weights,
)

K1_DIAG = 1 + math.pi**2 / 3


def korobov_problem(n, alpha, seed):
    ps = sample_iid_uniform(n, 1, seed)
    return ps, KorobovKernel(alpha).gram(ps.points), np.ones(n)


def wce(ps, w, alpha):
    return wce_eval(KorobovKernel(alpha, ps.dim), EmbeddingSpec(), QuadratureRule(ps, w)).e


class TestUniform:
    def test_values(self):
        assert np.array_equal(uniform_weights(1), [1.0])
        assert np.array_equal(uniform_weights(4), [0.25] * 4)

    @pytest.mark.parametrize("n", [1, 3, 17, 1024])
    def test_square_norm(self, n):
        w = uniform_weights(n)
        assert float(w @ w) == pytest.approx(1 / n, rel=1e-15)


class TestSolveSpd:
    def test_identity(self):
        x, jitter = solve_spd(np.eye(2), [1.0, 2.0])
        assert np.allclose(x, [1, 2]) and jitter == 0.0

    def test_diagonal(self):
        x, jitter = solve_spd([[2.0, 0.0], [0.0, 0.5]], [2.0, 1.0])
        assert np.allclose(x, [1, 2]) and jitter == 0.0

    def test_rank_deficient_needs_jitter(self):
        a = np.array([[1.0, 1.0], [1.0, 1.0]])
        b = np.array([1.0, 1.0])
        x, jitter = solve_spd(a, b)
        assert jitter > 0
        assert np.linalg.norm(a @ x - b) <= 1e-4 * np.linalg.norm(b)

    def test_indefinite_fails(self):
        with pytest.raises(ConditioningError):
            solve_spd([[1.0, 0.0], [0.0, -1.0]], [1.0, 1.0])


class TestBqExact:
    def test_single_point(self):
        rep = bq_weights_exact([[K1_DIAG]], [1.0])
        assert rep.weights[0] == pytest.approx(1 / K1_DIAG, rel=1e-14)
        assert rep.weights[0] == pytest.approx(0.2331074, abs=1e-7)
        assert rep.lam == 0.0

    def test_identity_gram(self):
        z = np.array([0.3, -1.2, 2.0])
        assert np.allclose(bq_weights_exact(np.eye(3), z).weights, z)

    @pytest.mark.parametrize("n", [8, 32])
    @pytest.mark.parametrize("alpha", [1, 2, 3])
    def test_optimality_and_first_order_condition(self, n, alpha):
        for seed in range(20):
            ps, gram, z = korobov_problem(n, alpha, seed)
            rep = bq_weights_exact(gram, z)
            assert wce(ps, rep.weights, alpha) <= wce(ps, uniform_weights(n), alpha) + 1e-12
            if rep.jitter_used == 0:
                assert np.linalg.norm(gram @ rep.weights - z) <= 1e-8 * np.linalg.norm(z)
            assert rep.weight_sq_norm == pytest.approx(float(np.sum(rep.weights**2)), rel=1e-12)


class TestBqConstrained:
    def test_feasible_exact_solution_is_returned(self):
        exact = bq_weights_exact([[K1_DIAG]], [1.0])
        rep = bq_weights_constrained([[K1_DIAG]], [1.0], 4.0)
        assert rep.lam == 0.0
        assert np.array_equal(rep.weights, exact.weights)

    def test_ridge_path_monotone(self):
        _, gram, z = korobov_problem(16, 2, 5)
        norms = [np.sum(np.linalg.solve(gram + lam * np.eye(16), z) ** 2) for lam in np.geomspace(1e-6, 1e3, 40)]
        assert all(a >= b for a, b in zip(norms, norms[1:]))

    def test_tiny_bound_is_hit(self):
        rng = np.random.default_rng(8)
        pts = (0.4 + 0.01 * rng.random(8))[:, None]
        gram = KorobovKernel(3).gram(pts)
        rep = bq_weights_constrained(gram, np.ones(8), 1e-6)
        assert rep.lam > 0
        assert rep.weight_sq_norm == pytest.approx(1e-6, rel=1e-6)

    @pytest.mark.parametrize("seed", range(10))
    def test_feasibility_and_ordering(self, seed):
        n, alpha = 32, 3
        ps, gram, z = korobov_problem(n, alpha, seed)
        bound = 4 / n
        rep = bq_weights_constrained(gram, z, bound)
        assert rep.weight_sq_norm <= bound * (1 + 1e-6)
        exact = bq_weights_exact(gram, z)
        assert wce(ps, rep.weights, alpha) >= wce(ps, exact.weights, alpha) - 1e-12
        if exact.weight_sq_norm <= bound:
            assert np.array_equal(rep.weights, exact.weights)

    def test_rejects_nonpositive_bound(self):
        with pytest.raises(ValueError):
            bq_weights_constrained(np.eye(2), [1.0, 1.0], 0.0)


class TestQuadratureRule:
    def test_length_mismatch(self):
        ps = sample_iid_uniform(3, 1, 0)
        with pytest.raises(ValueError):
            QuadratureRule(ps, [1.0, 2.0])

    def test_non_finite(self):
        ps = sample_iid_uniform(2, 1, 0)
        with pytest.raises(ValueError):
            QuadratureRule(ps, [1.0, np.nan])
