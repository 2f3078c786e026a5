import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from kernquad.kernels import (
    BERNOULLI_COEFFS,
    KorobovKernel,
    MaternKernel,
    PowerKernel,
    bernoulli_poly,
    frac,
    korobov_eval,
    korobov_eval_1d,
    matern_eval,
    mercer_truncated,
    power_tail_bound,
)

unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
K1_DIAG = 1 + math.pi**2 / 3
K1_HALF = 1 - math.pi**2 / 6


def mercer_oracle(alpha, x, y, n_terms):
    """Literal partial sum of the Fourier expansion, one term at a time."""
    total = 1.0
    for i in range(1, n_terms + 1):
        c = 2 * math.cos(2 * math.pi * i * x) * math.cos(2 * math.pi * i * y)
        s = 2 * math.sin(2 * math.pi * i * x) * math.sin(2 * math.pi * i * y)
        total += (c + s) / i ** (2 * alpha)
    return total


class TestBernoulli:
    @pytest.mark.parametrize("m", sorted(BERNOULLI_COEFFS))
    def test_coefficients_match_sympy(self, m):
        x = sympy.symbols("x")
        expected = sympy.Poly(sympy.bernoulli(m, x), x).all_coeffs()[::-1]
        assert [sympy.Rational(c.numerator, c.denominator) for c in BERNOULLI_COEFFS[m]] == expected

    @pytest.mark.parametrize(
        "m, x, expected",
        [(2, 0.0, 1 / 6), (2, 0.5, -1 / 12), (4, 0.0, -1 / 30)],
    )
    def test_values(self, m, x, expected):
        assert bernoulli_poly(m, x) == pytest.approx(expected, abs=1e-15)

    @pytest.mark.parametrize("m", [0, 13, 14])
    def test_unsupported_degree(self, m):
        with pytest.raises(ValueError, match="unsupported"):
            bernoulli_poly(m, 0.2)

    def test_vectorised(self):
        xs = np.linspace(0, 1, 7)
        assert np.allclose(bernoulli_poly(6, xs), [bernoulli_poly(6, x) for x in xs])


class TestKorobov:
    def test_diagonal_alpha1(self):
        assert korobov_eval_1d(1, 0.4, 0.4) == pytest.approx(K1_DIAG, abs=1e-12)
        assert K1_DIAG == pytest.approx(4.289868, abs=1e-6)

    def test_half_period_alpha1(self):
        assert korobov_eval_1d(1, 0.0, 0.5) == pytest.approx(K1_HALF, abs=1e-12)
        assert K1_HALF == pytest.approx(-0.644934, abs=1e-6)

    def test_alpha2_matches_series_oracle(self):
        expected = mercer_oracle(2, 0.3, 0.7, 100_000)
        assert korobov_eval_1d(2, 0.3, 0.7) == pytest.approx(expected, abs=1e-12)

    def test_product_form(self):
        assert korobov_eval(1, 2, [0.2, 0.2], [0.2, 0.2]) == pytest.approx(K1_DIAG**2, abs=1e-12)
        assert K1_DIAG**2 == pytest.approx(18.40297, abs=1e-5)
        assert korobov_eval(1, 2, [0, 0], [0, 0.5]) == pytest.approx(K1_DIAG * K1_HALF, abs=1e-12)

    def test_one_dimension_equals_1d(self):
        assert korobov_eval(3, 1, [0.1], [0.8]) == korobov_eval_1d(3, 0.1, 0.8)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            korobov_eval(1, 2, [0.1], [0.2, 0.3])

    @pytest.mark.parametrize("alpha", [0, 7])
    def test_alpha_range(self, alpha):
        with pytest.raises(ValueError):
            KorobovKernel(alpha)

    def test_gram_matches_pointwise(self, rng):
        k = KorobovKernel(2, 2)
        x, y = rng.random((5, 2)), rng.random((4, 2))
        g = k.gram(x, y)
        assert g.shape == (5, 4)
        assert g[3, 1] == pytest.approx(k(x[3], y[1]), abs=1e-14)
        assert np.allclose(k.diag(x), np.diag(k.gram(x)))

    @settings(max_examples=200, deadline=None)
    @given(unit, unit, unit, st.integers(1, 6))
    def test_shift_invariance(self, x, y, delta, alpha):
        a = korobov_eval_1d(alpha, x, y)
        b = korobov_eval_1d(alpha, frac(x + delta), frac(y + delta))
        assert a == pytest.approx(b, abs=1e-12 * max(1.0, abs(a)) * 10)


class TestSymmetryAndPsd:
    def test_symmetry_exact(self, rng):
        x, y = rng.random((1000, 2)), rng.random((1000, 2))
        kernels = [KorobovKernel(a, 2) for a in (1, 2, 3)] + [MaternKernel(2, 1), MaternKernel(3, 1)]
        for k in kernels:
            xa, ya = (x[:, :1], y[:, :1]) if k.dim == 1 else (x, y)
            assert np.array_equal(k(xa, ya), k(ya, xa))

    def test_power_kernel_symmetry(self, rng):
        k = PowerKernel(KorobovKernel(2), 0.75, truncation=500)
        x, y = rng.random((50, 1)), rng.random((50, 1))
        assert np.array_equal(k(x, y), k(y, x))

    @pytest.mark.parametrize(
        "kernel",
        [KorobovKernel(1, 1), KorobovKernel(3, 2), MaternKernel(1, 1), MaternKernel(3, 1), MaternKernel(2, 3)],
        ids=repr,
    )
    def test_numerical_psd(self, kernel, rng):
        for _ in range(20):
            n = int(rng.integers(2, 33))
            g = kernel.gram(rng.random((n, kernel.dim)))
            assert np.linalg.eigvalsh(g).min() >= -1e-8 * np.trace(g)

    def test_frac_range(self):
        vals = frac(np.array([-1e-18, -0.0, 1.0, 2.5, -0.25, 0.999999999999]))
        assert np.all((vals >= 0) & (vals < 1))
        assert not np.signbit(vals[1])


class TestMercer:
    @pytest.mark.parametrize("alpha", [1, 2, 3])
    def test_theta_one_matches_closed_form(self, alpha, rng):
        x, y = rng.random(50), rng.random(50)
        bound = power_tail_bound(alpha, 1.0, 10_000)
        diff = np.abs(mercer_truncated(alpha, 1.0, 10_000, x, y) - korobov_eval_1d(alpha, x, y))
        assert diff.max() <= bound + 1e-9

    def test_half_power_is_lower_order_kernel(self, rng):
        x, y = rng.random(50), rng.random(50)
        diff = np.abs(mercer_truncated(2, 0.5, 10_000, x, y) - korobov_eval_1d(1, x, y))
        assert diff.max() <= power_tail_bound(1, 1.0, 10_000) + 1e-9

    def test_diagonal_at_zero_limit(self):
        val = mercer_truncated(1, 1.0, 10_000, 0.0, 0.0)
        assert val == pytest.approx(K1_DIAG, abs=2.0 / 10_000)
        assert val < K1_DIAG

    def test_matches_literal_oracle(self):
        assert mercer_truncated(2, 0.8, 300, 0.11, 0.57) == pytest.approx(
            1.0 + sum(
                2 * math.cos(2 * math.pi * i * (0.11 - 0.57)) / i ** 3.2 for i in range(1, 301)
            ),
            abs=1e-12,
        )

    def test_not_summable(self):
        with pytest.raises(ValueError, match="summable"):
            mercer_truncated(1, 0.5, 100, 0.1, 0.2)
        with pytest.raises(ValueError):
            PowerKernel(KorobovKernel(1), 0.4)

    def test_diagonal_monotone_in_theta(self):
        thetas = np.linspace(0.3, 1.0, 15)
        diag = [mercer_truncated(2, t, 2000, 0.4, 0.4) for t in thetas]
        assert all(a >= b for a, b in zip(diag, diag[1:]))

    def test_power_kernel_tensor(self):
        k = PowerKernel(KorobovKernel(2, 2), 0.5, truncation=10_000)
        val = k([0.1, 0.6], [0.3, 0.2])
        ref = korobov_eval(1, 2, [0.1, 0.6], [0.3, 0.2])
        tail = k.tail_bound()
        assert abs(val - ref) <= 2 * K1_DIAG * tail + tail**2


class TestMatern:
    def test_unit_variance(self):
        for r in (1, 2, 3):
            assert matern_eval(MaternKernel(r), [0.4], [0.4]) == 1.0

    def test_nu_half(self):
        k = MaternKernel(1, lengthscale=0.7)
        assert k.nu == 0.5
        assert matern_eval(k, [0.1], [0.6]) == pytest.approx(math.exp(-0.5 / 0.7), rel=1e-14)

    def test_nu_three_halves_at_lengthscale(self):
        k = MaternKernel(2, lengthscale=0.4)
        expected = (1 + math.sqrt(3)) * math.exp(-math.sqrt(3))
        assert matern_eval(k, [0.0], [0.4]) == pytest.approx(expected, rel=1e-14)
        assert expected == pytest.approx(0.4833577, abs=1e-7)

    def test_nu_five_halves(self):
        t = 0.3
        a = math.sqrt(5) * t
        assert matern_eval(MaternKernel(3), [0.0], [t]) == pytest.approx((1 + a + a * a / 3) * math.exp(-a))

    def test_multidimensional_distance(self):
        k = MaternKernel(2, dim=3)  # nu = 1/2
        assert k([0, 0, 0], [0.3, 0.4, 0.0]) == pytest.approx(math.exp(-0.5))

    @pytest.mark.parametrize("r, dim", [(2, 2), (4, 1), (1, 2)])
    def test_unsupported(self, r, dim):
        with pytest.raises(ValueError):
            MaternKernel(r, dim)
