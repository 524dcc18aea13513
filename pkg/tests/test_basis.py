import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from baskakov.basis import (
    BasisParams,
    DomainError,
    WindowCapError,
    basis_weight,
    basis_weight_derivative,
    log_poly_P,
    pochhammer_log,
    poly_P,
    truncate_basis,
    window_weights,
)


def direct_weight(n, a, k, x):
    """Weight from the defining sum, in 50-digit arithmetic."""
    mpmath.mp.dps = 50
    x = mpmath.mpf(x)
    p = mpmath.fsum(mpmath.binomial(k, i) * mpmath.rf(n, i) * mpmath.mpf(a) ** (k - i) for i in range(k + 1))
    lam = a * x / (1 + x)
    return float(mpmath.exp(-lam) * p / mpmath.factorial(k) * x**k / (1 + x) ** (n + k))


class TestParams:
    def test_rejects_bad_n(self):
        for n in (0, -1, 2.5, True):
            with pytest.raises(ValueError):
                BasisParams(n, 0.0)

    def test_rejects_negative_a(self):
        with pytest.raises(ValueError):
            BasisParams(3, -0.1)

    def test_moments_of_index(self):
        p = BasisParams(7, 2.0)
        assert p.poisson_rate(1.0) == 1.0
        assert p.mean_index(1.0) == 8.0
        assert p.index_variance(1.0) == 7 * 2 + 1


class TestPochhammer:
    def test_empty_product(self):
        assert pochhammer_log(5, 0) == 0.0

    @pytest.mark.parametrize("n,i", [(2, 3), (1, 4)])
    def test_small_products(self, n, i):
        np.testing.assert_allclose(pochhammer_log(n, i), math.log(24), rtol=1e-14)


class TestPolyP:
    def test_k0(self):
        assert poly_P(0, BasisParams(4, 3.0)) == 1.0

    def test_hand_expansions(self):
        assert poly_P(1, BasisParams(3, 2.0)) == pytest.approx(5.0, rel=1e-14)
        assert poly_P(2, BasisParams(2, 1.0)) == pytest.approx(11.0, rel=1e-14)

    def test_recurrence(self):
        p = BasisParams(6, 1.7)
        vals = [poly_P(k, p) for k in range(30)]
        for k in range(1, 29):
            rhs = (k + p.n + p.a) * vals[k] - p.a * k * vals[k - 1]
            np.testing.assert_allclose(vals[k + 1], rhs, rtol=1e-12)

    def test_overflow_signalled(self):
        p = BasisParams(50, 2.0)
        assert math.isfinite(log_poly_P(400, p))
        with pytest.raises(OverflowError):
            poly_P(400, p)


class TestBasisWeight:
    def test_origin(self):
        p = BasisParams(3, 1.5)
        assert basis_weight(p, 2, 0.0) == 0.0
        assert basis_weight(p, 0, 0.0) == 1.0

    def test_classical_value(self):
        assert basis_weight(BasisParams(2, 0.0), 1, 1.0) == pytest.approx(0.25, rel=1e-14)

    @pytest.mark.parametrize("n,a,k,x", [(3, 0.5, 7, 0.3), (20, 2.0, 35, 1.5), (1, 5.0, 0, 4.0), (12, 1.0, 60, 3.0)])
    def test_against_high_precision(self, n, a, k, x):
        np.testing.assert_allclose(basis_weight(BasisParams(n, a), k, x), direct_weight(n, a, k, x), rtol=1e-11)

    def test_sums_to_one(self):
        p = BasisParams(10, 2.0)
        tb = truncate_basis(p, 1.5, 1e-14)
        total = math.fsum(basis_weight(p, int(k), 1.5) for k in tb.indices)
        assert abs(total - 1.0) <= 1e-12 + tb.tail_bound

    def test_negative_x_rejected(self):
        with pytest.raises(ValueError):
            basis_weight(BasisParams(2, 0.0), 0, -1.0)

    @settings(max_examples=60, deadline=None)
    @given(
        n=st.integers(1, 200),
        a=st.floats(0, 10),
        k=st.integers(0, 500),
        x=st.floats(0, 50),
    )
    def test_nonnegative(self, n, a, k, x):
        assert basis_weight(BasisParams(n, a), k, x) >= 0.0


class TestConvolution:
    @pytest.mark.parametrize("n", [1, 5, 20, 50])
    @pytest.mark.parametrize("a", [0.0, 0.5, 3.0])
    @pytest.mark.parametrize("x", [0.2, 1.0, 4.0])
    def test_matches_direct_formula(self, n, a, x):
        p = BasisParams(n, a)
        w = window_weights(p, x, 0, 201)
        direct = np.array([basis_weight(p, k, x) for k in range(201)])
        np.testing.assert_allclose(w, direct, atol=1e-12, rtol=1e-9)

    def test_poisson_negative_binomial_split(self):
        # the index law is Poisson(lambda) + NegBinomial(n, 1/(1+x))
        p, x = BasisParams(4, 2.0), 0.8
        lam = p.poisson_rate(x)
        k = np.arange(60)
        conv = np.array([sum(stats.poisson.pmf(j, lam) * stats.nbinom.pmf(kk - j, 4, 1 / 1.8) for j in range(kk + 1)) for kk in k])
        np.testing.assert_allclose(window_weights(p, x, 0, 60), conv, rtol=1e-12, atol=1e-300)

    def test_window_offset(self):
        p = BasisParams(30, 1.0)
        full = window_weights(p, 2.0, 0, 150)
        np.testing.assert_allclose(window_weights(p, 2.0, 40, 90), full[40:90], rtol=1e-13)


class TestTruncate:
    def test_origin_window(self):
        tb = truncate_basis(BasisParams(7, 2.0), 0.0, 1e-14)
        assert tb.window == [(0, 1.0)]
        assert tb.tail_bound == 0.0

    def test_mass_against_wide_sum(self):
        p = BasisParams(50, 1.0)
        tb = truncate_basis(p, 2.0, 1e-12)
        assert 1 - 1e-12 <= tb.mass <= 1 + 1e-14
        wide = window_weights(p, 2.0, 0, 10 * 50 * 2)
        outside = math.fsum(wide) - math.fsum(wide[tb.start : tb.stop])
        assert outside <= tb.tail_bound

    def test_growth_window_reproduces_fourth_moment(self):
        p, x = BasisParams(20, 0.0), 1.0
        tb = truncate_basis(p, x, 1e-10, growth=4)
        m = p.n + 1
        k = np.arange(0, 4000)
        wide = window_weights(p, x, 0, 4000)
        g = ((k + 1) / m) ** 4
        inside = np.dot(tb.weights, g[tb.start : tb.stop])
        np.testing.assert_allclose(inside, np.dot(wide, g), atol=1e-9)
        assert np.dot(wide, g) - inside <= tb.weighted_tail_bound

    @pytest.mark.parametrize("n", [1, 10, 100, 500])
    @pytest.mark.parametrize("a", [0.0, 0.5, 1.0, 2.0, 5.0])
    @pytest.mark.parametrize("x", [0.0, 0.1, 1.0, 3.0, 10.0])
    def test_partition_of_unity(self, n, a, x):
        tb = truncate_basis(BasisParams(n, a), x, 1e-13)
        assert abs(tb.mass - 1.0) <= 1e-12 + tb.tail_bound

    def test_cap(self):
        with pytest.raises(WindowCapError):
            truncate_basis(BasisParams(100, 1.0), 50.0, 1e-12, cap=100)

    def test_weights_read_only(self):
        tb = truncate_basis(BasisParams(5, 1.0), 1.0)
        with pytest.raises(ValueError):
            tb.weights[0] = 0.0

    def test_bad_eps(self):
        with pytest.raises(ValueError):
            truncate_basis(BasisParams(5, 1.0), 1.0, 0.0)


class TestDerivative:
    def test_balanced_index(self):
        assert basis_weight_derivative(BasisParams(3, 0.0), 3, 1.0) == 0.0

    def test_analytic_value(self):
        expected = -(5 / 4) * math.exp(-0.5) / 4
        np.testing.assert_allclose(basis_weight_derivative(BasisParams(2, 1.0), 0, 1.0), expected, rtol=1e-14)

    def test_origin_rejected(self):
        with pytest.raises(DomainError):
            basis_weight_derivative(BasisParams(2, 1.0), 0, 0.0)

    def test_finite_difference_point(self):
        p, k, x, h = BasisParams(5, 2.0), 4, 0.7, 1e-6
        fd = (basis_weight(p, k, x + h) - basis_weight(p, k, x - h)) / (2 * h)
        np.testing.assert_allclose(basis_weight_derivative(p, k, x), fd, rtol=1e-6)

    @pytest.mark.parametrize("x", np.linspace(0.1, 5, 8))
    @pytest.mark.parametrize("n,a", [(4, 0.0), (15, 1.0), (40, 3.0)])
    def test_finite_differences_grid(self, x, n, a):
        p = BasisParams(n, a)
        h = 1e-6 * max(1.0, x)
        mode = int(p.mean_index(x))
        for k in (0, mode, mode + 3):
            fd = (basis_weight(p, k, x + h) - basis_weight(p, k, x - h)) / (2 * h)
            d = basis_weight_derivative(p, k, x)
            np.testing.assert_allclose(d, fd, rtol=1e-5, atol=1e-12)

    @pytest.mark.parametrize("x", [0.3, 1.0, 6.0])
    def test_derivatives_sum_to_zero(self, x):
        tb = truncate_basis(BasisParams(25, 1.5), x, 1e-14, growth=1)
        assert abs(math.fsum(tb.derivative_weights())) <= 1e-10

    def test_window_derivative_matches_pointwise(self):
        p = BasisParams(9, 0.5)
        tb = truncate_basis(p, 1.2)
        pointwise = [basis_weight_derivative(p, int(k), 1.2) for k in tb.indices]
        np.testing.assert_allclose(tb.derivative_weights(), pointwise, rtol=1e-10, atol=1e-300)
