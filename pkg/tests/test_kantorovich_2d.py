import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from baskakov.basis import BasisParams, DomainError, basis_weight
from baskakov.catalog import CATALOG, LIPSCHITZ, function_names, get_function, monomial_2d
from baskakov.kantorovich_1d import Function1D
from baskakov.kantorovich_2d import (
    Function2D,
    MissingPartialError,
    apply_2d,
    apply_2d_grid,
    central_moment_2d_closed,
    delta_bound,
    partial_x,
    partial_y,
    test_moment_2d_closed as moment_closed,
)
from baskakov.kantorovich_1d import central_moment_closed

ONE = Function1D.monomial(0)


def brute_sin_exp(n, x, y, kmax=2000):
    """Double sum for sin(u) exp(-v) with exact cell integrals and direct weights (a = 0)."""
    m = n + 1
    p = BasisParams(n, 0.0)
    k = np.arange(kmax + 1)
    wx = np.array([basis_weight(p, int(i), x) for i in k])
    wy = np.array([basis_weight(p, int(i), y) for i in k])
    sin_avg = m * (np.cos(k / m) - np.cos((k + 1) / m))
    exp_avg = m * (np.exp(-k / m) - np.exp(-(k + 1) / m))
    return float(np.dot(wx, sin_avg) * np.dot(wy, exp_avg))


def nonseparable(f):
    """Same function with the product decomposition hidden, forcing the double series."""
    return Function2D(f.evaluator, f.growth, f.label + "/series", partials=f.partials)


class TestFunction2D:
    def test_partials_from_factors(self):
        f = monomial_2d(2, 1)
        np.testing.assert_allclose(f.partial("x")(1.5, 2.0), 6.0)
        np.testing.assert_allclose(f.partial("xxy")(1.5, 2.0), 2.0)
        np.testing.assert_allclose(f.partial("yx")(1.5, 2.0), 3.0)
        assert f.growth == (2, 1)

    def test_missing_partial(self):
        f = Function2D(lambda u, v: u * v, (1, 1), "bare")
        with pytest.raises(MissingPartialError):
            f.partial("x")
        assert not f.has_partials("x")

    def test_bad_partial_name(self):
        with pytest.raises((KeyError, ValueError)):
            monomial_2d(1, 1).partial("z")

    def test_negative_growth(self):
        with pytest.raises(ValueError):
            Function2D(lambda u, v: u, (-1, 0))

    @pytest.mark.parametrize("name", function_names())
    def test_catalog_partials_match_differences(self, name):
        assert get_function(name).check_partials() <= 1e-5

    def test_catalog_lookup(self):
        assert set(LIPSCHITZ) <= set(CATALOG)
        with pytest.raises(KeyError, match="list-functions"):
            get_function("nope")


class TestApply2D:
    @pytest.mark.parametrize("x,y", [(0.0, 0.0), (1.0, 3.0), (10.0, 0.5)])
    def test_constant(self, x, y):
        p = BasisParams(6, 1.5)
        assert apply_2d(p, p, get_function("constant"), x, y) == pytest.approx(1.0, abs=1e-12)
        assert apply_2d(p, p, nonseparable(get_function("constant")), x, y) == pytest.approx(1.0, abs=1e-12)

    def test_product_example(self):
        p = BasisParams(4, 1.0)
        assert apply_2d(p, p, monomial_2d(1, 1), 1.0, 1.0) == pytest.approx(1.0, abs=1e-13)

    def test_sin_exp_brute_force(self):
        p = BasisParams(100, 0.0)
        got = apply_2d(p, p, get_function("sin-exp"), 1.0, 1.0)
        np.testing.assert_allclose(got, brute_sin_exp(100, 1.0, 1.0), atol=1e-9)
        assert abs(got - math.sin(1) * math.exp(-1)) < abs(
            apply_2d(BasisParams(10), BasisParams(10), get_function("sin-exp"), 1.0, 1.0) - math.sin(1) * math.exp(-1)
        )

    def test_mismatched_shape_parameter(self):
        with pytest.raises(ValueError):
            apply_2d(BasisParams(4, 1.0), BasisParams(4, 2.0), monomial_2d(1, 1), 1.0, 1.0)

    @pytest.mark.parametrize("name", ["e_{1,1}", "e_{2,1}", "exp-decay", "sin-product", "affine"])
    @pytest.mark.parametrize("n1,n2,a,x,y", [(5, 8, 0.0, 0.5, 2.0), (20, 20, 2.0, 1.0, 1.0), (3, 40, 1.0, 4.0, 0.0)])
    def test_product_and_double_series_agree(self, name, n1, n2, a, x, y):
        f = get_function(name)
        p1, p2 = BasisParams(n1, a), BasisParams(n2, a)
        np.testing.assert_allclose(apply_2d(p1, p2, f, x, y), apply_2d(p1, p2, nonseparable(f), x, y), atol=2e-12, rtol=1e-12)

    def test_nonseparable_against_one_dim_reduction(self):
        # 1/(1+u+v) at y = 0 only sees the v-cell [0, 1/(n2+1)]
        p1, p2 = BasisParams(7, 1.0), BasisParams(9, 1.0)
        f = get_function("inv-sum")
        m2 = 10
        g = Function1D(lambda u: m2 * np.log((1 + u + 1 / m2) / (1 + u)), 0)
        from baskakov.kantorovich_1d import apply_1d

        np.testing.assert_allclose(apply_2d(p1, p2, f, 1.3, 0.0), apply_1d(p1, g, 1.3), rtol=1e-12)

    def test_grid_matches_pointwise(self):
        p = BasisParams(12, 0.5)
        f = get_function("sin-exp")
        xs, ys = [0.0, 1.0, 2.5], [0.5, 3.0]
        grid = apply_2d_grid(p, p, f, xs, ys)
        pts = np.array([[apply_2d(p, p, f, x, y) for y in ys] for x in xs])
        np.testing.assert_allclose(grid, pts, rtol=1e-13)

    @settings(max_examples=25, deadline=None)
    @given(n=st.integers(1, 40), a=st.floats(0, 3), x=st.floats(0, 5), y=st.floats(0, 5), c=st.floats(-2, 2))
    def test_positive_and_linear(self, n, a, x, y, c):
        p = BasisParams(n, a)
        kf = apply_2d(p, p, get_function("exp-decay"), x, y)
        kg = apply_2d(p, p, monomial_2d(1, 1), x, y)
        assert kf >= 0 and kg >= 0
        h = Function2D(lambda u, v: np.exp(-u - v) + c * u * v, (1, 1))
        np.testing.assert_allclose(apply_2d(p, p, h, x, y), kf + c * kg, atol=1e-11 * (1 + abs(c) * kg))


class TestClosedForms:
    def test_examples(self):
        assert moment_closed(BasisParams(4, 1.0), BasisParams(4, 1.0), 0, 1, 2.0, 1.0) == pytest.approx(1.0, rel=1e-15)
        assert moment_closed(BasisParams(9, 0.0), BasisParams(9, 0.0), 2, 0, 2.0, 7.0) == pytest.approx(3.96333333333, rel=1e-10)
        assert moment_closed(BasisParams(1, 0.0), BasisParams(1, 0.0), 0, 3, 5.0, 0.0) == pytest.approx(1 / 32, rel=1e-15)

    def test_rejects_high_order(self):
        p = BasisParams(3)
        with pytest.raises(ValueError):
            moment_closed(p, p, 4, 0, 1.0, 1.0)

    def test_central_examples(self):
        p = BasisParams(9, 0.0)
        assert central_moment_2d_closed(p, p, "u", 1, 0.5, 3.0) == 0.0
        assert central_moment_2d_closed(p, p, "v", 2, 3.0, 0.0) == pytest.approx(1 / 300, rel=1e-14)
        for n in (5, 50):
            for a in (0.0, 2.0):
                q = BasisParams(n, a)
                for x in (0.0, 1.0, 5.0):
                    assert central_moment_2d_closed(q, q, "u", 2, x, 0.0) == central_moment_closed(q, 2, x)
        with pytest.raises(ValueError):
            central_moment_2d_closed(p, p, "w", 1, 1.0, 1.0)

    def test_oracle_equivalence_grid(self):
        pts = (0.0, 0.5, 1.0, 2.0)
        for n1 in (5, 10, 50):
            for n2 in (5, 10, 50):
                for a in (0.0, 1.0, 2.0):
                    p1, p2 = BasisParams(n1, a), BasisParams(n2, a)
                    for x in pts:
                        for y in pts:
                            for i, j in ((1, 0), (0, 1), (2, 0), (0, 2), (3, 0), (0, 3), (1, 1)):
                                got = apply_2d(p1, p2, monomial_2d(i, j), x, y)
                                assert abs(got - moment_closed(p1, p2, i, j, x, y)) <= 1e-10
                            for r in (1, 2):
                                fu = Function2D.separable(Function1D.monomial(r, shift=x), ONE)
                                fv = Function2D.separable(ONE, Function1D.monomial(r, shift=y))
                                assert abs(apply_2d(p1, p2, fu, x, y) - central_moment_2d_closed(p1, p2, "u", r, x, y)) <= 1e-10
                                assert abs(apply_2d(p1, p2, fv, x, y) - central_moment_2d_closed(p1, p2, "v", r, x, y)) <= 1e-10


class TestDeltaBound:
    def test_origin(self):
        b = delta_bound(BasisParams(9, 0.0), 0.0)
        assert b.phi == 0.0
        np.testing.assert_allclose([b.delta_sq, b.bound], [0.1, 0.01], rtol=1e-14)
        assert central_moment_closed(BasisParams(9, 0.0), 2, 0.0) <= b.bound

    def test_value(self):
        b = delta_bound(BasisParams(4, 1.0), 1.0)
        np.testing.assert_allclose([b.delta_sq, b.bound], [2.8, 0.56], rtol=1e-14)

    def test_limit(self):
        for x in (0.5, 2.0):
            b = delta_bound(BasisParams(10**8, 0.0), x)
            np.testing.assert_allclose(b.bound * (10**8 + 1), x * (1 + x), rtol=1e-7)

    def test_second_moment_bound_grid(self):
        one = ONE
        for n in (5, 10, 50, 100):
            for a in (0.0, 1.0, 2.0):
                p = BasisParams(n, a)
                for x in (0.0, 0.5, 1.0, 2.0, 5.0):
                    f = Function2D.separable(Function1D.monomial(2, shift=x), one)
                    assert apply_2d(p, p, f, x, 1.0) <= delta_bound(p, x).bound + 1e-12


class TestPartials:
    def test_constant(self):
        p = BasisParams(10, 1.0)
        assert abs(partial_x(p, p, get_function("constant"), 1.0, 1.0)) <= 1e-10
        assert abs(partial_y(p, p, nonseparable(get_function("constant")), 1.0, 1.0)) <= 1e-10

    @pytest.mark.parametrize("n,a,x", [(4, 1.0, 1.0), (25, 0.0, 0.3), (60, 2.0, 3.0)])
    def test_linear(self, n, a, x):
        p = BasisParams(n, a)
        expected = (n + a / (1 + x) ** 2) / (n + 1)
        np.testing.assert_allclose(partial_x(p, p, monomial_2d(1, 0), x, 2.0), expected, rtol=1e-10)
        np.testing.assert_allclose(partial_y(p, p, monomial_2d(0, 1), 2.0, x), expected, rtol=1e-10)

    def test_square_finite_difference(self):
        p, h = BasisParams(50, 1.0), 1e-5
        f = monomial_2d(2, 0)
        fd = (apply_2d(p, p, f, 1.5 + h, 1.0) - apply_2d(p, p, f, 1.5 - h, 1.0)) / (2 * h)
        np.testing.assert_allclose(partial_x(p, p, f, 1.5, 1.0), fd, rtol=1e-5)

    @pytest.mark.parametrize("name", ["sin-sum", "inv-sum", "sin-exp"])
    def test_series_path_finite_difference(self, name):
        p1, p2, h = BasisParams(15, 1.0), BasisParams(12, 1.0), 1e-5
        f = nonseparable(get_function(name))
        fdx = (apply_2d(p1, p2, f, 1.2 + h, 0.7) - apply_2d(p1, p2, f, 1.2 - h, 0.7)) / (2 * h)
        fdy = (apply_2d(p1, p2, f, 1.2, 0.7 + h) - apply_2d(p1, p2, f, 1.2, 0.7 - h)) / (2 * h)
        np.testing.assert_allclose(partial_x(p1, p2, f, 1.2, 0.7), fdx, rtol=1e-6, atol=1e-9)
        np.testing.assert_allclose(partial_y(p1, p2, f, 1.2, 0.7), fdy, rtol=1e-6, atol=1e-9)

    def test_open_quadrant_only(self):
        p = BasisParams(5, 1.0)
        with pytest.raises(DomainError):
            partial_x(p, p, monomial_2d(1, 0), 0.0, 1.0)
        with pytest.raises(DomainError):
            partial_y(p, p, monomial_2d(0, 1), 1.0, 0.0)
        # the other coordinate may sit on the boundary
        assert math.isfinite(partial_x(p, p, monomial_2d(1, 1), 1.0, 0.0))
