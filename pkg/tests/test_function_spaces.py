import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from baskakov.catalog import LIPSCHITZ, get_function, monomial_2d
from baskakov.function_spaces import (
    EvaluationGrid,
    complete_modulus,
    partial_modulus,
    second_modulus,
    steklov,
    steklov_function,
    steklov_partial,
    sup_norm,
    weight,
    weight_2d,
    weighted_modulus,
    weighted_sup_norm,
)
from baskakov.kantorovich_2d import Function2D

FINE = EvaluationGrid.uniform(3.0, 31, 0.005)


def const(c=2.5):
    return Function2D(lambda u, v: c + 0 * u * v, (0, 0), "const")


X = Function2D(lambda u, v: u + 0 * v, (1, 0), "x")
XPY = Function2D(lambda u, v: u + v, (0, 0), "x+y")


class TestGrid:
    def test_validation(self):
        with pytest.raises(ValueError):
            EvaluationGrid(np.array([0.0, -1.0]), np.array([0.0]))
        with pytest.raises(ValueError):
            EvaluationGrid(np.array([1.0, 1.0]), np.array([0.0]))
        with pytest.raises(ValueError):
            EvaluationGrid(np.array([]), np.array([0.0]))
        with pytest.raises(ValueError):
            EvaluationGrid(np.array([0.0]), np.array([0.0]), shift_resolution=0.0)

    def test_default_reaches_far(self):
        g = EvaluationGrid.default()
        assert g.x_points[0] == 0.0 and g.x_points[-1] == 1000.0
        assert "29pts" in g.describe()

    def test_shifts(self):
        g = EvaluationGrid.uniform(1.0, 5, 0.1)
        np.testing.assert_allclose(g.shifts(0.3), [0.1, 0.2, 0.3])
        assert len(g.shifts(0.0)) == 0
        assert len(g.shifts(100.0)) == g.max_shifts


class TestWeights:
    def test_values(self):
        assert weight(2, 3.0) == pytest.approx(0.1)
        assert weight(0, 7.0) == 0.5
        assert weight(1, 0.0) == 1.0
        np.testing.assert_allclose(weight_2d((0, 0), 3.0, 4.0), 0.25)


class TestNorms:
    def test_constant(self):
        assert weighted_sup_norm(const(), FINE) == pytest.approx(2.5 / 4)
        assert sup_norm(const(-3.0), FINE) == 3.0

    def test_zero(self):
        assert weighted_sup_norm(const(0.0), FINE) == 0.0

    def test_linear_approaches_half(self):
        vals = [weighted_sup_norm(X, EvaluationGrid.uniform(xm, 11)) for xm in (10, 100, 1000)]
        assert vals[0] < vals[1] < vals[2] <= 0.5
        np.testing.assert_allclose(vals[-1], 0.5, rtol=2e-3)

    def test_override_growth(self):
        assert weighted_sup_norm(X, FINE, (0, 0)) == pytest.approx(3.0 / 4)


class TestModuli:
    def test_constant_is_zero(self):
        f = const()
        assert weighted_modulus(f, 0.3, 0.2, FINE) == 0.0
        assert complete_modulus(f, 0.3, FINE) == 0.0
        assert partial_modulus(f, "x", 0.3, FINE) == 0.0
        assert second_modulus(f, 0.3, FINE) == 0.0

    def test_empty_step(self):
        assert weighted_modulus(XPY, 0.0, 0.0, FINE) == 0.0
        assert weighted_modulus(XPY, 0.2, 0.0, FINE) == 0.0

    def test_weighted_linear(self):
        np.testing.assert_allclose(weighted_modulus(XPY, 0.3, 0.2, FINE), 0.5 / 4, rtol=1e-12)

    def test_complete(self):
        np.testing.assert_allclose(complete_modulus(XPY, 0.1, FINE), math.sqrt(2) * 0.1, rtol=0.01)
        np.testing.assert_allclose(complete_modulus(X, 0.1, FINE), 0.1, rtol=0.01)

    def test_partial(self):
        y_only = Function2D(lambda u, v: v + 0 * u, (0, 1))
        assert partial_modulus(y_only, "x", 0.5, FINE) == 0.0
        sq = Function2D(lambda u, v: u**2 + 0 * v, (2, 0))
        g = EvaluationGrid.uniform(2.0, 21, 0.01)
        np.testing.assert_allclose(partial_modulus(sq, "x", 0.1, g), 0.41, rtol=0.01)
        with pytest.raises(ValueError):
            partial_modulus(sq, "z", 0.1, g)

    def test_second(self):
        assert second_modulus(lambda t: 3 * t + 1, 0.5, FINE) == pytest.approx(0.0, abs=1e-12)
        np.testing.assert_allclose(second_modulus(lambda t: t**2, 0.04, FINE), 0.08, rtol=0.01)
        sq = Function2D(lambda u, v: u**2 + 2 * v**2, (2, 2))
        np.testing.assert_allclose(second_modulus(sq, 0.04, FINE, axis="x"), 0.08, rtol=0.01)
        np.testing.assert_allclose(second_modulus(sq, 0.04, FINE), 0.16, rtol=0.01)

    @settings(max_examples=20, deadline=None)
    @given(t1=st.floats(0.01, 0.5), t2=st.floats(0.01, 0.5), name=st.sampled_from(["exp-decay", "inv-sum", "affine", "e_{1,1}"]))
    def test_monotone_in_step(self, t1, t2, name):
        # increments of these functions grow with the step, so the probe
        # at the endpoint dominates and the estimates are exactly monotone
        f = get_function(name)
        lo, hi = sorted((t1, t2))
        g = EvaluationGrid.uniform(3.0, 7, 0.01)
        assert complete_modulus(f, lo, g) <= complete_modulus(f, hi, g) + 1e-12
        assert partial_modulus(f, "y", lo, g) <= partial_modulus(f, "y", hi, g) + 1e-12
        assert weighted_modulus(f, lo, lo, g) <= weighted_modulus(f, hi, hi, g) + 1e-12
        assert second_modulus(f, lo, g) <= second_modulus(f, hi, g) + 1e-12

    @pytest.mark.parametrize("name", ["sin-product", "exp-decay", "affine", "inv-sum"])
    def test_subadditive(self, name):
        f = get_function(name)
        g = EvaluationGrid.uniform(3.0, 13, 0.01)
        for d in (0.05, 0.2):
            assert complete_modulus(f, 2 * d, g) <= 2 * complete_modulus(f, d, g) + 1e-6


class TestSteklov:
    def test_examples(self):
        assert steklov(const(), 0.3, 0.2, 1.0, 1.0) == pytest.approx(2.5)
        assert steklov(X, 0.3, 0.2, 1.0, 4.0) == pytest.approx(1.15)
        got = steklov(monomial_2d(1, 1), 0.2, 0.4, 1.0, 2.0)
        assert np.ndim(got) == 0
        np.testing.assert_allclose(got, 1.1 * 2.2, rtol=1e-14)

    def test_rejects_bad_steps(self):
        with pytest.raises(ValueError):
            steklov(X, 0.0, 1.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            steklov_partial(X, 1.0, -1.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            steklov_partial(X, 1.0, 1.0, 1.0, 1.0, axis="z")

    @pytest.mark.parametrize("axis", ["x", "y"])
    def test_partial_matches_difference(self, axis):
        f = get_function("sin-exp")
        s = steklov_function(f, 0.3, 0.5)
        x, y, e = 1.1, 0.6, 1e-5
        if axis == "x":
            fd = (s(x + e, y) - s(x - e, y)) / (2 * e)
        else:
            fd = (s(x, y + e) - s(x, y - e)) / (2 * e)
        np.testing.assert_allclose(s.partial(axis)(x, y), fd, rtol=1e-7)

    @pytest.mark.parametrize("name", LIPSCHITZ)
    @pytest.mark.parametrize("h,d", [(0.1, 0.1), (0.5, 0.25)])
    def test_inequalities(self, name, h, d):
        f = get_function(name)
        g = EvaluationGrid.default()
        s = steklov_function(f, h, d)
        w = weighted_modulus(f, h, d, g)
        diff = Function2D(lambda u, v: s(u, v) - f(u, v), f.growth)
        assert weighted_sup_norm(diff, g) <= w + 1e-8
        assert weighted_sup_norm(s.partial("x"), g, f.growth) <= 1.05 * 2 / h * w + 1e-8
        assert weighted_sup_norm(s.partial("y"), g, f.growth) <= 1.05 * 2 / d * w + 1e-8
