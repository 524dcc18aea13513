"""Built-in test functions with declared growth and analytic partials."""

from __future__ import annotations

import numpy as np

from .kantorovich_1d import Function1D
from .kantorovich_2d import Function2D

__all__ = ["CATALOG", "get_function", "function_names", "monomial_2d"]


def _exp_decay_1d() -> Function1D:
    derivs = (
        lambda t: -np.exp(-t),
        lambda t: np.exp(-t),
        lambda t: -np.exp(-t),
    )
    return Function1D(lambda t: np.exp(-t), 0, "exp(-t)", derivatives=derivs)


def _sin_1d() -> Function1D:
    return Function1D(np.sin, 0, "sin(t)", derivatives=(np.cos, lambda t: -np.sin(t), lambda t: -np.cos(t)))


def monomial_2d(i: int, j: int) -> Function2D:
    return Function2D.separable(Function1D.monomial(i), Function1D.monomial(j), f"e_{{{i},{j}}}")


def _affine() -> Function2D:
    one = Function1D.monomial(0)
    t = Function1D.monomial(1)
    return Function2D.sum_of_products([(1.0, t, one), (1.0, one, t)], "affine")


def _square_sum() -> Function2D:
    one = Function1D.monomial(0)
    t2 = Function1D.monomial(2)
    return Function2D.sum_of_products([(1.0, t2, one), (1.0, one, t2)], "e_{2,0}+e_{0,2}")


def _inv_sum() -> Function2D:
    # 1/(1+u+v): not a finite sum of products, so it exercises the double series
    def d(order):
        c = float((-1) ** order * np.prod(np.arange(1, order + 1)))
        return lambda u, v: c / (1.0 + u + v) ** (order + 1)

    partials = {}
    for key in ("x", "y", "xx", "xy", "yy", "xxx", "xxy", "xyy", "yyy"):
        partials[key] = d(len(key))
    return Function2D(lambda u, v: 1.0 / (1.0 + u + v), (0, 0), "inv-sum", partials=partials)


def _sin_sum() -> Function2D:
    cyc = (np.sin, np.cos, lambda s: -np.sin(s), lambda s: -np.cos(s))
    partials = {}
    for key in ("x", "y", "xx", "xy", "yy", "xxx", "xxy", "xyy", "yyy"):
        fn = cyc[len(key) % 4]
        partials[key] = (lambda g: lambda u, v: g(u + v))(fn)
    return Function2D(lambda u, v: np.sin(u + v), (0, 0), "sin-sum", partials=partials)


def _build():
    cat = {}
    one = Function1D.monomial(0)
    constant = Function2D.separable(one, one, "constant")
    cat["constant"] = (constant, "f = 1")
    cat["affine"] = (_affine(), "f = u + v")
    for i in range(4):
        for j in range(4):
            if i or j:
                cat[f"e_{{{i},{j}}}"] = (monomial_2d(i, j), f"f = u^{i} v^{j}")
    cat["e_{2,0}+e_{0,2}"] = (_square_sum(), "f = u^2 + v^2")
    ed = _exp_decay_1d()
    cat["exp-decay"] = (Function2D.separable(ed, ed, "exp-decay"), "f = exp(-u - v)")
    s = _sin_1d()
    cat["sin-product"] = (Function2D.separable(s, s, "sin-product"), "f = sin(u) sin(v)")
    cat["sin-exp"] = (Function2D.separable(s, ed, "sin-exp"), "f = sin(u) exp(-v)")
    cat["sin-sum"] = (_sin_sum(), "f = sin(u + v), evaluated by the double series")
    cat["inv-sum"] = (_inv_sum(), "f = 1/(1 + u + v), evaluated by the double series")
    return cat


CATALOG = _build()

# Lipschitz members, used by the Steklov and modulus checks
LIPSCHITZ = ("constant", "affine", "e_{1,0}", "e_{0,1}", "exp-decay", "sin-product", "sin-exp", "sin-sum", "inv-sum")


def function_names() -> list:
    return list(CATALOG)


def get_function(name: str) -> Function2D:
    try:
        return CATALOG[name][0]
    except KeyError:
        raise KeyError(f"unknown function {name!r}; see --list-functions") from None
