"""Bivariate generalized Baskakov-Kantorovich operator on the quadrant.

The basis is the tensor product ``W_{n1,k1}^a(x) W_{n2,k2}^a(y)`` with one
shape parameter ``a`` shared by both axes.  Functions that are sums of
products ``g(u) h(v)`` are evaluated through the univariate operator; any
other function goes through the truncated double series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np

from .basis import BasisParams, DomainError, TruncatedBasis, truncate_basis
from .kantorovich_1d import (
    Function1D,
    apply_1d,
    central_moment_closed,
    derivative_1d,
    raw_moment_closed,
)
from .quadrature import DEFAULT_QUADRATURE, CellQuadrature

__all__ = [
    "Function2D",
    "MissingPartialError",
    "BoundFactors",
    "apply_2d",
    "apply_2d_grid",
    "partial_x",
    "partial_y",
    "test_moment_2d_closed",
    "central_moment_2d_closed",
    "delta_bound",
]

PARTIAL_KEYS = ("x", "y", "xx", "xy", "yy", "xxx", "xxy", "xyy", "yyy")

# cap on function evaluations per block of the double series
_BLOCK = 2_000_000


class MissingPartialError(KeyError):
    """A partial derivative needed by a formula was not declared."""

    def __str__(self):
        return str(self.args[0]) if self.args else "missing partial derivative"


def _partial_key(name: str) -> str:
    key = "".join(sorted(name.replace("f_", "").replace("_", "")))
    if key not in PARTIAL_KEYS:
        raise ValueError(f"unknown partial derivative {name!r}")
    return key


@dataclass(frozen=True, eq=False)
class Function2D:
    """A real function on the quadrant with growth ``O((1 + u^g1)(1 + v^g2))``.

    Attributes
    ----------
    evaluator : callable
        ``f(u, v)``, broadcasting over numpy arrays.
    growth : (int, int)
        Declared polynomial growth exponents per axis.
    terms : tuple of (coef, Function1D, Function1D)
        Optional decomposition ``f = sum coef * g(u) * h(v)``.
    partials : mapping
        Keys among ``x, y, xx, xy, yy, xxx, xxy, xyy, yyy``.
    """

    evaluator: Callable
    growth: tuple = (0, 0)
    label: str = ""
    terms: tuple = ()
    partials: Mapping[str, Callable] = field(default_factory=dict)

    def __post_init__(self):
        g1, g2 = self.growth
        if g1 < 0 or g2 < 0:
            raise ValueError("growth exponents must be >= 0")
        object.__setattr__(self, "growth", (int(g1), int(g2)))
        object.__setattr__(self, "partials", {_partial_key(k): v for k, v in dict(self.partials).items()})

    def __call__(self, u, v):
        return self.evaluator(np.asarray(u, dtype=float), np.asarray(v, dtype=float))

    @classmethod
    def sum_of_products(cls, terms, label: str = "") -> "Function2D":
        """Build ``sum c * g(u) * h(v)``; partials come from the factors' derivatives."""
        terms = tuple((float(c), g, h) for c, g, h in terms)

        def evaluator(u, v):
            return sum(c * g(u) * h(v) for c, g, h in terms)

        partials = {}
        for key in PARTIAL_KEYS:
            i, j = key.count("x"), key.count("y")
            try:
                pieces = [(c, g.derivative(i), h.derivative(j)) for c, g, h in terms]
            except ValueError:
                continue
            partials[key] = _sum_product(pieces)
        growth = (
            max(g.growth for _, g, _ in terms),
            max(h.growth for _, _, h in terms),
        )
        return cls(evaluator, growth, label, terms, partials)

    @classmethod
    def separable(cls, g: Function1D, h: Function1D, label: str = "") -> "Function2D":
        return cls.sum_of_products([(1.0, g, h)], label or f"{g.label}*{h.label}")

    @property
    def separable_factors(self) -> Optional[tuple]:
        if len(self.terms) == 1 and self.terms[0][0] == 1.0:
            return self.terms[0][1], self.terms[0][2]
        return None

    def partial(self, name: str) -> Callable:
        key = _partial_key(name)
        try:
            return self.partials[key]
        except KeyError:
            raise MissingPartialError(f"{self.label or 'function'} declares no partial f_{key}") from None

    def has_partials(self, *names: str) -> bool:
        return all(_partial_key(n) in self.partials for n in names)

    def check_partials(self, points=None, rel: float = 1e-4) -> float:
        """Largest relative mismatch between declared partials and central differences.

        Each declared partial is compared with a central difference of the
        next lower one (or of ``f``).
        """
        if points is None:
            g = np.array([0.3, 0.7, 1.0, 1.6, 2.5])
            points = [(a, b) for a in g for b in g]
        worst = 0.0
        for key, fn in self.partials.items():
            base_key, var = key[:-1], key[-1]
            if base_key and base_key not in self.partials:
                continue
            base = self.partials[base_key] if base_key else self.evaluator
            for u, v in points:
                h = 1e-5 * max(1.0, abs(u if var == "x" else v))
                if var == "x":
                    fd = (base(u + h, v) - base(u - h, v)) / (2 * h)
                else:
                    fd = (base(u, v + h) - base(u, v - h)) / (2 * h)
                exact = float(fn(np.float64(u), np.float64(v)))
                worst = max(worst, abs(fd - exact) / max(1.0, abs(exact)))
        return worst


def _sum_product(pieces):
    def fn(u, v):
        return sum(c * g(u) * h(v) for c, g, h in pieces)

    return fn


@dataclass(frozen=True)
class BoundFactors:
    """``phi = sqrt(x(1+x))``, ``delta_sq = phi^2 + (1+a)^2/(n+1)``, ``bound = delta_sq/(n+1)``."""

    phi: float
    delta_sq: float
    bound: float

    @property
    def delta(self) -> float:
        return math.sqrt(self.delta_sq)


def delta_bound(params: BasisParams, x: float) -> BoundFactors:
    if x < 0:
        raise DomainError("x must be >= 0")
    m = params.n + 1.0
    phi_sq = x * (1.0 + x)
    delta_sq = phi_sq + (1.0 + params.a) ** 2 / m
    return BoundFactors(math.sqrt(phi_sq), delta_sq, delta_sq / m)


def _check_pair(p1: BasisParams, p2: BasisParams):
    if p1.a != p2.a:
        raise ValueError(f"both axes must share the shape parameter a (got {p1.a} and {p2.a})")


def _node_weights(tb: TruncatedBasis, weights, q: CellQuadrature):
    m = tb.params.n + 1
    nodes = q.cell_nodes(tb.indices, m).ravel()
    b = (np.asarray(weights)[:, None] * q.unit_weights).ravel()
    return nodes, b


def _double_series(f: Function2D, u, bu, v, bv) -> float:
    rows = max(1, _BLOCK // max(1, len(v)))
    total = 0.0
    for s in range(0, len(u), rows):
        block = np.asarray(f(u[s : s + rows, None], v[None, :]), dtype=float)
        block = np.broadcast_to(block, (len(u[s : s + rows]), len(v)))
        total += float(bu[s : s + rows] @ (block @ bv))
    return total


def apply_2d(
    p1: BasisParams,
    p2: BasisParams,
    f: Function2D,
    x: float,
    y: float,
    eps: float = 1e-12,
    q: CellQuadrature = DEFAULT_QUADRATURE,
    *,
    use_terms: bool = True,
) -> float:
    """Evaluate ``K_{n1,n2}^a(f; x, y)``.

    With ``use_terms`` and a declared product decomposition, the value is
    assembled from univariate evaluations; otherwise the double series is
    summed over the two certified windows.
    """
    _check_pair(p1, p2)
    if f.terms and use_terms:
        scale = max(1.0, sum(abs(c) for c, _, _ in f.terms))
        e = eps / scale
        return float(sum(c * apply_1d(p1, g, x, e, q) * apply_1d(p2, h, y, e, q) for c, g, h in f.terms))
    tb1 = truncate_basis(p1, x, eps / 4.0, f.growth[0])
    tb2 = truncate_basis(p2, y, eps / 4.0, f.growth[1])
    u, bu = _node_weights(tb1, tb1.weights, q)
    v, bv = _node_weights(tb2, tb2.weights, q)
    return _double_series(f, u, bu, v, bv)


def apply_2d_grid(p1, p2, f: Function2D, xs, ys, eps: float = 1e-12, q: CellQuadrature = DEFAULT_QUADRATURE) -> np.ndarray:
    """``K f`` on the tensor grid ``xs x ys``; shape ``(len(xs), len(ys))``."""
    _check_pair(p1, p2)
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if f.terms:
        out = np.zeros((len(xs), len(ys)))
        scale = max(1.0, sum(abs(c) for c, _, _ in f.terms))
        for c, g, h in f.terms:
            gx = np.array([apply_1d(p1, g, x, eps / scale, q) for x in xs])
            hy = np.array([apply_1d(p2, h, y, eps / scale, q) for y in ys])
            out += c * np.outer(gx, hy)
        return out
    return np.array([[apply_2d(p1, p2, f, x, y, eps, q) for y in ys] for x in xs])


def _derivative_scale(params: BasisParams, x: float) -> float:
    return max(1.0, (params.n + 1) * (2.0 + x) / (x * (1.0 + x)))


def partial_x(
    p1: BasisParams,
    p2: BasisParams,
    f: Function2D,
    x: float,
    y: float,
    eps: float = 1e-12,
    q: CellQuadrature = DEFAULT_QUADRATURE,
    *,
    use_terms: bool = True,
) -> float:
    """``d/dw K_{n1,n2}^a(f; w, y)`` at ``w = x`` (requires ``x > 0``)."""
    _check_pair(p1, p2)
    if x <= 0:
        raise DomainError("partial_x is only defined for x > 0 (open quadrant)")
    if f.terms and use_terms:
        scale = max(1.0, sum(abs(c) for c, _, _ in f.terms))
        e = eps / scale
        return float(sum(c * derivative_1d(p1, g, x, e, q) * apply_1d(p2, h, y, e, q) for c, g, h in f.terms))
    tb1 = truncate_basis(p1, x, eps / (4.0 * _derivative_scale(p1, x)), f.growth[0] + 1)
    tb2 = truncate_basis(p2, y, eps / 4.0, f.growth[1])
    u, bu = _node_weights(tb1, tb1.derivative_weights(), q)
    v, bv = _node_weights(tb2, tb2.weights, q)
    return _double_series(f, u, bu, v, bv)


def partial_y(
    p1: BasisParams,
    p2: BasisParams,
    f: Function2D,
    x: float,
    y: float,
    eps: float = 1e-12,
    q: CellQuadrature = DEFAULT_QUADRATURE,
    *,
    use_terms: bool = True,
) -> float:
    """``d/dv K_{n1,n2}^a(f; x, v)`` at ``v = y`` (requires ``y > 0``)."""
    _check_pair(p1, p2)
    if y <= 0:
        raise DomainError("partial_y is only defined for y > 0 (open quadrant)")
    if f.terms and use_terms:
        scale = max(1.0, sum(abs(c) for c, _, _ in f.terms))
        e = eps / scale
        return float(sum(c * apply_1d(p1, g, x, e, q) * derivative_1d(p2, h, y, e, q) for c, g, h in f.terms))
    tb1 = truncate_basis(p1, x, eps / 4.0, f.growth[0])
    tb2 = truncate_basis(p2, y, eps / (4.0 * _derivative_scale(p2, y)), f.growth[1] + 1)
    u, bu = _node_weights(tb1, tb1.weights, q)
    v, bv = _node_weights(tb2, tb2.derivative_weights(), q)
    return _double_series(f, u, bu, v, bv)


def test_moment_2d_closed(p1, p2, i: int, j: int, x: float, y: float, *, printed: bool = False) -> float:
    """Closed form of ``K_{n1,n2}^a(u^i v^j; x, y)`` for ``i, j <= 3``.

    Mixed monomials are products of the axis factors.
    """
    _check_pair(p1, p2)
    if not (0 <= i <= 3 and 0 <= j <= 3):
        raise ValueError(f"closed forms exist for exponents 0..3 only, got ({i}, {j})")
    return raw_moment_closed(p1, i, x, printed=printed) * raw_moment_closed(p2, j, y, printed=printed)


# keep pytest from collecting the public function above as a test
test_moment_2d_closed.__test__ = False


def central_moment_2d_closed(p1, p2, axis: str, r: int, x: float, y: float) -> float:
    """``K((u - x)^r)`` for ``axis='u'`` or ``K((v - y)^r)`` for ``axis='v'``, ``r in {1, 2}``."""
    _check_pair(p1, p2)
    if r not in (1, 2):
        raise ValueError(f"r must be 1 or 2, got {r}")
    if axis == "u":
        return central_moment_closed(p1, r, x)
    if axis == "v":
        return central_moment_closed(p2, r, y)
    raise ValueError(f"axis must be 'u' or 'v', got {axis!r}")
