"""Gauss-Legendre rules mapped onto Kantorovich cells and rectangles."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import factorial

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial.legendre import leggauss

__all__ = ["CellQuadrature", "DEFAULT_QUADRATURE", "poly_cell_average"]


@dataclass(frozen=True)
class CellQuadrature:
    """Fixed ``G``-point Gauss-Legendre rule on the unit interval.

    Exact for polynomials of degree ``2G - 1`` on every cell.
    """

    nodes_per_cell: int = 10
    _rule: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.nodes_per_cell < 1:
            raise ValueError("nodes_per_cell must be positive")
        xi, w = leggauss(self.nodes_per_cell)
        object.__setattr__(self, "_rule", ((xi + 1.0) / 2.0, w / 2.0))

    @property
    def unit_nodes(self) -> np.ndarray:
        """Abscissas on [0, 1]."""
        return self._rule[0]

    @property
    def unit_weights(self) -> np.ndarray:
        """Weights on [0, 1]; they sum to one."""
        return self._rule[1]

    def cell_nodes(self, k, m: int) -> np.ndarray:
        """Nodes on cells ``[k/m, (k+1)/m]``, shape ``k.shape + (G,)``."""
        k = np.asarray(k, dtype=float)
        return (k[..., None] + self.unit_nodes) / m

    def average(self, f, lo, hi):
        """Mean of ``f`` over ``[lo, hi]`` (broadcasting over ``lo``/``hi``)."""
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        t = lo[..., None] + (hi - lo)[..., None] * self.unit_nodes
        return np.asarray(f(t), dtype=float) @ self.unit_weights

    def rectangle_average(self, f, x0, x1, y0, y1):
        """Mean of ``f(u, v)`` over ``[x0, x1] x [y0, y1]`` by the tensor rule."""
        x0, x1, y0, y1 = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x0, x1, y0, y1)))
        xi, w = self.unit_nodes, self.unit_weights
        u = (x0[..., None] + (x1 - x0)[..., None] * xi)[..., :, None]
        v = (y0[..., None] + (y1 - y0)[..., None] * xi)[..., None, :]
        vals = np.asarray(f(u, v), dtype=float)
        vals = np.broadcast_to(vals, x0.shape + (len(xi), len(xi)))
        return np.einsum("...ij,i,j->...", vals, w, w)

    @cached_property
    def exactness_degree(self) -> int:
        return 2 * self.nodes_per_cell - 1


DEFAULT_QUADRATURE = CellQuadrature()


def poly_cell_average(poly: Polynomial, k, m: int, shift: float = 0.0) -> np.ndarray:
    """Exact mean of ``poly(t - shift)`` over the cells ``[k/m, (k+1)/m]``.

    Expands around the cell midpoint ``c``:
    ``mean = sum_j p^(2j)(c - shift) (h/2)^(2j) / (2j + 1)!`` with ``h = 1/m``,
    which avoids the cancellation of differencing an antiderivative far from 0.
    """
    k = np.asarray(k, dtype=float)
    s = (k + 0.5) / m - shift
    half = 0.5 / m
    out = np.zeros_like(s)
    d = poly
    j = 0
    while True:
        out = out + d(s) * (half ** (2 * j) / factorial(2 * j + 1))
        if d.degree() < 2:
            break
        d = d.deriv(2)
        j += 1
    return out
