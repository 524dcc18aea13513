"""Polynomial weights, weighted sup norms, moduli of continuity, Steklov means.

Every supremum here is a lower estimate taken over a finite
:class:`EvaluationGrid`: base points come from the grid, shifted points may
leave it (the domain is the whole quadrant).  Refining the grid can only
raise an estimate, so checks built on these numbers should be stated in the
direction refinement cannot break.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .kantorovich_2d import Function2D
from .quadrature import DEFAULT_QUADRATURE, CellQuadrature

__all__ = [
    "EvaluationGrid",
    "weight",
    "weight_2d",
    "weighted_sup_norm",
    "sup_norm",
    "weighted_modulus",
    "complete_modulus",
    "partial_modulus",
    "second_modulus",
    "steklov",
    "steklov_partial",
    "steklov_function",
]

_ANGLES = 32


@dataclass(frozen=True, eq=False)
class EvaluationGrid:
    """Tensor grid of base points plus the step resolution used to probe shifts.

    ``max_shifts`` caps the number of probed steps per axis, so a shift
    range ``t`` is sampled at ``min(ceil(t / shift_resolution), max_shifts)``
    equally spaced values ending at ``t``.
    """

    x_points: np.ndarray
    y_points: np.ndarray
    shift_resolution: float = 0.01
    max_shifts: int = 24

    def __post_init__(self):
        for name in ("x_points", "y_points"):
            pts = np.asarray(getattr(self, name), dtype=float)
            if pts.ndim != 1 or len(pts) == 0:
                raise ValueError(f"{name} must be a nonempty 1-d sequence")
            if np.any(pts < 0) or np.any(np.diff(pts) <= 0):
                raise ValueError(f"{name} must be >= 0 and strictly increasing")
            pts.flags.writeable = False
            object.__setattr__(self, name, pts)
        if not self.shift_resolution > 0:
            raise ValueError("shift_resolution must be > 0")
        if self.max_shifts < 1:
            raise ValueError("max_shifts must be >= 1")

    @classmethod
    def uniform(cls, x_max: float, num: int, shift_resolution: float = 0.01, y_max: Optional[float] = None, **kw):
        y_max = x_max if y_max is None else y_max
        return cls(np.linspace(0.0, x_max, num), np.linspace(0.0, y_max, num), shift_resolution, **kw)

    @classmethod
    def default(cls) -> "EvaluationGrid":
        """[0, 5] in steps of 0.25 followed by a geometric tail out to 1000."""
        pts = np.concatenate([np.linspace(0.0, 5.0, 21), np.geomspace(7.5, 1000.0, 8)])
        return cls(pts, pts, 0.01)

    def mesh(self):
        return np.meshgrid(self.x_points, self.y_points, indexing="ij")

    def shifts(self, t: float) -> np.ndarray:
        if not t > 0:
            return np.zeros(0)
        j = min(max(1, math.ceil(t / self.shift_resolution - 1e-9)), self.max_shifts)
        return t * np.arange(1, j + 1) / j

    def describe(self) -> str:
        return (
            f"x:{len(self.x_points)}pts[{self.x_points[0]:g},{self.x_points[-1]:g}] "
            f"y:{len(self.y_points)}pts[{self.y_points[0]:g},{self.y_points[-1]:g}] "
            f"res={self.shift_resolution:g} max_shifts={self.max_shifts}"
        )


def weight(gamma: int, x):
    """``1 / (1 + x^gamma)``, with ``x^0 = 1``."""
    x = np.asarray(x, dtype=float)
    out = 1.0 / (1.0 + x**gamma)
    return out if out.ndim else float(out)


def weight_2d(growth, x, y):
    return weight(growth[0], x) * weight(growth[1], y)


def _growth(f, growth):
    if growth is not None:
        return tuple(growth)
    return getattr(f, "growth", (0, 0))


def weighted_sup_norm(f: Callable, grid: EvaluationGrid, growth=None) -> float:
    """Grid estimate of ``sup |f(x, y)| w(x) w(y)`` (a lower bound for the true norm)."""
    g = _growth(f, growth)
    X, Y = grid.mesh()
    vals = np.broadcast_to(np.asarray(f(X, Y), dtype=float), X.shape)
    return float(np.max(np.abs(vals) * weight_2d(g, X, Y)))


def sup_norm(f: Callable, grid: EvaluationGrid) -> float:
    """Grid estimate of the unweighted sup norm."""
    X, Y = grid.mesh()
    return float(np.max(np.abs(np.broadcast_to(np.asarray(f(X, Y), dtype=float), X.shape))))


def weighted_modulus(f: Callable, t: float, s: float, grid: EvaluationGrid, growth=None) -> float:
    """Grid estimate of ``sup_{0<h<t, 0<d<s} || f(.+h, .+d) - f ||_weighted``.

    The steps are probed up to and including ``t`` and ``s``; by continuity
    the supremum over the open box equals the maximum over its closure.
    """
    hs, ds = grid.shifts(t), grid.shifts(s)
    if len(hs) == 0 or len(ds) == 0:
        return 0.0
    g = _growth(f, growth)
    X, Y = grid.mesh()
    w = weight_2d(g, X, Y)
    base = np.broadcast_to(np.asarray(f(X, Y), dtype=float), X.shape)
    best = 0.0
    for h in hs:
        shifted = np.asarray(f(X[None] + h, Y[None] + ds[:, None, None]), dtype=float)
        best = max(best, float(np.max(np.abs(shifted - base[None]) * w[None])))
    return best


def complete_modulus(f: Callable, delta: float, grid: EvaluationGrid) -> float:
    """Grid estimate of ``sup |f(u, v) - f(x, y)|`` over pairs at distance ``<= delta``.

    Displacements are sampled on a polar grid (32 directions, radii from
    :meth:`EvaluationGrid.shifts`); targets outside the quadrant are skipped.
    """
    radii = grid.shifts(delta)
    if len(radii) == 0:
        return 0.0
    theta = 2.0 * np.pi * np.arange(_ANGLES) / _ANGLES
    dx = (radii[:, None] * np.cos(theta)).ravel()
    dy = (radii[:, None] * np.sin(theta)).ravel()
    X, Y = grid.mesh()
    base = np.broadcast_to(np.asarray(f(X, Y), dtype=float), X.shape)
    best = 0.0
    for hx, hy in zip(dx, dy):
        U, V = X + hx, Y + hy
        ok = (U >= 0) & (V >= 0)
        if not ok.any():
            continue
        vals = np.asarray(f(np.where(ok, U, 0.0), np.where(ok, V, 0.0)), dtype=float)
        diff = np.abs(np.broadcast_to(vals, X.shape) - base)[ok]
        best = max(best, float(diff.max()))
    return best


def partial_modulus(f: Callable, axis: str, delta: float, grid: EvaluationGrid) -> float:
    """Grid estimate of the partial modulus along ``axis`` ('x' or 'y')."""
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    steps = grid.shifts(delta)
    if len(steps) == 0:
        return 0.0
    X, Y = grid.mesh()
    base = np.broadcast_to(np.asarray(f(X, Y), dtype=float), X.shape)
    best = 0.0
    for h in np.concatenate([steps, -steps]):
        U, V = (X + h, Y) if axis == "x" else (X, Y + h)
        ok = (U >= 0) & (V >= 0)
        if not ok.any():
            continue
        vals = np.broadcast_to(np.asarray(f(np.where(ok, U, 0.0), np.where(ok, V, 0.0)), dtype=float), X.shape)
        best = max(best, float(np.abs(vals - base)[ok].max()))
    return best


def second_modulus(f: Callable, delta: float, grid: EvaluationGrid, axis: Optional[str] = None) -> float:
    """Grid estimate of ``sup_{0<h<=sqrt(delta)} |f(x+2h) - 2 f(x+h) + f(x)|``.

    ``f`` is either a one-variable callable (probed at ``grid.x_points``) or
    a function of two variables; for the latter the second difference is
    taken along ``axis``, or along both axes when ``axis`` is None.
    """
    hs = grid.shifts(math.sqrt(delta)) if delta > 0 else np.zeros(0)
    if len(hs) == 0:
        return 0.0
    if not isinstance(f, Function2D):
        x = grid.x_points[None, :]
        h = hs[:, None]
        d2 = np.asarray(f(x + 2 * h), dtype=float) - 2 * np.asarray(f(x + h), dtype=float) + np.asarray(f(x), dtype=float)
        return float(np.max(np.abs(d2)))
    axes = ("x", "y") if axis is None else (axis,)
    X, Y = grid.mesh()
    best = 0.0
    for ax in axes:
        for h in hs:
            if ax == "x":
                d2 = f(X + 2 * h, Y) - 2 * f(X + h, Y) + f(X, Y)
            else:
                d2 = f(X, Y + 2 * h) - 2 * f(X, Y + h) + f(X, Y)
            best = max(best, float(np.max(np.abs(d2))))
    return best


def steklov(f: Callable, h: float, delta: float, x, y, q: CellQuadrature = DEFAULT_QUADRATURE):
    """Mean of ``f`` over ``[x, x+h] x [y, y+delta]``; broadcasts over ``x`` and ``y``."""
    if not (h > 0 and delta > 0):
        raise ValueError("h and delta must be > 0")
    x = np.asarray(x, dtype=float)
    out = q.rectangle_average(f, x, x + h, np.asarray(y, dtype=float), np.asarray(y, dtype=float) + delta)
    return out if np.ndim(out) else float(out)


def steklov_partial(f: Callable, h: float, delta: float, x, y, axis: str = "x", q: CellQuadrature = DEFAULT_QUADRATURE):
    """Exact partial derivative of the Steklov mean.

    ``d/dx f_{h,d}(x, y) = (1/h) * mean over v in [0, d] of (f(x+h, y+v) - f(x, y+v))``
    and symmetrically for ``y``.
    """
    if not (h > 0 and delta > 0):
        raise ValueError("h and delta must be > 0")
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    xi, w = q.unit_nodes, q.unit_weights
    if axis == "x":
        v = y[..., None] + delta * xi
        diff = f(x[..., None] + h, v) - f(x[..., None], v)
        out = (np.asarray(diff, dtype=float) @ w) / h
    elif axis == "y":
        u = x[..., None] + h * xi
        diff = f(u, y[..., None] + delta) - f(u, y[..., None])
        out = (np.asarray(diff, dtype=float) @ w) / delta
    else:
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    return out if np.ndim(out) else float(out)


def steklov_function(f: Function2D, h: float, delta: float, q: CellQuadrature = DEFAULT_QUADRATURE) -> Function2D:
    """``f_{h,delta}`` as a :class:`Function2D` carrying ``f``'s growth and first partials."""
    return Function2D(
        lambda x, y: steklov(f, h, delta, x, y, q),
        f.growth,
        f"steklov[{f.label}; h={h:g}, d={delta:g}]",
        partials={
            "x": lambda x, y: steklov_partial(f, h, delta, x, y, "x", q),
            "y": lambda x, y: steklov_partial(f, h, delta, x, y, "y", q),
        },
    )
