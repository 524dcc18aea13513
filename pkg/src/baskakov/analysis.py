"""Convergence, rate, and asymptotic experiments for the bivariate operator.

Each experiment returns an :class:`ExperimentTable` whose rows carry an
observed quantity next to a reference (a bound, a limit, or a reference
rate) and their ratio.  Existential constants are never asserted; they are
reported as fitted maxima together with how much they move when refitted
on the upper half of the ``n`` range.
"""

from __future__ import annotations

import io
import logging
import math
import time
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .basis import BasisParams
from .function_spaces import (
    EvaluationGrid,
    complete_modulus,
    second_modulus,
    sup_norm,
    weight,
    weight_2d,
    weighted_modulus,
    weighted_sup_norm,
)
from .kantorovich_1d import Function1D, apply_1d
from .kantorovich_2d import (
    Function2D,
    apply_2d,
    apply_2d_grid,
    central_moment_2d_closed,
    delta_bound,
    partial_x,
    partial_y,
)

__all__ = [
    "COLUMNS",
    "DEFAULT_N_SEQ",
    "Row",
    "ExperimentTable",
    "SlopeFit",
    "fit_power_law",
    "order_fit",
    "richardson",
    "fitted_constant",
    "convergence_experiment",
    "check_convergence",
    "rate_bound_experiment",
    "BoundednessResult",
    "weighted_boundedness_check",
    "operator_norm_check",
    "voronovskaja_rhs",
    "voronovskaja_exact_e20",
    "voronovskaja_sequence",
    "voronovskaja_limit",
    "VoronovskajaVerdict",
    "arbitrate_voronovskaja",
    "derivative_convergence",
    "derivative_voronovskaja_rhs",
    "derivative_voronovskaja_limit",
    "Theorem41Components",
    "theorem41_components",
]

log = logging.getLogger(__name__)

COLUMNS = ("n1", "n2", "x", "y", "observed", "bound_or_limit", "ratio")
DEFAULT_N_SEQ = (10, 20, 40, 80, 160, 320, 640)


def _ratio(observed: float, reference: float, tol: float = 0.0) -> float:
    if reference != 0:
        return observed / reference
    # an observation within the evaluation tolerance is indistinguishable from 0
    if abs(observed) <= tol:
        return 0.0
    return math.copysign(math.inf, observed) if not math.isnan(observed) else math.nan


@dataclass(frozen=True)
class Row:
    n1: int
    n2: int
    x: float
    y: float
    observed: float
    bound_or_limit: float
    ratio: float
    status: str = "ok"

    @classmethod
    def make(cls, n1, n2, x, y, observed, reference, tol: float = 0.0) -> "Row":
        """Row with ``ratio = observed / reference``; ``tol`` is the evaluation
        tolerance below which an observation over a zero reference counts as 0."""
        ratio = _ratio(float(observed), float(reference), tol)
        return cls(int(n1), int(n2), float(x), float(y), float(observed), float(reference), ratio)

    @classmethod
    def failed(cls, n1, n2, x, y) -> "Row":
        nan = math.nan
        return cls(int(n1), int(n2), float(x), float(y), nan, nan, nan, "failed")


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


@dataclass
class ExperimentTable:
    """Rows sorted by ``(n1, n2)``; metadata never goes into the CSV body."""

    rows: list
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rows = sorted(self.rows, key=lambda r: (r.n1, r.n2))
        self.metadata.setdefault("created", time.strftime("%Y-%m-%dT%H:%M:%S"))

    def __len__(self):
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows], dtype=float)

    @property
    def ns(self) -> list:
        return sorted({r.n1 for r in self.rows})

    def points(self) -> list:
        seen = []
        for r in self.rows:
            if (r.x, r.y) not in seen:
                seen.append((r.x, r.y))
        return seen

    def select(self, x=None, y=None, n_min=None) -> "ExperimentTable":
        rows = [
            r
            for r in self.rows
            if (x is None or r.x == x) and (y is None or r.y == y) and (n_min is None or r.n1 >= n_min)
        ]
        return ExperimentTable(rows, dict(self.metadata))

    @property
    def failed(self) -> list:
        return [r for r in self.rows if r.status != "ok"]

    def csv_text(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()

    def write_csv(self, stream) -> None:
        stream.write(",".join(COLUMNS) + "\n")
        for r in self.rows:
            stream.write(",".join(_fmt(getattr(r, c)) for c in COLUMNS) + "\n")

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            self.write_csv(fh)


@dataclass(frozen=True)
class SlopeFit:
    """Least-squares fit of ``log(value) = slope * log(n) + intercept``."""

    slope: float
    intercept: float
    r_squared: float
    n_range: tuple
    degenerate: bool = False

    @property
    def flagged(self) -> bool:
        """True when the fit cannot support a convergence claim."""
        return self.degenerate or not (self.r_squared >= 0.9)


def fit_power_law(ns: Sequence, values: Sequence) -> SlopeFit:
    ns = np.asarray(ns, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(ns) < 4:
        raise ValueError(f"a slope fit needs at least 4 points, got {len(ns)}")
    if np.any(~np.isfinite(values)) or np.any(values <= 0):
        raise ValueError("slope fit needs finite positive values")
    lx, ly = np.log(ns), np.log(values)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - float(np.sum(resid**2)) / ss_tot)
    return SlopeFit(float(slope), float(intercept), r2, (int(ns.min()), int(ns.max())))


def _degenerate_fit(ns) -> SlopeFit:
    return SlopeFit(math.nan, math.nan, 0.0, (int(min(ns)), int(max(ns))), degenerate=True)


def order_fit(table: ExperimentTable, column: str = "observed") -> SlopeFit:
    """Slope of ``log|column|`` against ``log n1`` over all rows of ``table``."""
    ok = [r for r in table.rows if r.status == "ok"]
    return fit_power_law([r.n1 for r in ok], [abs(getattr(r, column)) for r in ok])


def richardson(ns: Sequence, values: Sequence) -> float:
    """Limit of ``values`` assuming ``v_n = L + c/n`` through the two largest ``n``."""
    (n1, v1), (n2, v2) = sorted(zip(ns, values))[-2:]
    return (n2 * v2 - n1 * v1) / (n2 - n1)


def fitted_constant(table: ExperimentTable, column: str = "ratio") -> dict:
    """Max of ``column`` on the full ``n`` range and on its upper half.

    ``stability`` is the larger of the two maxima over the smaller; a value
    below 2 is what "the constant exists" is taken to mean empirically.
    """
    ns = table.ns
    upper = ns[len(ns) // 2 :]
    full = [abs(getattr(r, column)) for r in table.rows if r.status == "ok"]
    top = [abs(getattr(r, column)) for r in table.rows if r.status == "ok" and r.n1 >= upper[0]]
    m_full, m_top = max(full), max(top)
    lo, hi = sorted((m_full, m_top))
    stability = 1.0 if hi == 0 else (math.inf if lo == 0 else hi / lo)
    return {"full": m_full, "upper": m_top, "stability": stability, "upper_ns": tuple(upper)}


def _pairs(params_seq) -> list:
    out = []
    for p in params_seq:
        out.append((int(p), int(p)) if np.isscalar(p) else (int(p[0]), int(p[1])))
    return out


def _evaluate_rows(params_seq, points, fn) -> list:
    rows = []
    for n1, n2 in _pairs(params_seq):
        for x, y in points:
            try:
                rows.append(fn(n1, n2, float(x), float(y)))
            except Exception as exc:  # one bad row must not sink the run
                log.warning("row n1=%d n2=%d x=%g y=%g failed: %s", n1, n2, x, y, exc)
                rows.append(Row.failed(n1, n2, x, y))
    return rows


def convergence_experiment(
    f: Function2D, params_seq, a: float, points, eps: float = 1e-12
) -> ExperimentTable:
    """``|K_{n1,n2}^a(f; x, y) - f(x, y)|`` against the reference rate ``M_{n1,n2}(x, y)``."""

    def row(n1, n2, x, y):
        p1, p2 = BasisParams(n1, a), BasisParams(n2, a)
        err = abs(apply_2d(p1, p2, f, x, y, eps) - float(f(x, y)))
        m = delta_bound(p1, x).bound + delta_bound(p2, y).bound
        return Row.make(n1, n2, x, y, err, m, eps)

    meta = {"experiment": "convergence", "a": a, "function": f.label, "eps": eps, "reference": "M_{n1,n2}(x,y)"}
    return ExperimentTable(_evaluate_rows(params_seq, points, row), meta)


def check_convergence(table: ExperimentTable, from_n: int = 40, factor: float = 10.0) -> list:
    """Per point: is the error decreasing for ``n >= from_n`` and below first/``factor`` at the end?"""
    out = []
    for x, y in table.points():
        sub = table.select(x=x, y=y)
        err = sub.column("observed")
        ns = np.array([r.n1 for r in sub.rows])
        tail = err[ns >= from_n]
        decreasing = bool(np.all(np.diff(tail) < 0))
        shrunk = bool(err[-1] < err[0] / factor)
        out.append({"point": (x, y), "decreasing": decreasing, "shrunk": shrunk, "first": err[0], "last": err[-1]})
    return out


def rate_bound_experiment(
    f: Function2D,
    params_seq,
    a: float,
    points,
    grid: EvaluationGrid,
    eps: float = 1e-12,
    variant: str = "derivative",
) -> ExperimentTable:
    """Weighted error against the first-derivative or modulus rate bound.

    ``variant='derivative'``:
        ``||f_x|| d_{n1}(x)/sqrt(n1+1) + ||f_y|| d_{n2}(y)/sqrt(n2+1)``.
    ``variant='modulus'``:
        ``omega(f; d_{n1}(x)/sqrt(n1+1), d_{n2}(y)/sqrt(n2+1))``.
    Norms and moduli are grid estimates.
    """
    if variant not in ("derivative", "modulus"):
        raise ValueError(f"variant must be 'derivative' or 'modulus', got {variant!r}")
    g = f.growth
    if variant == "derivative":
        nx = weighted_sup_norm(f.partial("x"), grid, g)
        ny = weighted_sup_norm(f.partial("y"), grid, g)
    cache = {}

    def row(n1, n2, x, y):
        p1, p2 = BasisParams(n1, a), BasisParams(n2, a)
        err = abs(apply_2d(p1, p2, f, x, y, eps) - float(f(x, y)))
        observed = float(weight_2d(g, x, y)) * err
        h = delta_bound(p1, x).delta / math.sqrt(n1 + 1)
        d = delta_bound(p2, y).delta / math.sqrt(n2 + 1)
        if variant == "derivative":
            bound = nx * h + ny * d
        else:
            if (h, d) not in cache:
                cache[(h, d)] = weighted_modulus(f, h, d, grid, g)
            bound = cache[(h, d)]
        return Row.make(n1, n2, x, y, observed, bound, eps)

    meta = {
        "experiment": f"rate-{variant}",
        "a": a,
        "function": f.label,
        "eps": eps,
        "grid": grid.describe(),
        "note": "norms and moduli are grid estimates",
    }
    table = ExperimentTable(_evaluate_rows(params_seq, points, row), meta)
    table.metadata["fitted_constant"] = fitted_constant(table)
    return table


@dataclass
class BoundednessResult:
    """Per-``n`` suprema for the two weighted boundedness estimates."""

    item_i: ExperimentTable
    item_ii: ExperimentTable


def _inverse_weight_poly(gamma: int) -> Polynomial:
    c = np.zeros(gamma + 1)
    c[0] += 1.0
    c[gamma] += 1.0
    return Polynomial(c)


def weighted_boundedness_check(
    gamma: int, ns: Iterable, a: float, x_points, eps: float = 1e-12
) -> BoundednessResult:
    """Suprema over ``x_points`` of ``w(x) K(1/w; x)`` and of
    ``w(x) K((t-x)^2 / w(t); x) (n+1) / delta_n(x)^2``, one row per ``n``.

    ``w = weight(gamma, .)`` so ``1/w(t) = 1 + t^gamma`` is a polynomial and
    every evaluation uses exact cell integrals.
    """
    inv_w = Function1D.polynomial(_inverse_weight_poly(gamma).coef, label=f"1+t^{gamma}")
    rows_i, rows_ii = [], []
    for n in ns:
        p = BasisParams(int(n), a)
        best_i = best_ii = None
        for x in x_points:
            x = float(x)
            w = weight(gamma, x)
            v_i = w * apply_1d(p, inv_w, x, eps)
            # (t - x)^2 (1 + t^gamma) written as a polynomial in s = t - x
            s2 = Polynomial([0.0, 0.0, 1.0])
            poly = s2 * (1.0 + Polynomial([x, 1.0]) ** gamma)
            fx = Function1D.polynomial(poly.coef, label="(t-x)^2/w", shift=x)
            obs_ii = w * apply_1d(p, fx, x, eps)
            ref_ii = delta_bound(p, x).bound
            r_i = Row.make(n, n, x, 0.0, v_i, 1.0)
            r_ii = Row.make(n, n, x, 0.0, obs_ii, ref_ii)
            if best_i is None or r_i.ratio > best_i.ratio:
                best_i = r_i
            if best_ii is None or r_ii.ratio > best_ii.ratio:
                best_ii = r_ii
        rows_i.append(best_i)
        rows_ii.append(best_ii)
    meta = {"a": a, "gamma": gamma, "eps": eps, "x_points": len(x_points)}
    ti = ExperimentTable(rows_i, {**meta, "experiment": "weighted-boundedness-i"})
    tii = ExperimentTable(rows_ii, {**meta, "experiment": "weighted-boundedness-ii"})
    ti.metadata["fitted_constant"] = fitted_constant(ti)
    tii.metadata["fitted_constant"] = fitted_constant(tii)
    return BoundednessResult(ti, tii)


def operator_norm_check(f: Function2D, ns: Iterable, a: float, grid: EvaluationGrid, eps: float = 1e-12) -> ExperimentTable:
    """``||K_{n,n} f||`` against ``||f|| * M1(g1, n) * M1(g2, n)`` (grid norms).

    ``M1(g, n)`` is the item-(i) supremum of :func:`weighted_boundedness_check`
    over the grid's axis points; the product bound follows from the tensor
    structure, so every ratio should be at most one.
    """
    g1, g2 = f.growth
    norm_f = weighted_sup_norm(f, grid)
    rows = []
    for n in ns:
        p = BasisParams(int(n), a)
        kf = apply_2d_grid(p, p, f, grid.x_points, grid.y_points, eps)
        X, Y = grid.mesh()
        norm_kf = float(np.max(np.abs(kf) * weight_2d((g1, g2), X, Y)))
        m1 = weighted_boundedness_check(g1, [n], a, grid.x_points, eps).item_i.rows[0].observed
        m2 = weighted_boundedness_check(g2, [n], a, grid.y_points, eps).item_i.rows[0].observed
        rows.append(Row.make(n, n, math.nan, math.nan, norm_kf, norm_f * m1 * m2))
    table = ExperimentTable(rows, {"experiment": "operator-norm", "a": a, "function": f.label, "grid": grid.describe()})
    table.metadata["M3"] = max(r.observed for r in rows) / norm_f if norm_f else 0.0
    return table


def _first_moment_coefficient(a: float, x: float) -> float:
    return -x + a * x / (1.0 + x) + 0.5


def voronovskaja_rhs(f: Function2D, a: float, x: float, y: float, coefficient_variant: str = "moment") -> float:
    """Right-hand side of the Voronovskaja limit.

    ``variant='paper'`` uses ``x (x+2)/2`` in front of ``f_xx`` as published;
    ``variant='moment'`` uses ``x (1+x)/2``, the limit of ``n u_{n,2}(x)/2``.
    """
    if coefficient_variant == "paper":
        cx, cy = x * (x + 2.0) / 2.0, y * (y + 2.0) / 2.0
    elif coefficient_variant == "moment":
        cx, cy = x * (1.0 + x) / 2.0, y * (1.0 + y) / 2.0
    else:
        raise ValueError(f"coefficient_variant must be 'paper' or 'moment', got {coefficient_variant!r}")
    fx, fy, fxx, fyy = (float(f.partial(k)(x, y)) for k in ("x", "y", "xx", "yy"))
    return _first_moment_coefficient(a, x) * fx + _first_moment_coefficient(a, y) * fy + cx * fxx + cy * fyy


def voronovskaja_exact_e20(a: float, x: float) -> float:
    """``lim n (K_{n,n}(u^2) - x^2)`` from the closed second moment: ``-x^2 + 2x + 2 a x^2/(1+x)``."""
    return -x * x + 2.0 * x + 2.0 * a * x * x / (1.0 + x)


def voronovskaja_sequence(f: Function2D, a: float, x: float, y: float, n_seq, eps: float = 1e-12) -> np.ndarray:
    fxy = float(f(x, y))
    vals = []
    for n in n_seq:
        p = BasisParams(int(n), a)
        vals.append(n * (apply_2d(p, p, f, x, y, eps) - fxy))
    return np.array(vals)


def _limit_with_fit(ns, vals):
    est = richardson(ns, vals)
    resid = np.abs(np.asarray(vals) - est)
    scale = max(abs(est), float(np.max(np.abs(vals))), 1e-300)
    if len(ns) < 4 or np.any(resid <= 1e-13 * scale):
        return est, _degenerate_fit(ns)
    return est, fit_power_law(ns, resid)


def voronovskaja_limit(f: Function2D, a: float, x: float, y: float, n_seq=DEFAULT_N_SEQ, eps: float = 1e-12):
    """Richardson estimate of ``lim n (K_{n,n} f - f)`` and a fit of its residuals.

    The residual fit (``|v_n - estimate|`` against ``n``) should show slope
    near ``-1``; a degenerate or poor fit is flagged on the returned
    :class:`SlopeFit`.
    """
    n_seq = list(n_seq)
    if len(n_seq) < 4:
        raise ValueError("n_seq needs at least 4 values")
    return _limit_with_fit(n_seq, voronovskaja_sequence(f, a, x, y, n_seq, eps))


@dataclass(frozen=True)
class VoronovskajaVerdict:
    estimate: float
    rhs_paper: float
    rhs_moment: float
    residual_paper: float
    residual_moment: float
    winner: Optional[str]
    fit: SlopeFit

    def describe(self) -> str:
        who = self.winner or "neither"
        return (
            f"winner={who} estimate={self.estimate:.10g} paper={self.rhs_paper:.10g} "
            f"(rel.res {self.residual_paper:.3g}) moment={self.rhs_moment:.10g} "
            f"(rel.res {self.residual_moment:.3g})"
        )


def _rel(est, target):
    return abs(est - target) / abs(target) if target != 0 else abs(est - target)


def arbitrate_voronovskaja(
    f: Function2D, a: float, x: float, y: float, n_seq=DEFAULT_N_SEQ, eps: float = 1e-12, rel: float = 0.01
) -> VoronovskajaVerdict:
    """Decide which coefficient variant the extrapolated limit supports.

    ``winner`` is ``'paper'`` or ``'moment'`` when exactly one variant is
    within ``rel`` relative error, ``'both'`` when the two coincide, else None.
    """
    est, fit = voronovskaja_limit(f, a, x, y, n_seq, eps)
    rp = voronovskaja_rhs(f, a, x, y, "paper")
    rm = voronovskaja_rhs(f, a, x, y, "moment")
    res_p, res_m = _rel(est, rp), _rel(est, rm)
    ok_p, ok_m = res_p <= rel, res_m <= rel
    winner = "both" if ok_p and ok_m else "paper" if ok_p else "moment" if ok_m else None
    return VoronovskajaVerdict(est, rp, rm, res_p, res_m, winner, fit)


def derivative_convergence(f: Function2D, a: float, x: float, y: float, n_seq=DEFAULT_N_SEQ, eps: float = 1e-12) -> dict:
    """``|d/dx K_{n,n} f - f_x|`` and ``|d/dy K_{n,n} f - f_y|`` at ``(x, y)``, one table per axis.

    The reference column is the rate ``1/(n+1)``, so ``ratio`` settles to a
    constant when the error is first order.
    """
    if x <= 0 or y <= 0:
        raise ValueError("derivative convergence is only defined on the open quadrant")
    fx = float(f.partial("x")(x, y))
    fy = float(f.partial("y")(x, y))
    out = {}
    for axis, op, exact in (("x", partial_x, fx), ("y", partial_y, fy)):

        def row(n1, n2, xx, yy, op=op, exact=exact):
            p1, p2 = BasisParams(n1, a), BasisParams(n2, a)
            return Row.make(n1, n2, xx, yy, abs(op(p1, p2, f, xx, yy, eps) - exact), 1.0 / (n1 + 1))

        meta = {"experiment": f"derivative-{axis}", "a": a, "function": f.label, "eps": eps, "reference": "1/(n+1)"}
        out[axis] = ExperimentTable(_evaluate_rows(list(n_seq), [(x, y)], row), meta)
    return out


def derivative_voronovskaja_rhs(f: Function2D, a: float, x: float, y: float, axis: str = "x") -> float:
    """Limit of ``n (d/dx K_{n,n} f - f_x)`` (or its ``y`` mirror); needs third-order partials."""
    if x <= 0 or y <= 0:
        raise ValueError("defined on the open quadrant only")
    if axis == "x":
        p, q = x, y
        d1, d11, d12, d122, d111 = "x", "xx", "xy", "xyy", "xxx"
    elif axis == "y":
        p, q = y, x
        d1, d11, d12, d122, d111 = "y", "yy", "xy", "xxy", "yyy"
    else:
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    v = {k: float(f.partial(k)(x, y)) for k in (d1, d11, d12, d122, d111)}
    return (
        (-1.0 + a / (1.0 + p) ** 2) * v[d1]
        + (1.0 + a * p / (1.0 + p)) * v[d11]
        + _first_moment_coefficient(a, q) * v[d12]
        + q * (1.0 + q) / 2.0 * v[d122]
        + p * (1.0 + p) / 2.0 * v[d111]
    )


def derivative_voronovskaja_limit(
    f: Function2D, a: float, x: float, y: float, axis: str = "x", n_seq=DEFAULT_N_SEQ, eps: float = 1e-12
):
    """Richardson estimate of ``lim n (d/dx K_{n,n} f - f_x)`` with residual fit."""
    op = partial_x if axis == "x" else partial_y
    exact = float(f.partial(axis)(x, y))
    n_seq = list(n_seq)
    vals = [n * (op(BasisParams(n, a), BasisParams(n, a), f, x, y, eps) - exact) for n in n_seq]
    return _limit_with_fit(n_seq, vals)


@dataclass(frozen=True)
class Theorem41Components:
    """Ingredients of the local estimate at one point.

    ``M_term = delta_{n1}(x)^2/(n1+1) + delta_{n2}(y)^2/(n2+1)``;
    ``omega_term`` is the complete modulus at the length of the first-moment
    offset vector; ``omega2_term`` is the second modulus at ``sqrt(M_term)``.
    """

    M_term: float
    omega_term: float
    error: float
    omega2_term: float
    sup_norm: float
    omega_argument: float

    def implied_constant(self) -> float:
        """Smallest ``C`` with ``error <= C (omega2 + min(1, M) ||f||) + omega_term``."""
        rest = self.error - self.omega_term
        denom = self.omega2_term + min(1.0, self.M_term) * self.sup_norm
        if rest <= 0:
            return 0.0
        return math.inf if denom == 0 else rest / denom


def theorem41_components(
    f: Function2D, p1: BasisParams, p2: BasisParams, x: float, y: float, grid: EvaluationGrid, eps: float = 1e-12
) -> Theorem41Components:
    m = delta_bound(p1, x).bound + delta_bound(p2, y).bound
    u1 = central_moment_2d_closed(p1, p2, "u", 1, x, y)
    u2 = central_moment_2d_closed(p1, p2, "v", 1, x, y)
    arg = math.hypot(u1, u2)
    err = abs(apply_2d(p1, p2, f, x, y, eps) - float(f(x, y)))
    return Theorem41Components(
        M_term=m,
        omega_term=complete_modulus(f, arg, grid),
        error=err,
        omega2_term=second_modulus(f, m, grid),
        sup_norm=sup_norm(f, grid),
        omega_argument=arg,
    )
