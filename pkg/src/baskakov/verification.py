"""The verification battery run by ``verify-all``.

Each check returns a :class:`CheckResult` holding a pass flag, a one-line
measurement, and any tables it produced.  A few checks are registered as
expected failures: they test a published formula or a configuration where
the claim cannot hold, and they count against the run only if they pass.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import analysis as A
from .basis import BasisParams, truncate_basis
from .catalog import LIPSCHITZ, get_function, monomial_2d
from .function_spaces import (
    EvaluationGrid,
    steklov_function,
    weighted_modulus,
    weighted_sup_norm,
)
from .kantorovich_1d import Function1D, central_moment_numeric
from .kantorovich_2d import (
    Function2D,
    apply_2d,
    central_moment_2d_closed,
    delta_bound,
    partial_x,
    test_moment_2d_closed,
)

__all__ = ["CheckResult", "CHECKS", "run_checks"]

MOMENT_NS = (5, 10, 50, 100)
MOMENT_AS = (0.0, 1.0, 2.0)
MOMENT_PTS = (0.0, 0.5, 1.0, 2.0, 5.0)
# the raw moments with closed forms: 1, u, v, u^2, v^2, u^3, v^3
RAW_ITEMS = ((0, 0), (1, 0), (0, 1), (2, 0), (0, 2), (3, 0), (0, 3))
ORDER_NS = (50, 100, 200, 400, 800)


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: str
    expected_failure: bool = False
    tables: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def status(self) -> str:
        if self.expected_failure:
            return "XPASS" if self.passed else "XFAIL"
        return "PASS" if self.passed else "FAIL"

    @property
    def ok(self) -> bool:
        return self.passed != self.expected_failure


def _grid_points():
    for n in MOMENT_NS:
        for a in MOMENT_AS:
            for x in MOMENT_PTS:
                for y in MOMENT_PTS:
                    yield BasisParams(n, a), x, y


def _raw_moment_gap(eps: float, printed: bool, items=RAW_ITEMS) -> float:
    worst = 0.0
    for p, x, y in _grid_points():
        for i, j in items:
            series = apply_2d(p, p, monomial_2d(i, j), x, y, eps)
            worst = max(worst, abs(series - test_moment_2d_closed(p, p, i, j, x, y, printed=printed)))
    return worst


def check_moment_identities(eps: float, grid: EvaluationGrid) -> CheckResult:
    one = Function1D.monomial(0)
    worst_raw = _raw_moment_gap(eps, printed=False)
    worst_central = 0.0
    for p, x, y in _grid_points():
        for r in (1, 2):
            fu = Function2D.separable(Function1D.monomial(r, shift=x), one)
            fv = Function2D.separable(one, Function1D.monomial(r, shift=y))
            for axis, f in (("u", fu), ("v", fv)):
                gap = abs(apply_2d(p, p, f, x, y, eps) - central_moment_2d_closed(p, p, axis, r, x, y))
                worst_central = max(worst_central, gap)
    worst = max(worst_raw, worst_central)
    return CheckResult(
        "moment-identities",
        worst <= 1e-10,
        f"max |series - closed| raw={worst_raw:.3g} central={worst_central:.3g} (tol 1e-10)",
    )


def check_printed_third_moment(eps: float, grid: EvaluationGrid) -> CheckResult:
    worst = _raw_moment_gap(eps, printed=True, items=((3, 0), (0, 3)))
    return CheckResult(
        "third-moment-as-published",
        worst <= 1e-10,
        f"max |series - published cubic moment| = {worst:.3g} (tol 1e-10)",
        expected_failure=True,
    )


def check_partition_of_unity(eps: float, grid: EvaluationGrid) -> CheckResult:
    worst = -math.inf
    for n in MOMENT_NS + (500,):
        for a in MOMENT_AS:
            for x in MOMENT_PTS:
                tb = truncate_basis(BasisParams(n, a), x, 1e-13)
                worst = max(worst, abs(tb.mass - 1.0) - (1e-12 + tb.tail_bound))
    return CheckResult("partition-of-unity", worst <= 0, f"max(|sum W - 1| - 1e-12 - tail) = {worst:.3g}")


def check_second_moment_bound(eps: float, grid: EvaluationGrid) -> CheckResult:
    worst = -math.inf
    for n in MOMENT_NS:
        for a in MOMENT_AS:
            p = BasisParams(n, a)
            for x in MOMENT_PTS:
                worst = max(worst, central_moment_numeric(p, 2, x, eps) - delta_bound(p, x).bound)
    return CheckResult("second-moment-bound", worst <= 1e-12, f"max(K((t-x)^2) - delta^2/(n+1)) = {worst:.3g}")


def _order_table(r: int, x: float, a: float, eps: float) -> A.ExperimentTable:
    rows = []
    for n in ORDER_NS:
        val = central_moment_numeric(BasisParams(n, a), r, x, eps)
        rows.append(A.Row.make(n, n, x, 0.0, abs(val), 1.0))
    return A.ExperimentTable(rows, {"experiment": f"central-moment-{r}", "a": a})


def _slope_ok(table, target) -> tuple:
    try:
        fit = A.order_fit(table)
    except ValueError as exc:
        return False, f"no fit ({exc})"
    ok = abs(fit.slope - target) <= 0.15 and fit.r_squared >= 0.98
    return ok, f"slope={fit.slope:.4f} r2={fit.r_squared:.5f} (target {target})"


def check_central_orders(eps: float, grid: EvaluationGrid) -> CheckResult:
    parts, ok, tables = [], True, {}
    for r, target in ((2, -1), (3, -2), (4, -2)):
        t = _order_table(r, 1.0, 1.0, eps)
        tables[f"central-moment-r{r}.csv"] = t
        good, msg = _slope_ok(t, target)
        ok &= good
        parts.append(f"r={r}: {msg}")
    t = _order_table(1, 1.0, 0.0, eps)
    tables["central-moment-r1-a0.csv"] = t
    good, msg = _slope_ok(t, -1)
    ok &= good
    parts.append(f"r=1 (x=1, a=0): {msg}")
    return CheckResult("central-moment-orders", ok, "; ".join(parts), tables=tables)


def check_first_moment_order_degenerate(eps: float, grid: EvaluationGrid) -> CheckResult:
    t = _order_table(1, 1.0, 1.0, eps)
    good, msg = _slope_ok(t, -1)
    return CheckResult(
        "first-moment-order-at-(1,1)",
        good,
        f"u_1 vanishes identically at x=1, a=1: {msg}",
        expected_failure=True,
    )


CONVERGENCE_CASES = (("e_{1,1}", 0.0), ("exp-decay", 0.0), ("sin-product", 0.0), ("exp-decay", 1.0), ("sin-product", 1.0))


def check_convergence(eps: float, grid: EvaluationGrid) -> CheckResult:
    ok, parts, tables = True, [], {}
    for name, a in CONVERGENCE_CASES:
        t = A.convergence_experiment(get_function(name), A.DEFAULT_N_SEQ, a, [(1.0, 1.0)], eps)
        tables[f"converge-{name}-a{a:g}.csv"] = t
        (v,) = A.check_convergence(t, from_n=40, factor=10)
        good = v["decreasing"] and v["shrunk"] and not t.failed
        ok &= good
        parts.append(f"{name} a={a:g}: {v['first']:.3g}->{v['last']:.3g}")
    return CheckResult("convergence", ok, "; ".join(parts), tables=tables)


RATE_FUNCTIONS = ("affine", "exp-decay", "sin-product")
RATE_PTS = tuple((x, y) for x in MOMENT_PTS for y in MOMENT_PTS)


def check_rate_bounds(eps: float, grid: EvaluationGrid) -> CheckResult:
    ok, parts, tables = True, [], {}
    for name in RATE_FUNCTIONS:
        f = get_function(name)
        for variant in ("derivative", "modulus"):
            t = A.rate_bound_experiment(f, A.DEFAULT_N_SEQ, 1.0, RATE_PTS, grid, eps, variant)
            tables[f"rate-{variant}-{name}.csv"] = t
            fc = t.metadata["fitted_constant"]
            good = math.isfinite(fc["full"]) and fc["stability"] < 2 and not t.failed
            ok &= good
            parts.append(f"{name}/{variant}: C={fc['full']:.4g} x{fc['stability']:.3f}")
    for gamma in (0, 1, 2):
        res = A.weighted_boundedness_check(gamma, A.DEFAULT_N_SEQ, 1.0, grid.x_points, eps)
        for label, t, col in (("i", res.item_i, "observed"), ("ii", res.item_ii, "ratio")):
            tables[f"boundedness-{label}-g{gamma}.csv"] = t
            fc = A.fitted_constant(t, col)
            vals = t.column(col)
            good = fc["stability"] < 2 and vals.max() / vals.min() < 10
            if gamma == 0 and label == "i":
                good &= bool(np.all(np.abs(vals - 1.0) <= 1e-12))
            ok &= good
            parts.append(f"weight g={gamma} ({label}): C={fc['full']:.4g} x{fc['stability']:.3f}")
    t = A.operator_norm_check(get_function("e_{1,1}"), A.DEFAULT_N_SEQ, 1.0, grid, eps)
    tables["operator-norm-e_{1,1}.csv"] = t
    norm_ratio = A.fitted_constant(
        A.ExperimentTable([A.Row.make(r.n1, r.n2, 0, 0, r.observed, 1.0) for r in t.rows]), "observed"
    )
    good = bool(np.all(t.column("ratio") <= 1.0 + 1e-12)) and norm_ratio["stability"] < 2
    ok &= good
    parts.append(f"operator norm: max ratio={t.column('ratio').max():.4g} M3={t.metadata['M3']:.4g}")
    return CheckResult("rate-bounds", ok, "; ".join(parts), tables=tables)


VORONOVSKAJA_FUNCTIONS = ("e_{2,0}", "e_{0,2}", "e_{2,0}+e_{0,2}", "exp-decay")


def _voronovskaja_table(f, a, x, y, eps):
    ns = list(A.DEFAULT_N_SEQ)
    vals = A.voronovskaja_sequence(f, a, x, y, ns, eps)
    est = A.richardson(ns, vals)
    rows = [A.Row.make(n, n, x, y, v, est) for n, v in zip(ns, vals)]
    return A.ExperimentTable(rows, {"experiment": "voronovskaja", "a": a, "function": f.label}), est


def check_voronovskaja(eps: float, grid: EvaluationGrid) -> CheckResult:
    ok, parts, tables = True, [], {}
    for a in (0.0, 1.0):
        exact = A.voronovskaja_exact_e20(a, 1.0)
        est, _ = A.voronovskaja_limit(get_function("e_{2,0}"), a, 1.0, 1.0, A.DEFAULT_N_SEQ, eps)
        good = abs(est - exact) <= 0.01 * abs(exact)
        ok &= good
        parts.append(f"e_{{2,0}} a={a:g}: exact={exact:.6g} extrapolated={est:.6g}")
    for name in VORONOVSKAJA_FUNCTIONS:
        f = get_function(name)
        for a in (0.0, 1.0):
            t, _ = _voronovskaja_table(f, a, 1.0, 1.0, eps)
            tables[f"voronovskaja-{name}-a{a:g}.csv"] = t
            v = A.arbitrate_voronovskaja(f, a, 1.0, 1.0, A.DEFAULT_N_SEQ, eps)
            good = v.winner in ("paper", "moment")
            ok &= good
            res = v.residual_moment if v.winner == "moment" else v.residual_paper
            parts.append(f"{name} a={a:g}: winner={v.winner or 'none'} residual={res:.2g}")
    return CheckResult("voronovskaja", ok, "; ".join(parts), tables=tables)


def check_simultaneous(eps: float, grid: EvaluationGrid) -> CheckResult:
    ok, parts, tables = True, [], {}
    f = get_function("e_{2,1}")
    ns = (20, 40, 80, 160, 320, 640)
    for a in (0.0, 1.0):
        d = A.derivative_convergence(f, a, 1.0, 1.0, ns, eps)
        for axis, t in d.items():
            tables[f"derivative-{axis}-e_{{2,1}}-a{a:g}.csv"] = t
        fit = A.order_fit(d["x"])
        good = abs(fit.slope + 1) <= 0.2 and bool(np.all(np.diff(d["x"].column("observed")) < 0))
        ok &= good
        p = BasisParams(20, a)
        h = 1e-5
        fd = (apply_2d(p, p, f, 1.0 + h, 1.0, eps) - apply_2d(p, p, f, 1.0 - h, 1.0, eps)) / (2 * h)
        an = partial_x(p, p, f, 1.0, 1.0, eps)
        rel = abs(an - fd) / abs(an)
        ok &= rel <= 1e-5
        parts.append(f"a={a:g}: slope={fit.slope:.4f} r2={fit.r_squared:.5f} fd-rel={rel:.2g}")
    return CheckResult("simultaneous-approximation", ok, "; ".join(parts), tables=tables)


DERIVATIVE_POLYS = ("e_{1,0}", "e_{2,0}", "e_{3,0}", "e_{1,1}", "e_{2,1}", "e_{1,2}", "e_{0,3}", "affine")


def derivative_voronovskaja_agrees(est: float, rhs: float) -> bool:
    """2% relative agreement; a zero target is compared on the scale 0.01."""
    return abs(est - rhs) <= 0.02 * max(abs(rhs), 0.01)


def check_derivative_voronovskaja(eps: float, grid: EvaluationGrid) -> CheckResult:
    worst, ok = 0.0, True
    for name in DERIVATIVE_POLYS:
        f = get_function(name)
        for a in (0.0, 1.0):
            for axis in ("x", "y"):
                est, _ = A.derivative_voronovskaja_limit(f, a, 1.0, 1.0, axis, A.DEFAULT_N_SEQ, eps)
                rhs = A.derivative_voronovskaja_rhs(f, a, 1.0, 1.0, axis)
                ok &= derivative_voronovskaja_agrees(est, rhs)
                worst = max(worst, abs(est - rhs) / max(abs(rhs), 0.01))
    return CheckResult("derivative-voronovskaja", ok, f"max scaled deviation = {worst:.3g} (tol 0.02)")


STEKLOV_STEPS = ((0.1, 0.1), (0.5, 0.25), (1.0, 1.0))


def _forward_diff(fn, x, y, axis, e=1e-5):
    if axis == "x":
        vals = [fn(x + k * e, y) for k in range(3)]
    else:
        vals = [fn(x, y + k * e) for k in range(3)]
    return (-3 * vals[0] + 4 * vals[1] - vals[2]) / (2 * e)


def steklov_slack(f: Function2D, h: float, delta: float, grid: EvaluationGrid) -> dict:
    """Left side over right side for the three Steklov inequalities, plus the
    worst relative gap between finite differences and the exact partials."""
    s = steklov_function(f, h, delta)
    w = weighted_modulus(f, h, delta, grid)
    diff = Function2D(lambda u, v: s(u, v) - f(u, v), f.growth)
    X, Y = grid.mesh()
    out = {"value": (weighted_sup_norm(diff, grid), w)}
    fd_gap = 0.0
    for axis, step in (("x", h), ("y", delta)):
        fd = _forward_diff(s, X, Y, axis)
        exact = np.asarray(s.partial(axis)(X, Y))
        fd_gap = max(fd_gap, float(np.max(np.abs(fd - exact) / np.maximum(1.0, np.abs(exact)))))
        wfd = weighted_sup_norm(lambda u, v, fd=fd: fd, grid, f.growth)
        out[axis] = (wfd, 2.0 / step * w)
    out["fd_gap"] = fd_gap
    return out


def check_steklov(eps: float, grid: EvaluationGrid) -> CheckResult:
    ok, worst, fd_worst = True, 0.0, 0.0
    for name in LIPSCHITZ:
        f = get_function(name)
        for h, d in STEKLOV_STEPS:
            sl = steklov_slack(f, h, d, grid)
            lhs, rhs = sl["value"]
            ok &= lhs <= rhs + 1e-8
            for axis in ("x", "y"):
                lhs_d, rhs_d = sl[axis]
                ok &= lhs_d <= 1.05 * rhs_d + 1e-8
                if rhs_d > 0:
                    worst = max(worst, lhs_d / rhs_d)
            if rhs > 0:
                worst = max(worst, lhs / rhs)
            fd_worst = max(fd_worst, sl["fd_gap"])
    ok &= fd_worst <= 1e-5
    return CheckResult("steklov", ok, f"max lhs/rhs = {worst:.4g} (slack 5%); fd-vs-exact = {fd_worst:.2g}")


CHECKS: tuple = (
    check_moment_identities,
    check_printed_third_moment,
    check_partition_of_unity,
    check_second_moment_bound,
    check_central_orders,
    check_first_moment_order_degenerate,
    check_convergence,
    check_rate_bounds,
    check_voronovskaja,
    check_simultaneous,
    check_derivative_voronovskaja,
    check_steklov,
)


def run_checks(eps: float = 1e-12, grid: EvaluationGrid = None, checks=CHECKS, on_result: Callable = None) -> list:
    grid = EvaluationGrid.default() if grid is None else grid
    results = []
    for check in checks:
        t0 = time.perf_counter()
        try:
            res = check(eps, grid)
        except Exception as exc:
            res = CheckResult(check.__name__.removeprefix("check_").replace("_", "-"), False, f"error: {exc!r}")
        res.seconds = time.perf_counter() - t0
        results.append(res)
        if on_result is not None:
            on_result(res)
    return results
