"""Generalized Baskakov basis functions.

The basis on index ``k`` is

    W_{n,k}^a(x) = exp(-a x / (1 + x)) * P_k(n, a) / k! * x^k / (1 + x)^(n + k)

with ``P_k(n, a) = sum_i binom(k, i) (n)_i a^(k - i)``.  Expanding ``P_k``
term by term shows that ``W_{n,.}^a(x)`` is the law of ``J + M`` where
``J ~ Poisson(a x / (1 + x))`` and ``M`` is negative binomial with ``n``
successes and success probability ``1 / (1 + x)``.  Pointwise evaluation
uses the log-space formula; windows used inside operator sums use the
convolution, which keeps relative accuracy near 1e-14 even when the log
terms are in the thousands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special, stats

__all__ = [
    "BasisParams",
    "TruncatedBasis",
    "WindowCapError",
    "DomainError",
    "DEFAULT_WINDOW_CAP",
    "pochhammer_log",
    "log_poly_P",
    "poly_P",
    "basis_weight",
    "basis_weight_derivative",
    "window_weights",
    "truncate_basis",
]

DEFAULT_WINDOW_CAP = 10**7

# Poisson component is cut where its upper tail drops below this mass.
_POISSON_TAIL = 1e-40


class WindowCapError(RuntimeError):
    """Raised when a truncation window cannot be certified under the cap."""


class DomainError(ValueError):
    """Argument outside the domain where a formula is defined."""


@dataclass(frozen=True)
class BasisParams:
    """Operator index ``n`` and shape parameter ``a`` of one basis family."""

    n: int
    a: float = 0.0

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        a = float(self.a)
        if not math.isfinite(a) or a < 0:
            raise ValueError(f"a must be a finite real >= 0, got {self.a!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "a", a)

    def poisson_rate(self, x: float) -> float:
        """``a x / (1 + x)``, the mean of the Poisson component."""
        return self.a * x / (1.0 + x)

    def mean_index(self, x: float) -> float:
        return self.n * x + self.poisson_rate(x)

    def index_variance(self, x: float) -> float:
        return self.n * x * (1.0 + x) + self.poisson_rate(x)


def _check_x(x: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x < 0:
        raise DomainError(f"x must be a finite real >= 0, got {x!r}")
    return x


def pochhammer_log(n: float, i: int) -> float:
    """Return ``log((n)_i)`` for the rising factorial ``n (n+1) ... (n+i-1)``."""
    if n <= 0 or i < 0:
        raise ValueError(f"need n > 0 and i >= 0, got n={n!r}, i={i!r}")
    if i == 0:
        return 0.0
    return math.lgamma(n + i) - math.lgamma(n)


def log_poly_P(k: int, params: BasisParams) -> float:
    """Return ``log P_k(n, a)`` by log-sum-exp over the nonnegative terms."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k!r}")
    n, a = params.n, params.a
    if k == 0:
        return 0.0
    if a == 0.0:
        return pochhammer_log(n, k)
    i = np.arange(k + 1, dtype=float)
    terms = (
        special.gammaln(k + 1.0)
        - special.gammaln(i + 1.0)
        - special.gammaln(k - i + 1.0)
        + special.gammaln(n + i)
        - special.gammaln(float(n))
        + (k - i) * math.log(a)
    )
    return float(special.logsumexp(terms))


def poly_P(k: int, params: BasisParams) -> float:
    """Return ``P_k(n, a)``.

    Raises
    ------
    OverflowError
        If the value does not fit in a double.  Callers that need the basis
        weight should go through :func:`basis_weight`, which never forms
        ``P_k`` directly.
    """
    logp = log_poly_P(k, params)
    if logp > math.log(np.finfo(float).max):
        raise OverflowError(f"P_{k}(n={params.n}, a={params.a}) overflows a double")
    return math.exp(logp)


def basis_weight(params: BasisParams, k: int, x: float) -> float:
    """Return ``W_{n,k}^a(x)`` evaluated in log space."""
    x = _check_x(x)
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k!r}")
    if x == 0.0:
        # 0^0 = 1: all mass sits on k = 0
        return 1.0 if k == 0 else 0.0
    n = params.n
    logw = (
        -params.poisson_rate(x)
        + log_poly_P(k, params)
        - math.lgamma(k + 1.0)
        + k * math.log(x)
        - (n + k) * math.log1p(x)
    )
    return math.exp(logw)


def basis_weight_derivative(params: BasisParams, k: int, x: float) -> float:
    """Return ``d/dx W_{n,k}^a(x)`` for ``x > 0``.

    Uses ``W' = W ((k - n x)(1 + x) - a x) / (x (1 + x)^2)``, which is singular
    at the origin; derivatives of the operator are only taken on the open
    quadrant.
    """
    x = _check_x(x)
    if x == 0.0:
        raise DomainError(
            "basis derivative is only defined for x > 0 (simultaneous "
            "approximation holds on the open quadrant)"
        )
    n, a = params.n, params.a
    factor = ((k - n * x) * (1.0 + x) - a * x) / (x * (1.0 + x) ** 2)
    return basis_weight(params, k, x) * factor


def _poisson_part(lam: float) -> tuple[np.ndarray, float]:
    if lam == 0.0:
        return np.ones(1), 0.0
    jmax = int(math.ceil(lam + 14.0 * math.sqrt(lam) + 60.0))
    while stats.poisson.sf(jmax, lam) > _POISSON_TAIL:
        jmax *= 2
    j = np.arange(jmax + 1)
    return stats.poisson.pmf(j, lam), float(stats.poisson.sf(jmax, lam))


def window_weights(params: BasisParams, x: float, start: int, stop: int) -> np.ndarray:
    """Weights ``W_{n,k}^a(x)`` for ``start <= k < stop`` via the convolution.

    The Poisson factor is cut once its tail mass is below 1e-40.
    """
    x = _check_x(x)
    start = max(int(start), 0)
    stop = int(stop)
    if stop <= start:
        return np.zeros(0)
    k = np.arange(start, stop)
    if x == 0.0:
        return (k == 0).astype(float)
    pois, _ = _poisson_part(params.poisson_rate(x))
    lo = max(0, start - (len(pois) - 1))
    m = np.arange(lo, stop)
    nb = stats.nbinom.pmf(m, params.n, 1.0 / (1.0 + x))
    conv = np.convolve(nb, pois)[: len(m)]
    return conv[start - lo :]


@dataclass(frozen=True, eq=False)
class TruncatedBasis:
    """A contiguous window of basis weights with a certified tail bound.

    ``tail_bound`` majorizes the basis mass outside the window.
    ``weighted_tail_bound`` majorizes ``sum W_k (1 + ((k+1)/(n+1))^growth)``
    outside the window, the quantity that controls truncation error for an
    integrand of polynomial growth ``growth``.
    """

    params: BasisParams
    x: float
    start: int
    weights: np.ndarray
    tail_bound: float
    weighted_tail_bound: float
    growth: int = 0

    @property
    def stop(self) -> int:
        return self.start + len(self.weights)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.start, self.stop)

    @property
    def window(self) -> list[tuple[int, float]]:
        return [(int(k), float(w)) for k, w in zip(self.indices, self.weights)]

    @property
    def mass(self) -> float:
        return float(math.fsum(self.weights))

    def derivative_weights(self) -> np.ndarray:
        """``d/dx W_k`` on the window, using the closed-form log-derivative."""
        x = self.x
        if x == 0.0:
            raise DomainError("basis derivative is only defined for x > 0")
        p = self.params
        factor = (self.indices - p.mean_index(x)) / (x * (1.0 + x))
        return self.weights * factor


def _tails(w_ext, start, stop, has_left, m, growth):
    """Geometric majorants for the mass left and right of ``[start, stop)``.

    The basis is a convolution of log-concave sequences, hence log-concave,
    so the ratio ``W_{k+1} / W_k`` is nonincreasing in ``k``.
    """
    inside_first = w_ext[1] if has_left else w_ext[0]
    inside_last = w_ext[-2]
    beyond = w_ext[-1]

    def g(k):
        return 1.0 + ((k + 1.0) / m) ** growth

    # right tail, k >= stop
    if beyond == 0.0:
        right = wright = 0.0
    elif inside_last == 0.0:
        return math.inf, math.inf
    else:
        rho = beyond / inside_last
        rho_g = rho * ((stop + 2.0) / (stop + 1.0)) ** growth
        if rho >= 1.0 or rho_g >= 1.0:
            return math.inf, math.inf
        right = beyond / (1.0 - rho)
        wright = beyond * g(stop) / (1.0 - rho_g)

    # left tail, k < start
    if not has_left:
        left = wleft = 0.0
    else:
        before = w_ext[0]
        if before == 0.0:
            left = wleft = 0.0
        elif inside_first == 0.0:
            return math.inf, math.inf
        else:
            sigma = before / inside_first
            if sigma >= 1.0:
                return math.inf, math.inf
            left = before / (1.0 - sigma)
            wleft = left * g(start - 1)
    return left + right, wleft + wright


def truncate_basis(
    params: BasisParams,
    x: float,
    eps: float = 1e-12,
    growth: int = 0,
    cap: int = DEFAULT_WINDOW_CAP,
) -> TruncatedBasis:
    """Smallest doubling window around the mode whose weighted tail is < ``eps``.

    Parameters
    ----------
    params : BasisParams
    x : float
        Evaluation point, ``x >= 0``.
    eps : float
        Target for the weighted tail bound.
    growth : int
        Polynomial growth exponent of the integrand the window will serve.
    cap : int
        Maximum window length.

    Raises
    ------
    WindowCapError
        If the window reaches ``cap`` indices before the bound is met.
    """
    x = _check_x(x)
    if not eps > 0:
        raise ValueError(f"eps must be > 0, got {eps!r}")
    if growth < 0:
        raise ValueError(f"growth must be >= 0, got {growth!r}")
    if x == 0.0:
        return TruncatedBasis(params, x, 0, _frozen(np.ones(1)), 0.0, 0.0, growth)

    m = params.n + 1
    _, pois_tail = _poisson_part(params.poisson_rate(x))
    center = int(round(params.mean_index(x)))
    half = max(8, int(math.ceil(6.0 * math.sqrt(params.index_variance(x)))))
    while True:
        start = max(0, center - half)
        stop = center + half + 1
        if stop - start > cap:
            raise WindowCapError(
                f"window for n={params.n}, a={params.a}, x={x} exceeds {cap} "
                f"indices before reaching eps={eps}"
            )
        has_left = start > 0
        w_ext = window_weights(params, x, start - 1 if has_left else start, stop + 1)
        tail, wtail = _tails(w_ext, start, stop, has_left, m, growth)
        tail += pois_tail
        wtail += pois_tail * (1.0 + (stop / m) ** growth)
        if wtail < eps:
            weights = w_ext[1:-1] if has_left else w_ext[:-1]
            return TruncatedBasis(params, x, start, _frozen(weights), tail, wtail, growth)
        half *= 2


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.flags.writeable = False
    return a
