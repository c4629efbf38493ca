"""The sharp Schwarz coefficient G_p(r) and its minimising constant.

For r in [0, 1) and q the conjugate exponent of p,

    G_p(r) = inf_a || P(r e_n, .) - a ||_{L^q(S^{n-1})},

the distance in L^q from the zonal kernel to the constants.  For q in (1, inf)
the minimiser a*(r) is the unique root of

    F(r, a) = int (P - a) |P - a|^(q-2) dsigma.

The endpoint cases have closed forms: p = 1 (sup-norm, midpoint of the kernel
range), p = 2 (variance, via 2F1) and p = inf (L^1, median at the equator,
via 3F2).
"""

from __future__ import annotations

import math
from concurrent.futures import Executor
from dataclasses import dataclass, field
from typing import Iterable, Literal

import numpy as np
from scipy.optimize import brentq

from .errors import BracketError, DomainError, InvalidParameters
from .kernel import kernel_range, kernel_zonal
from .quadrature import DEFAULT_ORDER, build_rule, singular_locus
from .specfun import MAX_TERMS, ModelParams, abs_moment, hyp2f1, hyp3f2

Method = Literal["closed_form", "numeric"]

# z = 4 r^2 / (1 + r^2)^2 approaches 1 quadratically in (1 - r); the 3F2
# series needs about 37 / (1 - z) terms, beyond the default cap for r > 0.98
_GINF_TERMS_PER_GAP = 50.0


def conjugate(p: float) -> float:
    """Conjugate exponent: 1 <-> inf, otherwise p / (p - 1)."""
    p = check_exponent(p)
    if p == 1.0:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def check_exponent(p: float) -> float:
    p = float(p)
    if not (p >= 1.0):
        raise InvalidParameters(f"exponent must lie in [1, inf], got {p}")
    return p


def _check_radius(r: float) -> float:
    r = float(r)
    if not 0.0 <= r < 1.0:
        raise DomainError(f"radius must lie in [0, 1), got {r}")
    return r


@dataclass(frozen=True)
class ExtremalResult:
    r: float
    p: float
    q: float
    a_star: float
    g_value: float
    method: Method


@dataclass
class GpCurve:
    params: ModelParams
    p: float
    samples: list[ExtremalResult] = field(default_factory=list)

    def __post_init__(self):
        rs = [s.r for s in self.samples]
        if any(b <= a for a, b in zip(rs, rs[1:])):
            raise DomainError("curve radii must be strictly increasing")

    @property
    def r(self) -> np.ndarray:
        return np.array([s.r for s in self.samples])

    @property
    def g(self) -> np.ndarray:
        return np.array([s.g_value for s in self.samples])

    @property
    def a_star(self) -> np.ndarray:
        return np.array([s.a_star for s in self.samples])

    def monotonicity(self, tol: float = 1e-6) -> str:
        return monotonicity_verdict(self.g, tol)


def monotonicity_verdict(values, tol: float = 1e-6) -> str:
    """"non-monotone" if some later value drops below an earlier one by more
    than ``tol``; "monotone" if the sequence strictly increases; otherwise
    "non-decreasing"."""
    v = np.asarray(values, dtype=float)
    if v.size < 2:
        return "monotone"
    drops = np.maximum.accumulate(v)[:-1] - v[1:]
    if np.any(drops > tol):
        return "non-monotone"
    if np.all(np.diff(v) > 0):
        return "monotone"
    return "non-decreasing"


def phi_q(params: ModelParams, r: float, a: float, q: float,
          order: int = DEFAULT_ORDER) -> float:
    """L^q distance between the zonal kernel at radius r and the constant a."""
    r = _check_radius(r)
    q = float(q)
    if not q >= 1.0:
        raise InvalidParameters(f"q must be >= 1, got {q}")
    if r == 0.0:
        return abs(params.c - a)
    if math.isinf(q):
        lo, hi = kernel_range(params, r)
        return max(hi - a, a - lo)
    locus = singular_locus(params, r, a) if a > 0 else None
    rule = build_rule(params, order, locus, exponent=q, radius=r)
    dev = np.abs(kernel_zonal(params, r, rule.nodes) - a)
    scale = float(dev.max())
    if scale == 0.0:
        return 0.0
    return scale * float(rule.integrate((dev / scale) ** q)) ** (1.0 / q)


def big_f(params: ModelParams, r: float, a: float, q: float,
          order: int = DEFAULT_ORDER) -> float:
    """First-order function F(r, a) = int (P - a)|P - a|^(q-2) dsigma.

    Strictly decreasing in a; its root is the minimiser a*(r).
    """
    r = _check_radius(r)
    if r == 0.0:
        raise DomainError("F is defined for r in (0, 1)")
    q = float(q)
    if not 1.0 < q < math.inf:
        raise InvalidParameters(f"q must lie in (1, inf), got {q}")
    locus = singular_locus(params, r, a) if a > 0 else None
    rule = build_rule(params, order, locus, exponent=q - 1.0, radius=r)
    dev = kernel_zonal(params, r, rule.nodes) - a
    return float(rule.integrate(np.sign(dev) * np.abs(dev) ** (q - 1.0)))


def a_star(params: ModelParams, r: float, q: float, order: int = DEFAULT_ORDER) -> float:
    """The unique constant minimising phi_q(r, ., q), for q in (1, inf).

    F(r, .) is positive at the kernel minimum and negative at its maximum, so
    that interval is a valid bracket.
    """
    r = _check_radius(r)
    if r == 0.0:
        return params.c
    lo, hi = kernel_range(params, r)
    f_lo = big_f(params, r, lo, q, order)
    f_hi = big_f(params, r, hi, q, order)
    if not (f_lo > 0.0 > f_hi):
        raise BracketError(f"F does not change sign on [{lo}, {hi}] (r={r}, q={q})")
    return brentq(lambda a: big_f(params, r, a, q, order), lo, hi,
                  xtol=1e-15 * lo, rtol=4.0 * np.finfo(float).eps, maxiter=300)


def g1_closed(params: ModelParams, r: float) -> float:
    """G_1(r): half the oscillation of the kernel over the sphere."""
    lo, hi = kernel_range(params, _check_radius(r))
    return 0.5 * (hi - lo)


def g1_a_star(params: ModelParams, r: float) -> float:
    lo, hi = kernel_range(params, _check_radius(r))
    return 0.5 * (hi + lo)


def a_star_p2_closed(params: ModelParams, r: float) -> float:
    """Mean of the kernel over the sphere, written through 2F1."""
    r = _check_radius(r)
    n, a = params.n, params.alpha
    return params.c * (1.0 - r * r) ** (1.0 + 2.0 * a) * hyp2f1(0.5 * n + a, a + 1.0, 0.5 * n, r * r)


def g2_closed(params: ModelParams, r: float) -> float:
    """G_2(r): standard deviation of the kernel over the sphere, through 2F1."""
    r = _check_radius(r)
    if r == 0.0:
        return 0.0
    n, a = params.n, params.alpha
    z = r * r
    second = hyp2f1(n + 2.0 * a, 0.5 * n + 2.0 * a + 1.0, 0.5 * n, z)
    first = hyp2f1(0.5 * n + a, a + 1.0, 0.5 * n, z)
    return params.c * (1.0 - z) ** (1.0 + 2.0 * a) * math.sqrt(max(second - first * first, 0.0))


def equator_value(params: ModelParams, r: float) -> float:
    """Kernel value at t = 0, the median of the kernel's distribution."""
    return kernel_zonal(params, _check_radius(r), 0.0)


def ginf_median(params: ModelParams, r: float, order: int = DEFAULT_ORDER) -> float:
    """G_inf(r) as the L^1 distance from the kernel to its equator value."""
    r = _check_radius(r)
    if r == 0.0:
        return 0.0
    return phi_q(params, r, equator_value(params, r), 1.0, order)


def ginf_closed(params: ModelParams, r: float, max_terms: int | None = None) -> float:
    """G_inf(r) = U(r e_n), the solution with data sign(eta_n), through 3F2."""
    r = _check_radius(r)
    if r == 0.0:
        return 0.0
    n, a = params.n, params.alpha
    z = 4.0 * r * r / (1.0 + r * r) ** 2
    if max_terms is None:
        gap = ((1.0 - r * r) / (1.0 + r * r)) ** 2
        max_terms = max(MAX_TERMS, int(_GINF_TERMS_PER_GAP / gap))
    log_pref = (
        math.log(2.0) + math.lgamma(1.0 + a) + math.lgamma(1.0 + a + 0.5 * n)
        - 0.5 * math.log(math.pi) - math.lgamma(1.0 + 2.0 * a) - math.lgamma(0.5 * (n + 1))
        + math.log(r) + (1.0 + 2.0 * a) * math.log1p(-r * r)
        - (1.0 + a + 0.5 * n) * math.log1p(r * r)
    )
    series = hyp3f2(1.0, (n + 2.0 + 2.0 * a) / 4.0, (n + 4.0 + 2.0 * a) / 4.0,
                    1.5, 0.5 * (n + 1), z, max_terms=max_terms)
    return math.exp(log_pref) * series


def gradient_bound_constant(params: ModelParams, q: float) -> float:
    """Sharp constant in ||Du(0)|| <= K ||f||_p, with q conjugate to p."""
    q = float(q)
    if not q >= 1.0:
        raise InvalidParameters(f"q must be >= 1, got {q}")
    base = params.c * (params.n + 2.0 * params.alpha)
    if math.isinf(q):
        return base
    return base * abs_moment(params.n, q) ** (1.0 / q)


def extremal(params: ModelParams, r: float, p: float, order: int = DEFAULT_ORDER) -> ExtremalResult:
    """G_p(r) with its minimising constant."""
    r = _check_radius(r)
    p = check_exponent(p)
    q = conjugate(p)
    if p == 1.0:
        return ExtremalResult(r, p, q, g1_a_star(params, r), g1_closed(params, r), "closed_form")
    if r == 0.0:
        return ExtremalResult(r, p, q, params.c, 0.0, "numeric")
    if math.isinf(p):
        a = equator_value(params, r)
        return ExtremalResult(r, p, q, a, phi_q(params, r, a, 1.0, order), "numeric")
    a = a_star(params, r, q, order)
    return ExtremalResult(r, p, q, a, phi_q(params, r, a, q, order), "numeric")


def g_p(params: ModelParams, r: float, p: float, order: int = DEFAULT_ORDER) -> float:
    """The sharp Schwarz coefficient G_p(r)."""
    return extremal(params, r, p, order).g_value


def gp_curve(params: ModelParams, p: float, r_values: Iterable[float],
             executor: Executor | None = None) -> GpCurve:
    """Sample G_p on increasing radii; ``executor`` may evaluate radii concurrently."""
    rs = [float(r) for r in r_values]
    if executor is None:
        samples = [extremal(params, r, p) for r in rs]
    else:
        samples = list(executor.map(extremal, [params] * len(rs), rs, [p] * len(rs)))
    return GpCurve(params, check_exponent(p), samples)
