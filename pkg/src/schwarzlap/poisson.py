"""Dirichlet problem for the invariant Laplacian with zonal boundary data.

Boundary data f(eta) = profile(eta_n) is extended to the ball either by the
Poisson-type integral on the axis, or by the zonal harmonic series

    u(r zeta) = sum_k c_k [Phi_k(r^2) / Phi_k(1)] r^k Y_k(zeta_n),
    Y_k(t) = C_k^lam(t) / C_k^lam(1),  lam = (n - 2) / 2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DegeneracyError, DomainError
from .extremal import check_exponent, g_p
from .kernel import _as_ball_point, kernel_zonal
from .quadrature import DEFAULT_ORDER, build_rule, zonal_integral
from .specfun import ModelParams, gegenbauer_at_one, phi_k_alpha

SUP_GRID = 20001
ROOT_GRID = 2001
DEGENERACY_TOL = 1e-12
SCHWARZ_SLACK = 1e-9


@dataclass
class ZonalFunction:
    """Boundary data depending only on eta_n.

    ``profile`` must accept numpy arrays.  ``breakpoints`` lists values of t
    where the profile jumps or has a kink, so quadrature can split there.
    """

    profile: Callable[[np.ndarray], np.ndarray]
    breakpoints: tuple[float, ...] = ()
    p_norm_cache: dict[float, float] = field(default_factory=dict, repr=False)

    def __call__(self, t):
        return self.profile(np.asarray(t, dtype=float))

    def shifted(self, c: float) -> ZonalFunction:
        base = self.profile
        return ZonalFunction(lambda t: base(t) - c, self.breakpoints)

    @classmethod
    def polynomial(cls, coeffs: Sequence[float]) -> ZonalFunction:
        """Profile sum_j coeffs[j] t^j."""
        poly = np.polynomial.Polynomial(np.asarray(coeffs, dtype=float))
        return cls(lambda t: poly(t))

    @classmethod
    def sign(cls) -> ZonalFunction:
        """Indicator of the upper hemisphere minus that of the lower one."""
        return cls(lambda t: np.sign(t).astype(float), (0.0,))

    @classmethod
    def constant(cls, c: float) -> ZonalFunction:
        return cls(lambda t: np.full(np.shape(t), float(c)))


@dataclass(frozen=True)
class ZonalExpansion:
    """Coefficients against Y_k, k = 0..degree, with the L^2 residual of the fit."""

    coefficients: np.ndarray
    lam: float
    residual: float = 0.0

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def boundary(self, t) -> np.ndarray:
        return self.coefficients @ zonal_harmonics(self.degree, self.lam, t)


def zonal_harmonics(K: int, lam: float, t) -> np.ndarray:
    """Rows Y_0(t) .. Y_K(t), normalised so Y_k(1) = 1."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty((K + 1, t.size))
    out[0] = 1.0
    if K >= 1:
        out[1] = 2.0 * lam * t
    for j in range(1, K):
        out[j + 1] = (2.0 * (j + lam) * t * out[j] - (j + 2.0 * lam - 1.0) * out[j - 1]) / (j + 1.0)
    for k in range(K + 1):
        out[k] /= gegenbauer_at_one(k, lam)
    return out


def _zero_crossings(f: ZonalFunction) -> list[float]:
    grid = np.linspace(-1.0, 1.0, ROOT_GRID)
    vals = f(grid)
    roots = []
    for lo, hi, vlo, vhi in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if vlo == 0.0 and lo > -1.0:
            roots.append(float(lo))
        elif vlo * vhi < 0.0:
            roots.append(brentq(lambda s: float(np.ravel(f(s))[0]), lo, hi, xtol=1e-15))
    # crossings at a jump are not power-law zeros
    return [x for x in roots if all(abs(x - b) > 1e-9 for b in f.breakpoints)]


def lp_norm(params: ModelParams, f: ZonalFunction, p: float,
            order: int = DEFAULT_ORDER) -> float:
    """||f||_{L^p(S^{n-1})}; p = inf uses a grid supremum."""
    p = check_exponent(p)
    if p in f.p_norm_cache:
        return f.p_norm_cache[p]
    if math.isinf(p):
        grid = np.concatenate([np.linspace(-1.0, 1.0, SUP_GRID), np.asarray(f.breakpoints, float)])
        val = float(np.max(np.abs(f(grid))))
    else:
        roots = _zero_crossings(f)
        rule = build_rule(params, order, roots, exponent=p, breaks=f.breakpoints)
        val = zonal_integral(params, lambda t: np.abs(f(t)) ** p, rule) ** (1.0 / p)
    f.p_norm_cache[p] = val
    return val


def mean_value(params: ModelParams, f: ZonalFunction, order: int = DEFAULT_ORDER) -> float:
    rule = build_rule(params, order, breaks=f.breakpoints)
    return zonal_integral(params, f, rule)


def solve_axis(params: ModelParams, f: ZonalFunction, r: float,
               order: int = DEFAULT_ORDER) -> float:
    """u(r e_n) for u the Poisson-type integral of f."""
    if not 0.0 <= r < 1.0:
        raise DomainError(f"radius must lie in [0, 1), got {r}")
    if r == 0.0:
        return params.c * mean_value(params, f, order)
    rule = build_rule(params, order, radius=r, breaks=f.breakpoints)
    return zonal_integral(params, lambda t: kernel_zonal(params, r, t) * f(t), rule)


def gradient_at_centre(params: ModelParams, f: ZonalFunction,
                       order: int = DEFAULT_ORDER) -> float:
    """e_n component of Du(0) = C (n + 2 alpha) int eta f(eta) dsigma.

    The other components vanish for zonal data.
    """
    rule = build_rule(params, order, breaks=f.breakpoints)
    return params.c * (params.n + 2.0 * params.alpha) * zonal_integral(params, lambda t: t * f(t), rule)


def project_zonal(params: ModelParams, f: ZonalFunction, K: int,
                  order: int = DEFAULT_ORDER) -> ZonalExpansion:
    """Least-squares zonal harmonic coefficients c_0..c_K of f."""
    if K < 0:
        raise DomainError(f"degree must be >= 0, got {K}")
    if K > 60:
        warnings.warn(f"zonal projection with K={K} may be ill-conditioned", RuntimeWarning)
    lam = params.gegenbauer_lambda
    rule = build_rule(params, max(order, K + 8), breaks=f.breakpoints)
    Y = zonal_harmonics(K, lam, rule.nodes)
    fv = f(rule.nodes)
    norms = rule.integrate(Y * Y)
    coeffs = rule.integrate(Y * fv) / norms
    resid = fv - coeffs @ Y
    err = math.sqrt(max(float(rule.integrate(resid * resid)), 0.0))
    return ZonalExpansion(coeffs, lam, err)


def radial_factors(params: ModelParams, K: int, r: float) -> np.ndarray:
    """Phi_k(r^2) / Phi_k(1) * r^k for k = 0..K."""
    if not 0.0 <= r < 1.0:
        raise DomainError(f"radius must lie in [0, 1), got {r}")
    out = np.empty(K + 1)
    for k in range(K + 1):
        at_one = phi_k_alpha(params, k, 1.0)
        if abs(at_one) < DEGENERACY_TOL:
            raise DegeneracyError(f"Phi_{k}(1) vanishes for n={params.n}, alpha={params.alpha}")
        out[k] = phi_k_alpha(params, k, r * r) / at_one * r ** k
    return out


def solve_series_zonal(params: ModelParams, expansion: ZonalExpansion, r: float, t) -> np.ndarray:
    """u(r zeta) at zeta_n = t (array), from the zonal expansion."""
    factors = radial_factors(params, expansion.degree, r)
    Y = zonal_harmonics(expansion.degree, expansion.lam, t)
    return (factors * expansion.coefficients) @ Y


def solve_series(params: ModelParams, expansion: ZonalExpansion, x) -> float:
    """u(x) at an arbitrary point of the ball, from the zonal expansion."""
    x = _as_ball_point(params, x)
    rho = float(np.linalg.norm(x))
    if rho == 0.0:
        return float(expansion.coefficients[0] * radial_factors(params, 0, 0.0)[0])
    t = min(1.0, max(-1.0, x[-1] / rho))
    return float(solve_series_zonal(params, expansion, rho, t)[0])


def mean_lp(params: ModelParams, expansion: ZonalExpansion, r: float, p: float,
            order: int = DEFAULT_ORDER) -> float:
    """M_p(r, u): the L^p mean of u over the sphere of radius r."""
    profile = ZonalFunction(lambda t: solve_series_zonal(params, expansion, r, t))
    return lp_norm(params, profile, p, order)


def eigen_check(params: ModelParams, k: int, r: float,
                order: int = DEFAULT_ORDER) -> tuple[float, float]:
    """Both sides of P[Y_k](r e_n) = Phi_k(r^2)/Phi_k(1) r^k Y_k(1).

    The left side is computed by quadrature, the right from the 2F1 factor.
    """
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    lam = params.gegenbauer_lambda
    if r == 0.0:
        lhs = params.c * (1.0 if k == 0 else 0.0)
    else:
        rule = build_rule(params, max(order, k + 8), radius=r)
        Y = zonal_harmonics(k, lam, rule.nodes)[k]
        lhs = float(rule.integrate(kernel_zonal(params, r, rule.nodes) * Y))
    rhs = float(radial_factors(params, k, r)[k])
    return lhs, rhs


@dataclass(frozen=True)
class SchwarzRow:
    r: float
    u_value: float
    bound: float

    @property
    def margin(self) -> float:
        return self.bound - abs(self.u_value)


@dataclass(frozen=True)
class SchwarzReport:
    p: float
    norm: float
    rows: tuple[SchwarzRow, ...]
    slack: float = SCHWARZ_SLACK

    @property
    def violations(self) -> list[SchwarzRow]:
        return [row for row in self.rows if row.margin < -self.slack]

    @property
    def passed(self) -> bool:
        return not self.violations


def schwarz_verify(params: ModelParams, f: ZonalFunction, p: float,
                   r_grid: Iterable[float], g_values: dict[float, float] | None = None,
                   slack: float = SCHWARZ_SLACK) -> SchwarzReport:
    """Check |u(r e_n)| <= G_p(r) ||f||_p for the centred datum.

    ``f`` is centred first (its mean is subtracted) so that u(0) = 0.
    ``g_values`` may supply precomputed G_p values keyed by radius.
    """
    p = check_exponent(p)
    centred = f.shifted(mean_value(params, f))
    norm = lp_norm(params, centred, p)
    rows = []
    for r in r_grid:
        r = float(r)
        g = g_values[r] if g_values and r in g_values else g_p(params, r, p)
        rows.append(SchwarzRow(r, solve_axis(params, centred, r), g * norm))
    return SchwarzReport(p, norm, tuple(rows), slack)


def near_extremizer_p1(params: ModelParams, i: int) -> ZonalFunction:
    """Unit L^1 datum of opposite point masses smeared over caps of chordal radius 1/i."""
    if i < 1:
        raise DomainError(f"i must be a positive integer, got {i}")
    tau = 1.0 - 0.5 / (i * i)
    cap = ZonalFunction(lambda t: (t >= tau).astype(float), (tau,))
    mass = mean_value(params, cap)
    h = 0.5 / mass

    def profile(t):
        return np.where(t >= tau, h, 0.0) - np.where(t <= -tau, h, 0.0)

    return ZonalFunction(profile, (-tau, tau))
