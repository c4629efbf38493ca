"""Integration of zonal functions over the unit sphere.

A function g(eta) = f(eta_n) on S^{n-1} integrates against the normalised
surface measure as

    kappa_n * integral_{-1}^{1} f(t) (1 - t^2)^((n-3)/2) dt,
    kappa_n = Gamma(n/2) / (sqrt(pi) Gamma((n-1)/2)).

Rules are composite Gauss-Jacobi rules.  On every panel the Jacobi exponents
carry the endpoint behaviour: the sphere weight at t = +-1, and a Hoelder
factor |t - s|^gamma at a split point s where the integrand vanishes like a
power (e.g. |P - a|^q at the level crossing of the kernel).  Panels can also be
graded geometrically toward t = 1, where the kernel concentrates as r -> 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .errors import DomainError
from .specfun import ModelParams

DEFAULT_ORDER = 96
GRADING_RATIO = 4.0
_EDGE_TOL = 1e-13


def sphere_normalization(n: int) -> float:
    """kappa_n, so that kappa_n * int (1-t^2)^((n-3)/2) dt = 1."""
    return math.exp(math.lgamma(0.5 * n) - 0.5 * math.log(math.pi) - math.lgamma(0.5 * (n - 1)))


@dataclass(frozen=True)
class SingularLocus:
    """Level crossing of the zonal kernel with a constant.

    ``lambda1`` is the crossing when it lies at t in [0, 1]; ``lambda2`` is
    ``-t`` when the crossing lies at t in [-1, 0].  Both are absent when the
    constant is outside the kernel's range.
    """

    lambda1: float | None = None
    lambda2: float | None = None

    @property
    def crossing(self) -> float | None:
        """The crossing as a value of t in [-1, 1]."""
        if self.lambda1 is not None:
            return self.lambda1
        if self.lambda2 is not None:
            return -self.lambda2
        return None

    @property
    def split_points(self) -> tuple[float, ...]:
        t = self.crossing
        return () if t is None or abs(t) >= 1.0 else (t,)


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for int_{-1}^{1} f(t) (1 - t^2)^((n-3)/2) dt.

    The sphere normalisation is kept separately in ``normalization``.
    """

    n: int
    nodes: np.ndarray
    weights: np.ndarray
    order: int
    split_points: tuple[float, ...] = ()
    singular_exponent: float = 0.0
    edges: tuple[float, ...] = field(default=(-1.0, 1.0))

    @property
    def normalization(self) -> float:
        return sphere_normalization(self.n)

    def integrate(self, values: np.ndarray) -> float | np.ndarray:
        """Normalised sphere integral from integrand values at ``nodes``."""
        return self.normalization * (np.asarray(values) @ self.weights)


@lru_cache(maxsize=256)
def _reference_rule(order: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Jacobi nodes/weights on [-1, 1] for weight (1-s)^a (1+s)^b."""
    if a == 0.0 and b == 0.0:
        s, w = roots_legendre(order)
    else:
        s, w = roots_jacobi(order, a, b)
    s.setflags(write=False)
    w.setflags(write=False)
    return s, w


def grading_edges(r: float) -> list[float]:
    """Panel edges in t that resolve the kernel peak at t = 1 for radius r.

    Edges sit where 1 + r^2 - 2 r t = (1 - r)^2 * 4^j, so the kernel changes
    by a bounded factor across each panel.
    """
    if not 0.0 < r < 1.0:
        return []
    d, d_end = (1.0 - r) ** 2, (1.0 + r) ** 2
    out = []
    while True:
        d *= GRADING_RATIO
        if d >= d_end:
            break
        out.append((1.0 + r * r - d) / (2.0 * r))
    return out


def build_rule(params: ModelParams, order: int = DEFAULT_ORDER,
               splits: SingularLocus | Iterable[float] | None = None, *,
               exponent: float = 0.0, radius: float | None = None,
               breaks: Iterable[float] = ()) -> QuadratureRule:
    """Composite Gauss-Jacobi rule for the sphere weight of dimension n.

    ``splits`` are points where the integrand behaves like |t - s|^exponent
    (times a smooth factor); ``breaks`` are plain panel boundaries such as
    jump discontinuities.  ``radius`` adds geometric grading toward t = 1.
    """
    if order < 8:
        raise DomainError(f"order must be >= 8, got {order}")
    if exponent <= -1.0:
        raise DomainError("singular exponent must exceed -1")
    if isinstance(splits, SingularLocus):
        split_pts = splits.split_points
    else:
        split_pts = tuple(float(s) for s in (splits or ()))
    for s in split_pts:
        if not -1.0 < s < 1.0:
            raise DomainError(f"split points must lie strictly inside (-1, 1), got {s}")
    split_pts = tuple(sorted(set(split_pts)))

    plain = [float(b) for b in breaks if -1.0 < b < 1.0]
    if radius is not None:
        plain.extend(grading_edges(radius))
    # a plain edge sitting on a split would hide the split's exponent
    plain = [b for b in plain if all(abs(b - s) > _EDGE_TOL for s in split_pts)]
    edges = sorted(set([-1.0, 1.0, *split_pts, *plain]))
    edges = [e for i, e in enumerate(edges) if i == 0 or e - edges[i - 1] > _EDGE_TOL]
    if edges[-1] != 1.0:
        edges[-1] = 1.0

    beta = 0.5 * (params.n - 3)
    split_set = set(split_pts)

    def end_exponent(e: float) -> float:
        if e in (-1.0, 1.0):
            return beta
        return exponent if e in split_set else 0.0

    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        b_exp, a_exp = end_exponent(lo), end_exponent(hi)
        s, w = _reference_rule(order, a_exp, b_exp)
        half = 0.5 * (hi - lo)
        t = lo + half * (s + 1.0)
        jac = (1.0 - s) ** a_exp * (1.0 + s) ** b_exp
        sphere_w = (1.0 - t * t) ** beta if beta else 1.0
        nodes.append(t)
        weights.append(w * sphere_w / jac * half)
    return QuadratureRule(
        n=params.n,
        nodes=np.concatenate(nodes),
        weights=np.concatenate(weights),
        order=order,
        split_points=split_pts,
        singular_exponent=float(exponent),
        edges=tuple(edges),
    )


def zonal_integral(params: ModelParams, f: Callable[[np.ndarray], np.ndarray],
                   rule: QuadratureRule | None = None) -> float:
    """Integral of eta -> f(eta_n) over S^{n-1} with the normalised measure."""
    if rule is None:
        rule = build_rule(params)
    elif rule.n != params.n:
        raise DomainError(f"rule built for n={rule.n}, used with n={params.n}")
    values = np.asarray(f(rule.nodes), dtype=float)
    if values.shape == ():
        values = np.full(rule.nodes.shape, float(values))
    return float(rule.integrate(values))


def singular_locus(params: ModelParams, r: float, a: float) -> SingularLocus:
    """Where the zonal kernel at radius r crosses the level a.

    Solves C (1-r^2)^(1+2 alpha) = a (1 + r^2 - 2 r t)^((n + 2 alpha)/2) for t.
    """
    if not 0.0 < r < 1.0:
        raise DomainError(f"r must lie in (0, 1), got {r}")
    if not a > 0:
        raise DomainError(f"level must be positive, got {a}")
    m = params.kernel_exponent
    log_d = (math.log(params.c) + (1.0 + 2.0 * params.alpha) * math.log1p(-r * r) - math.log(a)) / m
    t = (1.0 + r * r - math.exp(log_d)) / (2.0 * r)
    lam1 = t if 0.0 <= t <= 1.0 else None
    lam2 = -t if -1.0 <= t <= 0.0 else None
    return SingularLocus(lam1, lam2)
