"""Scalar special functions: log-gamma, Pochhammer symbols, the Gauss and
generalized hypergeometric series, Gegenbauer polynomials, and the model
constants built from them.

Hypergeometric series are summed directly.  Long series (arguments close to
one) are summed in growing numpy blocks, so a few million terms stay cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, DomainError, InvalidParameters

MAX_TERMS = 200_000
SERIES_RTOL = 1e-16
_SMALL_RUN = 3


@dataclass(frozen=True)
class ModelParams:
    """Dimension ``n`` and parameter ``alpha`` of the operator and kernel."""

    n: int
    alpha: float

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n:
            raise InvalidParameters(f"n must be an integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "alpha", float(self.alpha))
        if self.n < 3:
            raise InvalidParameters(f"n must be >= 3, got {self.n}")
        if not math.isfinite(self.alpha) or self.alpha <= -0.5:
            raise InvalidParameters(f"alpha must exceed -1/2, got {self.alpha}")

    @cached_property
    def c(self) -> float:
        return c_n_alpha(self)

    @property
    def kernel_exponent(self) -> float:
        """Half of ``n + 2 alpha``: the power of ``|x - zeta|**2`` in the kernel."""
        return 0.5 * self.n + self.alpha

    @property
    def gegenbauer_lambda(self) -> float:
        return 0.5 * (self.n - 2)

    @property
    def in_monotone_range(self) -> bool:
        """True for alpha in (-1/2, 0] or [n/2 - 1, inf)."""
        return self.alpha <= 0.0 or self.alpha >= 0.5 * self.n - 1.0


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def _signed_lgamma(x: float) -> tuple[float, int]:
    """(ln|Gamma(x)|, sign Gamma(x)); sign 0 marks a pole."""
    if _is_nonpositive_integer(x):
        return math.inf, 0
    if x > 0:
        return math.lgamma(x), 1
    # Gamma alternates sign between consecutive negative integers
    return math.lgamma(x), (-1 if math.floor(x) % 2 else 1)


def pochhammer(a: float, k: int) -> float:
    """Rising factorial a (a+1) ... (a+k-1)."""
    if k < 0:
        raise DomainError(f"pochhammer needs k >= 0, got {k}")
    out = 1.0
    for j in range(k):
        out *= a + j
    return out


@dataclass(frozen=True)
class HypergeometricArgs:
    upper: tuple[float, ...]
    lower: tuple[float, ...]
    z: float
    max_terms: int = field(default=MAX_TERMS, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(float(a) for a in self.upper))
        object.__setattr__(self, "lower", tuple(float(b) for b in self.lower))
        object.__setattr__(self, "z", float(self.z))

    @property
    def terminating_degree(self) -> int | None:
        degs = [int(-a) for a in self.upper if _is_nonpositive_integer(a)]
        return min(degs) if degs else None

    @property
    def balance(self) -> float:
        return sum(self.lower) - sum(self.upper)

    def validate(self) -> None:
        deg = self.terminating_degree
        for b in self.lower:
            # a lower pole only matters if the series reaches it
            if _is_nonpositive_integer(b) and (deg is None or -b < deg):
                raise DomainError(f"lower parameter {b} is a non-positive integer")
        if deg is not None:
            return
        if abs(self.z) > 1.0 or not math.isfinite(self.z):
            raise DomainError(f"|z| must not exceed 1, got z={self.z}")
        if abs(self.z) == 1.0 and not self.balance > 0:
            raise DomainError(
                f"series diverges at |z|=1 without positive parameter balance "
                f"(balance {self.balance})"
            )

    def evaluate(self) -> float:
        self.validate()
        if self.z == 0.0:
            return 1.0
        deg = self.terminating_degree
        if deg is not None:
            return _finite_sum(self.upper, self.lower, self.z, deg)
        return _block_sum(self.upper, self.lower, self.z, self.max_terms)


def _finite_sum(upper, lower, z, degree) -> float:
    terms = [1.0]
    term = 1.0
    for k in range(degree):
        num = z
        for a in upper:
            num *= a + k
        den = k + 1.0
        for b in lower:
            den *= b + k
        term *= num / den
        terms.append(term)
    return math.fsum(terms)


def _block_sum(upper, lower, z, max_terms) -> float:
    up = np.asarray(upper, dtype=float)[:, None]
    lo = np.asarray(lower, dtype=float)[:, None]
    partials = [1.0]
    running = 1.0
    term = 1.0
    run = 0
    k0 = 0
    block = 64
    while k0 < max_terms:
        ks = np.arange(k0, min(k0 + block, max_terms), dtype=float)
        ratio = z * np.prod(up + ks, axis=0) / (np.prod(lo + ks, axis=0) * (ks + 1.0))
        terms = term * np.cumprod(ratio)
        if not np.all(np.isfinite(terms)):
            raise ConvergenceError("hypergeometric terms overflowed")
        csum = running + np.cumsum(terms)
        small = np.abs(terms) <= SERIES_RTOL * np.abs(csum)
        idx = _first_run_end(small, run)
        if idx is not None:
            partials.append(float(np.sum(terms[: idx + 1])))
            return math.fsum(partials)
        partials.append(float(np.sum(terms)))
        running = math.fsum(partials)
        run = _trailing_true(small, run)
        term = float(terms[-1])
        k0 += len(ks)
        block = min(block * 2, 1 << 16)
    raise ConvergenceError(
        f"hypergeometric series not converged after {max_terms} terms (z={z})"
    )


def _first_run_end(flags: np.ndarray, carry: int) -> int | None:
    """Index at which a run of ``_SMALL_RUN`` true flags completes, if any.

    ``carry`` is the length of the run left open by the previous block.
    """
    lead = min(carry, _SMALL_RUN - 1)
    if lead + len(flags) < _SMALL_RUN:
        return None
    ext = np.concatenate([np.ones(lead, dtype=bool), flags])
    window = np.ones(len(ext) - _SMALL_RUN + 1, dtype=bool)
    for j in range(_SMALL_RUN):
        window &= ext[j: len(ext) - _SMALL_RUN + 1 + j]
    hits = np.flatnonzero(window)
    if hits.size == 0:
        return None
    return int(hits[0]) + _SMALL_RUN - 1 - lead


def _trailing_true(flags: np.ndarray, carry: int) -> int:
    if flags.all():
        return carry + len(flags)
    return len(flags) - 1 - int(np.flatnonzero(~flags)[-1])


def hyp_pfq(upper: Sequence[float], lower: Sequence[float], z: float,
            *, max_terms: int = MAX_TERMS) -> float:
    """Generalized hypergeometric series pFq(upper; lower; z), real arguments."""
    return HypergeometricArgs(tuple(upper), tuple(lower), z, max_terms).evaluate()


def hyp2f1(a: float, b: float, c: float, z: float, *, max_terms: int = MAX_TERMS) -> float:
    """Gauss hypergeometric function 2F1(a, b; c; z) for |z| <= 1.

    At z = 1 with c - a - b > 0 Gauss's summation theorem is used instead of
    the (algebraically slow) series, unless the series terminates.
    """
    args = HypergeometricArgs((a, b), (c,), z, max_terms)
    args.validate()
    if z == 1.0 and args.terminating_degree is None:
        lg = [_signed_lgamma(x) for x in (c, c - a - b, c - a, c - b)]
        if lg[2][1] == 0 or lg[3][1] == 0:
            return 0.0
        sign = lg[0][1] * lg[1][1] * lg[2][1] * lg[3][1]
        return sign * math.exp(lg[0][0] + lg[1][0] - lg[2][0] - lg[3][0])
    return args.evaluate()


def hyp3f2(a1: float, a2: float, a3: float, b1: float, b2: float, z: float,
           *, max_terms: int = MAX_TERMS) -> float:
    """Generalized hypergeometric function 3F2(a1, a2, a3; b1, b2; z)."""
    return hyp_pfq((a1, a2, a3), (b1, b2), z, max_terms=max_terms)


def gegenbauer(k: int, lam: float, t):
    """Gegenbauer polynomial C_k^lam(t) by the three-term recurrence.

    ``t`` may be a scalar or an array; the result has the same shape.
    """
    if k < 0:
        raise DomainError(f"degree must be >= 0, got {k}")
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    t = np.asarray(t, dtype=float)
    prev = np.ones_like(t)
    if k == 0:
        return prev if prev.ndim else float(prev)
    cur = 2.0 * lam * t
    for j in range(1, k):
        prev, cur = cur, (2.0 * (j + lam) * t * cur - (j + 2.0 * lam - 1.0) * prev) / (j + 1.0)
    return cur if cur.ndim else float(cur)


def gegenbauer_at_one(k: int, lam: float) -> float:
    """C_k^lam(1) = (2 lam)_k / k!."""
    return math.exp(math.lgamma(2.0 * lam + k) - math.lgamma(2.0 * lam) - math.lgamma(k + 1.0))


def c_n_alpha(params: ModelParams) -> float:
    """Normalising constant of the Poisson-type kernel."""
    n, a = params.n, params.alpha
    return math.exp(
        math.lgamma(0.5 * n + a) + math.lgamma(1.0 + a)
        - math.lgamma(0.5 * n) - math.lgamma(1.0 + 2.0 * a)
    )


def phi_k_alpha(params: ModelParams, k: int, s: float) -> float:
    """Radial factor 2F1(-alpha, k + n/2 - 1 - alpha; k + n/2; s) of degree k."""
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"s must lie in [0, 1], got {s}")
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    half = 0.5 * params.n
    a = params.alpha
    return hyp2f1(-a, k + half - 1.0 - a, k + half, s)


def abs_moment(n: int, q: float) -> float:
    """Integral of |eta_n|**q over the unit sphere in R^n (normalised measure)."""
    if q < 0:
        raise DomainError(f"q must be >= 0, got {q}")
    return math.exp(
        math.lgamma(0.5 * n) + math.lgamma(0.5 * (1.0 + q))
        - 0.5 * math.log(math.pi) - math.lgamma(0.5 * (n + q))
    )
