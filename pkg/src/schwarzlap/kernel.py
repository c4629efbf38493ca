"""The Poisson-type kernel of the invariant Laplacian on the unit ball.

    P(x, zeta) = C (1 - |x|^2)^(1 + 2 alpha) / |x - zeta|^(n + 2 alpha)

Everything zonal is computed at ``x = r e_n``; a general point is reduced to
the axis by an orthogonal map (see :func:`householder_to`).
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import DomainError
from .specfun import ModelParams, hyp2f1

SPHERE_TOL = 1e-12


def _as_ball_point(params: ModelParams, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (params.n,):
        raise DomainError(f"expected a point of length {params.n}, got shape {x.shape}")
    if not np.dot(x, x) < 1.0:
        raise DomainError(f"point must lie inside the unit ball, |x| = {np.linalg.norm(x)}")
    return x


def _as_sphere_points(params: ModelParams, zeta) -> np.ndarray:
    zeta = np.asarray(zeta, dtype=float)
    if zeta.shape[-1] != params.n:
        raise DomainError(f"sphere points need {params.n} coordinates, got {zeta.shape}")
    norms = np.linalg.norm(zeta, axis=-1)
    if np.any(np.abs(norms - 1.0) > SPHERE_TOL):
        raise DomainError("sphere points must have unit norm")
    return zeta


def _check_radius(r: float) -> float:
    r = float(r)
    if not 0.0 <= r < 1.0:
        raise DomainError(f"radius must lie in [0, 1), got {r}")
    return r


def poisson_kernel(params: ModelParams, x, zeta):
    """Kernel value P(x, zeta); ``zeta`` may hold several points along its last axis."""
    x = _as_ball_point(params, x)
    zeta = _as_sphere_points(params, zeta)
    dist2 = np.sum((x - zeta) ** 2, axis=-1)
    val = params.c * (1.0 - x @ x) ** (1.0 + 2.0 * params.alpha) / dist2 ** params.kernel_exponent
    return float(val) if np.ndim(val) == 0 else val


def kernel_zonal(params: ModelParams, r: float, t):
    """P(r e_n, eta) as a function of t = eta_n."""
    r = _check_radius(r)
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0):
        raise DomainError("t must lie in [-1, 1]")
    d = 1.0 + r * r - 2.0 * r * t
    val = params.c * (1.0 - r * r) ** (1.0 + 2.0 * params.alpha) / d ** params.kernel_exponent
    return float(val) if val.ndim == 0 else val


def kernel_range(params: ModelParams, r: float) -> tuple[float, float]:
    """(min, max) of the kernel over the sphere, attained at t = -1 and t = 1."""
    r = _check_radius(r)
    scale = params.c * (1.0 - r * r) ** (1.0 + 2.0 * params.alpha)
    m = 2.0 * params.kernel_exponent
    return scale / (1.0 + r) ** m, scale / (1.0 - r) ** m


def kernel_gradient_axis(params: ModelParams, r: float, eta) -> np.ndarray:
    """Gradient of P(., eta) with respect to its first argument at x = r e_n."""
    r = _check_radius(r)
    eta = _as_sphere_points(params, eta)
    n, a = params.n, params.alpha
    x = np.zeros(n)
    x[-1] = r
    diff = eta - x
    dist2 = np.sum(diff ** 2, axis=-1, keepdims=True)
    s = 1.0 - r * r
    bracket = (n + 2 * a) * s * diff - 2.0 * (1.0 + 2.0 * a) * x * dist2
    return params.c * s ** (2.0 * a) * bracket / dist2 ** (0.5 * n + 1.0 + a)


def kernel_mass(params: ModelParams, r: float) -> float:
    """Integral of P(r zeta, .) over the sphere, via the 2F1 closed form."""
    r = _check_radius(r)
    half = 0.5 * params.n
    a = params.alpha
    return params.c * hyp2f1(-a, half - 1.0 - a, half, r * r)


def householder_to(x) -> np.ndarray:
    """Orthogonal matrix A with A (|x| e_n) = x (a Householder reflection)."""
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    e = np.zeros(n)
    e[-1] = 1.0
    norm = np.linalg.norm(x)
    if norm == 0.0:
        return np.eye(n)
    v = e - x / norm
    vv = v @ v
    if vv < 1e-30:
        return np.eye(n)
    return np.eye(n) - 2.0 * np.outer(v, v) / vv


def apply_invariant_laplacian(params: ModelParams, u: Callable[[np.ndarray], float],
                              x, h: float = 1e-3, *, richardson: bool = False) -> float:
    """Central-difference approximation of the invariant Laplacian of ``u`` at ``x``.

    Second order in ``h``; the stencil uses 2n + 1 evaluations of ``u``.  With
    ``richardson`` the results for ``h`` and ``h/2`` are combined into a
    fourth-order estimate.
    """
    x = _as_ball_point(params, x)
    if not h > 0:
        raise DomainError("step must be positive")
    if np.linalg.norm(x) + 2.0 * h >= 1.0:
        raise DomainError("finite-difference stencil leaves the ball")
    coarse = _fd_invariant_laplacian(params, u, x, h)
    if not richardson:
        return coarse
    fine = _fd_invariant_laplacian(params, u, x, 0.5 * h)
    return (4.0 * fine - coarse) / 3.0


def _fd_invariant_laplacian(params, u, x, h):
    n, a = params.n, params.alpha
    u0 = float(u(x))
    lap = 0.0
    radial = 0.0
    for i in range(n):
        step = np.zeros(n)
        step[i] = h
        up, um = float(u(x + step)), float(u(x - step))
        lap += (up - 2.0 * u0 + um) / (h * h)
        radial += x[i] * (up - um) / (2.0 * h)
    s = 1.0 - x @ x
    return s * (0.25 * s * lap + a * radial + a * (0.5 * n - 1.0 - a) * u0)
