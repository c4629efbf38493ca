"""Sharp Schwarz-type bounds for solutions of the invariant Laplacian
Delta_alpha u = 0 on the unit ball of R^n."""

from .errors import BracketError, ConvergenceError, DegeneracyError, DomainError, InvalidParameters
from .extremal import (
    ExtremalResult,
    GpCurve,
    a_star,
    big_f,
    extremal,
    g1_closed,
    g2_closed,
    g_p,
    ginf_closed,
    ginf_median,
    gp_curve,
    gradient_bound_constant,
    phi_q,
)
from .kernel import apply_invariant_laplacian, kernel_mass, kernel_zonal, poisson_kernel
from .poisson import (
    ZonalExpansion,
    ZonalFunction,
    eigen_check,
    gradient_at_centre,
    lp_norm,
    near_extremizer_p1,
    project_zonal,
    schwarz_verify,
    solve_axis,
    solve_series,
)
from .quadrature import build_rule, zonal_integral
from .specfun import ModelParams, hyp2f1, hyp3f2, phi_k_alpha

__all__ = [
    "BracketError", "ConvergenceError", "DegeneracyError", "DomainError", "InvalidParameters",
    "ExtremalResult", "GpCurve", "a_star", "big_f", "extremal", "g1_closed", "g2_closed", "g_p",
    "ginf_closed", "ginf_median", "gp_curve", "gradient_bound_constant", "phi_q",
    "apply_invariant_laplacian", "kernel_mass", "kernel_zonal", "poisson_kernel",
    "ZonalExpansion", "ZonalFunction", "eigen_check", "gradient_at_centre", "lp_norm", "near_extremizer_p1",
    "project_zonal", "schwarz_verify", "solve_axis", "solve_series",
    "build_rule", "zonal_integral", "ModelParams", "hyp2f1", "hyp3f2", "phi_k_alpha",
]
