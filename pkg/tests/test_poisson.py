import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose
from scipy import integrate

from schwarzlap import poisson
from schwarzlap.errors import DegeneracyError, DomainError
from schwarzlap.extremal import conjugate, g1_closed, g_p, ginf_closed, gradient_bound_constant
from schwarzlap.kernel import apply_invariant_laplacian, kernel_mass
from schwarzlap.poisson import (
    ZonalFunction,
    eigen_check,
    gradient_at_centre,
    lp_norm,
    mean_lp,
    mean_value,
    near_extremizer_p1,
    project_zonal,
    radial_factors,
    schwarz_verify,
    solve_axis,
    solve_series,
    solve_series_zonal,
    zonal_harmonics,
)
from schwarzlap.quadrature import sphere_normalization
from schwarzlap.specfun import ModelParams, gegenbauer

GRID = [(3, 0.0), (3, 1.0), (4, 0.5), (6, 1.0)]
MONOTONE = [(3, 0.0), (3, -0.25), (4, 1.0), (6, 2.0)]


def axis(n, r):
    x = np.zeros(n)
    x[-1] = r
    return x


def random_poly(seed, degree=8):
    rng = np.random.default_rng(seed)
    return ZonalFunction.polynomial(rng.normal(size=degree + 1))


def angle_oracle(n, f, points=()):
    brk = sorted(math.acos(t) for t in points)
    val, _ = integrate.quad(lambda th: f(math.cos(th)) * math.sin(th) ** (n - 2), 0, math.pi,
                            points=brk or None, epsabs=0, epsrel=1e-12, limit=400)
    return sphere_normalization(n) * val


class TestLpNorm:
    @pytest.mark.parametrize("p_exp", [1.0, 2.0, 3.5, math.inf])
    def test_constant(self, p_exp):
        assert_allclose(lp_norm(ModelParams(5, 0.0), ZonalFunction.constant(-2.5), p_exp), 2.5, rtol=1e-12)

    def test_linear_l2(self):
        assert_allclose(lp_norm(ModelParams(3, 0.0), ZonalFunction.polynomial([0, 1]), 2.0), 1 / math.sqrt(3), rtol=1e-14)

    def test_sign_l1(self):
        assert_allclose(lp_norm(ModelParams(4, 0.0), ZonalFunction.sign(), 1.0), 1.0, rtol=1e-14)

    def test_sup(self):
        f = ZonalFunction.polynomial([0.2, -1.0, 0.0, 2.0])
        grid = np.linspace(-1, 1, 200001)
        assert_allclose(lp_norm(ModelParams(3, 0.0), f, math.inf), np.max(np.abs(f(grid))), rtol=1e-8)

    @pytest.mark.parametrize("n", [3, 4, 6])
    @pytest.mark.parametrize("p_exp", [1.0, 1.5, 3.0])
    def test_sign_changes_against_adaptive(self, n, p_exp):
        coeffs = [0.1, -1.0, 0.3, 1.2]
        f = ZonalFunction.polynomial(coeffs)
        poly = np.polynomial.Polynomial(coeffs)
        roots = [float(z.real) for z in poly.roots() if abs(z.imag) < 1e-12 and -1 < z.real < 1]
        oracle = angle_oracle(n, lambda t: abs(poly(t)) ** p_exp, roots) ** (1 / p_exp)
        assert_allclose(lp_norm(ModelParams(n, 0.0), f, p_exp), oracle, rtol=1e-10)

    def test_cache(self):
        f = ZonalFunction.polynomial([0, 1])
        p = ModelParams(3, 0.0)
        first = lp_norm(p, f, 2.0)
        assert f.p_norm_cache == {2.0: first}
        assert lp_norm(p, f, 2.0) == first

    def test_rejects_bad_exponent(self):
        with pytest.raises(DomainError):
            lp_norm(ModelParams(3, 0.0), ZonalFunction.sign(), 0.5)


class TestSolveAxis:
    @pytest.mark.parametrize("n, alpha", GRID)
    @pytest.mark.parametrize("r", [0.0, 0.4, 0.95])
    def test_constant_data(self, n, alpha, r):
        p = ModelParams(n, alpha)
        assert_allclose(solve_axis(p, ZonalFunction.constant(1.0), r), kernel_mass(p, r), rtol=1e-11)

    @pytest.mark.parametrize("n, alpha", GRID)
    def test_centre(self, n, alpha):
        p = ModelParams(n, alpha)
        f = ZonalFunction.polynomial([0.5, 0.0, 1.0])
        assert_allclose(solve_axis(p, f, 0.0), p.c * mean_value(p, f), rtol=1e-14)

    @pytest.mark.parametrize("n, alpha", GRID)
    @pytest.mark.parametrize("r", [0.1, 0.5, 0.9, 0.99])
    def test_sign_data_gives_closed_form(self, n, alpha, r):
        p = ModelParams(n, alpha)
        assert_allclose(solve_axis(p, ZonalFunction.sign(), r), ginf_closed(p, r), rtol=1e-10)

    def test_domain(self):
        with pytest.raises(DomainError):
            solve_axis(ModelParams(3, 0.0), ZonalFunction.sign(), 1.0)


class TestProjection:
    def test_constant(self):
        e = project_zonal(ModelParams(4, 0.5), ZonalFunction.constant(1.0), 6)
        assert_allclose(e.coefficients[0], 1.0, rtol=1e-13)
        assert np.all(np.abs(e.coefficients[1:]) <= 1e-12)

    def test_linear(self):
        e = project_zonal(ModelParams(3, 0.0), ZonalFunction.polynomial([0, 1]), 4)
        assert_allclose(e.coefficients, [0, 1, 0, 0, 0], atol=1e-13)

    def test_square_legendre(self):
        e = project_zonal(ModelParams(3, 0.0), ZonalFunction.polynomial([0, 0, 1]), 4)
        assert_allclose(e.coefficients, [1 / 3, 0, 2 / 3, 0, 0], atol=1e-13)
        assert e.degree == 4 and e.residual < 1e-13

    @pytest.mark.parametrize("n", [3, 4, 7])
    def test_reconstruction(self, n):
        f = random_poly(n, 8)
        e = project_zonal(ModelParams(n, 0.0), f, 10)
        t = np.linspace(-1, 1, 101)
        assert_allclose(e.boundary(t), f(t), atol=1e-11)

    def test_residual_reports_truncation(self):
        f = ZonalFunction.polynomial([0, 0, 0, 0, 1])
        e = project_zonal(ModelParams(3, 0.0), f, 2)
        assert e.residual > 1e-2

    def test_warns_for_high_degree(self):
        with pytest.warns(RuntimeWarning):
            project_zonal(ModelParams(3, 0.0), ZonalFunction.constant(1.0), 61)

    def test_rejects_negative_degree(self):
        with pytest.raises(DomainError):
            project_zonal(ModelParams(3, 0.0), ZonalFunction.constant(1.0), -1)

    @pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
    def test_harmonics_normalised(self, lam):
        t = np.linspace(-1, 1, 11)
        y = zonal_harmonics(6, lam, t)
        assert_allclose(y[:, -1], 1.0, rtol=1e-14)
        assert_allclose(y[4], gegenbauer(4, lam, t) / gegenbauer(4, lam, 1.0), rtol=1e-12, atol=1e-14)


class TestSolveSeries:
    @pytest.mark.parametrize("n, alpha", GRID)
    def test_constant_data(self, n, alpha):
        p = ModelParams(n, alpha)
        e = project_zonal(p, ZonalFunction.constant(1.0), 4)
        for r in (0.0, 0.3, 0.8):
            assert_allclose(solve_series(p, e, axis(n, r)), kernel_mass(p, r), rtol=1e-12)

    def test_classical_series(self):
        p = ModelParams(3, 0.0)
        f = random_poly(11, 5)
        e = project_zonal(p, f, 5)
        r = 0.6
        t = np.linspace(-1, 1, 9)
        expected = sum(r ** k * e.coefficients[k] * zonal_harmonics(5, 0.5, t)[k] for k in range(6))
        assert_allclose(solve_series_zonal(p, e, r, t), expected, rtol=1e-13)
        assert_allclose(radial_factors(p, 5, r), r ** np.arange(6), rtol=1e-14)

    def test_centre_with_zero_mean(self):
        p = ModelParams(4, 0.5)
        e = project_zonal(p, ZonalFunction.polynomial([0, 1, 0, 1]), 3)
        assert abs(solve_series(p, e, np.zeros(4))) < 1e-15

    @pytest.mark.parametrize("n, alpha", GRID)
    def test_agrees_with_axis_integral(self, n, alpha):
        p = ModelParams(n, alpha)
        for seed in range(3):
            f = random_poly(100 * n + seed, 8)
            e = project_zonal(p, f, 16)
            for r in np.linspace(0, 0.9, 10):
                assert_allclose(solve_series(p, e, axis(n, r)), solve_axis(p, f, r), rtol=1e-7, atol=1e-7)

    def test_off_axis_point_uses_direction(self):
        p = ModelParams(3, 1.0)
        e = project_zonal(p, ZonalFunction.polynomial([0, 1]), 2)
        x = np.array([0.3, 0.0, 0.4])
        rho, t = 0.5, 0.8
        assert_allclose(solve_series(p, e, x), solve_series_zonal(p, e, rho, t)[0], rtol=1e-14)

    def test_rejects_outside_ball(self):
        p = ModelParams(3, 0.0)
        e = project_zonal(p, ZonalFunction.constant(1.0), 1)
        with pytest.raises(DomainError):
            solve_series(p, e, axis(3, 1.0))

    def test_degenerate_factor_raises(self, monkeypatch):
        p = ModelParams(4, 0.5)
        e = project_zonal(p, ZonalFunction.polynomial([0, 1]), 3)
        real = poisson.phi_k_alpha
        monkeypatch.setattr(poisson, "phi_k_alpha", lambda prm, k, s: 0.0 if (k == 2 and s == 1.0) else real(prm, k, s))
        with pytest.raises(DegeneracyError):
            solve_series(p, e, axis(4, 0.3))

    @pytest.mark.parametrize("n, alpha", GRID)
    def test_annihilated_by_operator(self, n, alpha):
        p = ModelParams(n, alpha)
        e = project_zonal(p, random_poly(n, 6), 8)
        rng = np.random.default_rng(5)
        for _ in range(10):
            x = rng.normal(size=n)
            x *= 0.85 * rng.uniform() ** (1 / n) / np.linalg.norm(x)
            val = apply_invariant_laplacian(p, lambda y: solve_series(p, e, y), x, 1e-3)
            assert abs(val) <= 1e-4


class TestEigenRelation:
    @pytest.mark.parametrize("n, alpha", GRID)
    def test_agreement(self, n, alpha):
        p = ModelParams(n, alpha)
        for k in range(11):
            for r in (0.2, 0.5, 0.8):
                lhs, rhs = eigen_check(p, k, r)
                assert abs(lhs - rhs) <= 1e-8

    @pytest.mark.parametrize("n, alpha", GRID)
    def test_degree_zero_is_mass(self, n, alpha):
        p = ModelParams(n, alpha)
        lhs, rhs = eigen_check(p, 0, 0.6)
        assert_allclose([lhs, rhs], kernel_mass(p, 0.6), rtol=1e-11)

    def test_classical_degree_one(self):
        assert_allclose(eigen_check(ModelParams(3, 0.0), 1, 0.45), 0.45, rtol=1e-13)

    @pytest.mark.parametrize("k", [1, 4, 9])
    def test_zero_at_centre(self, k):
        assert eigen_check(ModelParams(4, 0.5), k, 0.0) == (0.0, 0.0)


class TestMaximumPrinciple:
    @pytest.mark.parametrize("n, alpha", MONOTONE)
    @pytest.mark.parametrize("seed", [0, 1])
    def test_max_on_outer_shell(self, n, alpha, seed):
        p = ModelParams(n, alpha)
        e = project_zonal(p, random_poly(seed + 10 * n, 6), 8)
        t = np.linspace(-1, 1, 201)
        radii = np.linspace(0, 0.95, 20)
        values = np.array([np.max(np.abs(solve_series_zonal(p, e, r, t))) for r in radii])
        assert values[:-1].max() <= values[-1] + 1e-9


class TestMeans:
    @pytest.mark.parametrize("n, alpha", MONOTONE)
    @pytest.mark.parametrize("p_exp", [1.0, 2.0, 3.0, math.inf])
    def test_bounded_and_tends_to_boundary_norm(self, n, alpha, p_exp):
        p = ModelParams(n, alpha)
        f = random_poly(7 * n, 5)
        e = project_zonal(p, f, 7)
        norm = lp_norm(p, f, p_exp)
        means = [mean_lp(p, e, r, p_exp) for r in (0.0, 0.3, 0.6, 0.9, 0.99)]
        assert max(means) <= norm * (1 + 1e-9)
        if alpha >= 0:
            assert_allclose(mean_lp(p, e, 0.999, p_exp), norm, rtol=0.02)
        else:
            # mass deficit decays like (1 - r^2)^(1 + 2 alpha): only check the trend
            gaps = [norm - mean_lp(p, e, r, p_exp) for r in (0.9, 0.99, 0.999)]
            assert gaps[0] > gaps[1] > gaps[2] > 0


class TestSchwarz:
    @pytest.mark.parametrize("n, alpha", GRID)
    def test_sign_data_is_extremal(self, n, alpha):
        p = ModelParams(n, alpha)
        report = schwarz_verify(p, ZonalFunction.sign(), math.inf, [0.1, 0.5, 0.9])
        assert report.passed
        for row in report.rows:
            assert_allclose(abs(row.u_value), row.bound, rtol=1e-6)

    def test_linear_data_strict(self):
        p = ModelParams(3, 0.0)
        report = schwarz_verify(p, ZonalFunction.polynomial([0, 1]), 2.0, [0.1, 0.4, 0.8])
        assert report.passed
        assert all(row.margin > 0 for row in report.rows)

    def test_zero_data(self):
        report = schwarz_verify(ModelParams(4, 0.5), ZonalFunction.constant(0.0), 2.0, [0.3])
        assert report.passed
        assert report.rows[0].margin == 0.0

    def test_centres_the_data(self):
        p = ModelParams(3, 1.0)
        report = schwarz_verify(p, ZonalFunction.polynomial([3.0, 1.0]), 2.0, [0.0])
        assert abs(report.rows[0].u_value) < 1e-13

    def test_reports_violation(self):
        p = ModelParams(3, 0.0)
        fake = {0.5: 0.0, 0.7: g_p(p, 0.7, 2.0)}
        report = schwarz_verify(p, ZonalFunction.polynomial([0, 1]), 2.0, [0.5, 0.7], g_values=fake)
        assert not report.passed
        assert [row.r for row in report.violations] == [0.5]

    @settings(max_examples=20, deadline=None)
    @given(st.sampled_from(GRID), st.sampled_from([1.0, 2.0, 4.0, math.inf]),
           st.lists(st.floats(-3, 3), min_size=2, max_size=9))
    def test_random_polynomials(self, na, p_exp, coeffs):
        p = ModelParams(*na)
        report = schwarz_verify(p, ZonalFunction.polynomial(coeffs), p_exp, [0.2, 0.6, 0.9])
        assert report.passed


class TestGradientBound:
    @pytest.mark.parametrize("n, alpha", GRID)
    def test_matches_difference_quotient(self, n, alpha):
        p = ModelParams(n, alpha)
        f = ZonalFunction.polynomial([0.0, 1.0, 0.0, -0.5])
        h = 1e-5
        assert_allclose(solve_axis(p, f, h) / h, gradient_at_centre(p, f), rtol=1e-4)

    @pytest.mark.parametrize("n, alpha", GRID)
    @pytest.mark.parametrize("p_exp", [1.0, 2.0, 4.0, math.inf])
    def test_bound_holds(self, n, alpha, p_exp):
        p = ModelParams(n, alpha)
        for seed in range(5):
            f = random_poly(seed, 6)
            bound = gradient_bound_constant(p, conjugate(p_exp)) * lp_norm(p, f, p_exp)
            assert abs(gradient_at_centre(p, f)) <= bound * (1 + 1e-12)

    @pytest.mark.parametrize("n, alpha", GRID)
    def test_sign_data_is_sharp_for_sup_norm(self, n, alpha):
        p = ModelParams(n, alpha)
        f = ZonalFunction.sign()
        bound = gradient_bound_constant(p, 1.0)
        assert_allclose(gradient_at_centre(p, f), bound, rtol=1e-12)


class TestNearExtremizer:
    @pytest.mark.parametrize("i", [1, 5, 50, 200])
    def test_unit_norm_and_zero_mean(self, i):
        p = ModelParams(4, 0.5)
        f = near_extremizer_p1(p, i)
        assert_allclose(lp_norm(p, f, 1.0), 1.0, rtol=1e-12)
        assert abs(mean_value(p, f)) < 1e-14

    def test_ratio_at_200(self):
        p = ModelParams(3, 0.0)
        ratio = abs(solve_axis(p, near_extremizer_p1(p, 200), 0.5)) / g1_closed(p, 0.5)
        assert ratio >= 0.99

    @pytest.mark.parametrize("n, alpha", GRID)
    def test_ratio_increases_towards_one(self, n, alpha):
        p = ModelParams(n, alpha)
        ratios = [solve_axis(p, near_extremizer_p1(p, i), 0.5) / g1_closed(p, 0.5) for i in (2, 8, 32, 128)]
        assert np.all(np.diff(ratios) > 0)
        assert ratios[-1] <= 1 + 1e-12

    def test_rejects_bad_index(self):
        with pytest.raises(DomainError):
            near_extremizer_p1(ModelParams(3, 0.0), 0)
