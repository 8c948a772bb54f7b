import math

import numpy as np
import pytest
from scipy.integrate import quad

from studentconv import (
    GaussStudentParams,
    StudentPairParams,
    TruncationPolicy,
    fy_density,
    fz_density,
    g_component,
    gauss_student_sum_density,
    log_gamma,
    phi_component,
    student_cf,
    student_density,
    student_pair_sum_density,
    subordination_check,
)
from studentconv.mixing import alpha_supply
from studentconv.oracle import convolution_oracle_point


def radial_mass(f, d, upper, **kw):
    surf = 2.0 * math.pi ** (d / 2) / math.exp(log_gamma(d / 2))
    return quad(
        lambda r: surf * r ** (d - 1) * f(r),
        0.0,
        upper,
        epsabs=1e-12,
        epsrel=1e-10,
        limit=300,
        **kw,
    )[0]


class TestStudentDensity:
    def test_cauchy_at_origin(self):
        assert student_density(0.5, 1, 0.0) == pytest.approx(1.0 / math.pi, rel=1e-14)

    def test_direct_value(self):
        expected = 0.5 * 2.0**-1.5
        assert student_density(1.0, 1, 1.0) == pytest.approx(expected, rel=1e-14)

    def test_normalization_3d(self):
        mass = radial_mass(lambda r: student_density(2.5, 3, r), 3, 200.0)
        assert mass == pytest.approx(1.0, abs=1e-8)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            student_density(0.0, 1, 1.0)
        with pytest.raises(ValueError):
            student_density(1.0, 1, -1.0)


class TestGComponent:
    def test_gaussian_at_origin(self):
        assert g_component(0, 1.0, 1, 0.0) == pytest.approx(1.0 / math.sqrt(2 * math.pi), rel=1e-14)

    def test_tilted_vanish_at_origin(self):
        assert g_component(1, 1.0, 1, 0.0) == 0.0
        assert g_component(5, 0.3, 2, 0.0) == 0.0

    def test_normalization(self):
        mass = radial_mass(lambda r: g_component(3, 2.0, 2, r), 2, 40.0)
        assert mass == pytest.approx(1.0, abs=1e-9)

    def test_scaling_identity(self):
        sigma = 1.7
        for r in (0.0, 0.4, 2.2, 8.0):
            lhs = g_component(4, sigma, 2, r)
            rhs = sigma**-2 * g_component(4, 1.0, 2, r / sigma)
            assert lhs == pytest.approx(rhs, rel=1e-14)


class TestPhiComponent:
    def test_n0_is_student(self):
        assert phi_component(0, 1.7, 2, 0.9) == pytest.approx(
            student_density(1.7, 2, 0.9), rel=1e-14
        )

    def test_vanish_at_origin(self):
        assert phi_component(1, 2.0, 1, 0.0) == 0.0

    def test_normalization(self):
        mass = radial_mass(lambda r: phi_component(2, 3.0, 1, r), 1, 400.0)
        assert mass == pytest.approx(1.0, abs=1e-8)


class TestFz:
    def test_origin_is_alpha0_gaussian(self):
        p = GaussStudentParams(d=1, nu=2.0, sigma=1.0)
        a0 = alpha_supply(p).values(1)[0]
        assert fz_density(p, 1.0, 1.0, 0.0) == pytest.approx(
            a0 / math.sqrt(2 * math.pi), rel=1e-12
        )

    def test_dominates_leading_term(self):
        p = GaussStudentParams(d=1, nu=2.0, sigma=1.0)
        a0 = alpha_supply(p).values(1)[0]
        for r in (0.0, 0.5, 1.5, 4.0):
            assert fz_density(p, 1.0, 1.0, r) >= a0 * g_component(0, 1.0, 1, r)

    def test_normalization_with_tail_completion(self):
        from scipy.special import gammaincc

        p = GaussStudentParams(d=1, nu=2.0, sigma=1.0)
        dens = gauss_student_sum_density(p)
        upper = 10.0
        bulk = radial_mass(dens.eval_radial, 1, upper)
        kmax = 400
        coeffs = alpha_supply(p).values(kmax)
        comp_tail = float(
            coeffs @ gammaincc(np.arange(kmax) + 0.5, upper**2 / (2 * p.sigma**2))
        )
        from studentconv import alpha_tail_mass

        total = bulk + comp_tail + alpha_tail_mass(p, kmax)
        assert total == pytest.approx(1.0, abs=1e-7)

    def test_scale_consistency(self):
        # scaling both factors by c rescales the density by c^-d at r/c
        p = GaussStudentParams(d=1, nu=2.0, sigma=1.0)
        c = 2.5
        for r in (0.3, 1.0, 4.0):
            lhs = fz_density(p, c, c, r)
            rhs = fz_density(p, 1.0, 1.0, r / c) / c
            assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_pure_gaussian_when_a2_zero(self):
        p = GaussStudentParams(d=1, nu=2.0, sigma=1.0)
        for r in (0.0, 1.0, 3.0):
            assert fz_density(p, 1.0, 0.0, r) == pytest.approx(
                g_component(0, 1.0, 1, r), rel=1e-13
            )

    def test_partial_sums_monotone(self):
        p = GaussStudentParams(d=1, nu=1.5, sigma=1.0)
        r = 2.0
        coeffs = alpha_supply(p).values(60)
        terms = [coeffs[k] * g_component(k, 1.0, 1, r) for k in range(60)]
        partials = np.cumsum(terms)
        assert np.all(np.diff(partials) >= 0)
        assert partials[-1] <= fz_density(p, 1.0, 1.0, r) + 1e-12

    def test_vector_front_end(self):
        p = GaussStudentParams(d=2, nu=2.0, sigma=1.0)
        dens = gauss_student_sum_density(p)
        r = 1.3
        pts = np.array([[r, 0.0], [0.0, r], [r / math.sqrt(2), r / math.sqrt(2)]])
        vals = dens.density_at(pts)
        assert np.allclose(vals, vals[0], rtol=1e-13)


class TestFy:
    def test_cauchy_values(self):
        p = StudentPairParams(d=1, nu=0.5, mu=0.5)
        assert fy_density(p, 0.0) == pytest.approx(1.0 / (2 * math.pi), rel=1e-10)
        assert fy_density(p, 2.0) == pytest.approx(1.0 / (4 * math.pi), rel=1e-10)

    def test_against_convolution_oracle(self):
        p = StudentPairParams(d=1, nu=1.5, mu=2.5)
        val = fy_density(p, 1.0, TruncationPolicy(epsilon=1e-12))
        oracle, _ = convolution_oracle_point(1.5, 2.5, 1.0)
        assert val == pytest.approx(oracle, abs=1e-6)

    def test_normalization_with_tail_completion(self):
        from scipy.special import betaincc

        from studentconv import c_tail_mass
        from studentconv.mixing import c_supply

        p = StudentPairParams(d=2, nu=1.5, mu=2.5)
        dens = student_pair_sum_density(p)
        upper = 10.0
        bulk = radial_mass(dens.eval_radial, 2, upper)
        nmax = 3000
        coeffs = c_supply(p).values(nmax)
        v = upper**2 / (1 + upper**2)
        comp_tail = float(coeffs @ betaincc(np.arange(nmax) + 1.0, p.eta, v))
        total = bulk + comp_tail + c_tail_mass(p, nmax)
        assert total == pytest.approx(1.0, abs=1e-7)

    def test_profile_matches_scalar(self):
        p = StudentPairParams(d=1, nu=1.5, mu=2.5)
        dens = student_pair_sum_density(p)
        grid = np.array([0.0, 0.5, 2.0, 7.5])
        profile = dens.eval_radial(grid)
        for r, v in zip(grid, profile):
            assert v == pytest.approx(fy_density(p, float(r)), rel=1e-12)


class TestStudentCf:
    def test_value_at_zero(self):
        assert student_cf(1.3, 0.0) == 1.0

    def test_cauchy(self):
        for u in (0.1, 1.0, 5.0):
            assert student_cf(0.5, u) == pytest.approx(math.exp(-u), rel=1e-12)

    def test_against_fourier_oracle(self):
        # numerical cosine transform of the closed-form density
        nu, u = 1.5, 2.0
        val = 2.0 * quad(
            lambda r: student_density(nu, 1, r),
            0.0,
            np.inf,
            weight="cos",
            wvar=u,
            epsabs=1e-12,
        )[0]
        assert student_cf(nu, u) == pytest.approx(val, abs=1e-8)

    def test_domain(self):
        with pytest.raises(ValueError):
            student_cf(1.0, -0.5)


class TestSubordination:
    @pytest.mark.parametrize(
        "nu,d,r",
        [(1.0, 1, 0.0), (2.5, 3, 1.7), (0.5, 1, 1.0), (4.0, 2, 0.3)],
    )
    def test_residual_small(self, nu, d, r):
        assert subordination_check(nu, d, r) <= 1e-9

    def test_cauchy_cross_value(self):
        # for 1 df the mixture must land on the Cauchy density at 1
        assert student_density(0.5, 1, 1.0) == pytest.approx(1.0 / (2 * math.pi), rel=1e-14)
        assert subordination_check(0.5, 1, 1.0) <= 1e-9


class TestTruncationPolicy:
    def test_validation(self):
        with pytest.raises(ValueError):
            TruncationPolicy(epsilon=0.0)
        with pytest.raises(ValueError):
            TruncationPolicy(epsilon=1e-3, hard_cap=0)

    def test_hard_cap_raises(self):
        from studentconv import TruncationError

        p = StudentPairParams(d=1, nu=0.5, mu=0.5)
        dens = student_pair_sum_density(p, TruncationPolicy(epsilon=1e-10, hard_cap=40))
        with pytest.raises(TruncationError):
            dens.eval_radial(np.array([9.0]))
