import math

import mpmath
import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import exp1

from studentconv import (
    QuadratureConfig,
    QuadratureError,
    integrate_finite,
    integrate_semi_infinite,
    kummer_psi,
    log_beta,
    log_gamma,
    log_pochhammer,
    macdonald_k,
)


class TestLogGamma:
    def test_at_one(self):
        assert log_gamma(1.0) == 0.0

    def test_at_half(self):
        assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-15)

    def test_against_quadrature_oracle(self):
        # ln of the defining integral, in high precision
        with mpmath.workdps(40):
            expected = float(mpmath.log(mpmath.quad(lambda t: t ** 9.3 * mpmath.exp(-t), [0, mpmath.inf])))
        assert log_gamma(10.3) == pytest.approx(expected, rel=1e-14)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            log_gamma(0.0)
        with pytest.raises(ValueError):
            log_gamma(-1.5)

    def test_recurrence(self):
        # |lg(x+1) - lg(x) - ln x| small; the bound is limited by the ulp of
        # lg(x) itself once x is large, so the tolerance tracks the spacing
        x = np.concatenate([np.geomspace(0.1, 1e4, 801), np.linspace(0.1, 1e4, 801)])
        resid = np.abs(
            np.array([log_gamma(v + 1) - log_gamma(v) - math.log(v) for v in x])
        )
        allowed = np.maximum(1e-12, 4 * np.spacing([log_gamma(v + 1) for v in x]))
        assert np.all(resid <= allowed)


class TestLogBeta:
    def test_trivial(self):
        assert log_beta(1.0, 1.0) == 0.0
        assert log_beta(0.5, 0.5) == pytest.approx(math.log(math.pi), rel=1e-15)

    def test_rational(self):
        assert log_beta(3.0, 4.0) == pytest.approx(math.log(1.0 / 60.0), rel=1e-14)

    def test_matches_gamma_combination(self):
        for a, b in [(0.7, 2.2), (5.0, 0.3), (11.0, 17.0)]:
            expected = log_gamma(a) + log_gamma(b) - log_gamma(a + b)
            assert log_beta(a, b) == pytest.approx(expected, rel=1e-13, abs=1e-13)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            log_beta(0.0, 1.0)
        with pytest.raises(ValueError):
            log_beta(1.0, -2.0)


class TestLogPochhammer:
    def test_empty_product(self):
        assert log_pochhammer(3.7, 0) == 0.0

    def test_small_cases(self):
        assert log_pochhammer(0.5, 2) == pytest.approx(math.log(0.75), rel=1e-14)
        expected = math.log(2.5 * 3.5 * 4.5 * 5.5 * 6.5)
        assert log_pochhammer(2.5, 5) == pytest.approx(expected, rel=1e-14)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            log_pochhammer(-1.0, 2)
        with pytest.raises(ValueError):
            log_pochhammer(1.0, -1)


class TestMacdonaldK:
    def test_half_integer_closed_form(self):
        u = 2.0
        expected = math.sqrt(math.pi / (2 * u)) * math.exp(-u)
        assert macdonald_k(0.5, u) == pytest.approx(expected, rel=1e-13)

    def test_against_cosh_integral_oracle(self):
        # K_nu(u) = int_0^inf exp(-u cosh t) cosh(nu t) dt
        def oracle(nu, u):
            upper = math.acosh(745.0 / u)
            return quad(
                lambda t: math.exp(-u * math.cosh(t)) * math.cosh(nu * t),
                0.0,
                upper,
                epsabs=1e-15,
                epsrel=1e-13,
                limit=400,
            )[0]

        assert macdonald_k(1.0, 1.0) == pytest.approx(0.6019072301972346, rel=1e-12)
        for nu, u in [(1.0, 1.0), (0.3, 2.7), (4.5, 0.8), (12.0, 15.0)]:
            assert macdonald_k(nu, u) == pytest.approx(oracle(nu, u), rel=1e-10)

    def test_symmetry_in_order(self):
        assert macdonald_k(0.7, 1.3) == pytest.approx(macdonald_k(-0.7, 1.3), rel=1e-14)

    def test_recurrence(self):
        # K_{nu+1}(u) = K_{nu-1}(u) + (2 nu / u) K_nu(u)
        for nu in np.arange(0.3, 5.0, 0.5):
            for u in np.arange(0.1, 10.0, 0.9):
                lhs = macdonald_k(nu + 1, u)
                rhs = macdonald_k(nu - 1, u) + (2 * nu / u) * macdonald_k(nu, u)
                assert lhs == pytest.approx(rhs, rel=1e-8)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            macdonald_k(1.0, 0.0)
        with pytest.raises(ValueError):
            macdonald_k(1.0, -2.0)


class TestKummerPsi:
    def test_power_law_identity(self):
        # Psi(a, a+1; z) = z^-a
        assert kummer_psi(2.0, 3.0, 3.0) == pytest.approx(1.0 / 9.0, rel=1e-12)

    def test_exponential_integral_value(self):
        expected = math.e * exp1(1.0)
        assert kummer_psi(1.0, 1.0, 1.0) == pytest.approx(expected, rel=1e-12)

    def test_against_defining_integral(self):
        # direct adaptive quadrature of the defining integral
        def oracle(alpha, beta, z):
            f = lambda t: math.exp(-z * t) * t ** (alpha - 1) * (1 + t) ** (beta - alpha - 1)
            val = quad(f, 0, np.inf, epsabs=1e-14, epsrel=1e-12, limit=400)[0]
            return val / math.gamma(alpha)

        for alpha, beta, z in [(0.5, 0.5, 2.0), (2.5, -3.0, 1.2), (4.0, 1.5, 7.0)]:
            assert kummer_psi(alpha, beta, z) == pytest.approx(oracle(alpha, beta, z), rel=1e-10)

    def test_power_identity_on_log_grid(self):
        for a in np.geomspace(0.1, 10, 7):
            for z in np.geomspace(0.1, 10, 7):
                assert kummer_psi(a, a + 1, z) * z**a == pytest.approx(1.0, rel=1e-10)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            kummer_psi(0.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            kummer_psi(1.0, 1.0, 0.0)


class TestIntegrateFinite:
    def test_constant(self):
        value, err = integrate_finite(lambda t: 1.0, 0.0, 1.0)
        assert value == pytest.approx(1.0, abs=1e-14)

    def test_endpoint_singularity(self):
        value, _ = integrate_finite(lambda t: t**-0.5, 0.0, 1.0)
        assert value == pytest.approx(2.0, rel=1e-10)

    def test_beta_identity(self):
        mu = nu = 0.5
        f = lambda t: t ** (mu - 0.5) * (1 - t) ** (nu - 0.5)
        value, _ = integrate_finite(f, 0.0, 1.0)
        assert value == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("a", [0.6, 1.0, 2.5, 7.0, 20.0])
    @pytest.mark.parametrize("b", [0.6, 3.0, 20.0])
    def test_beta_integrals_across_shapes(self, a, b):
        f = lambda t: t ** (a - 1) * (1 - t) ** (b - 1)
        value, _ = integrate_finite(f, 0.0, 1.0)
        assert value == pytest.approx(math.exp(log_beta(a, b)), rel=1e-11)

    def test_nonconvergence_raises(self):
        cfg = QuadratureConfig(rel_tol=1e-13, abs_tol=1e-15, max_subdivisions=2)
        f = lambda t: math.sin(1.0 / (t + 1e-9)) / math.sqrt(t + 1e-9)
        with pytest.raises(QuadratureError) as exc:
            integrate_finite(f, 0.0, 1.0, cfg)
        assert exc.value.err_est is not None


class TestIntegrateSemiInfinite:
    def test_exponential(self):
        value, _ = integrate_semi_infinite(lambda a: math.exp(-a))
        assert value == pytest.approx(1.0, rel=1e-12)

    def test_gamma_integral(self):
        value, _ = integrate_semi_infinite(lambda a: math.exp(-a) * a**2.5)
        assert value == pytest.approx(math.gamma(3.5), rel=1e-12)

    @pytest.mark.parametrize("shape", [0.6, 1.0, 2.5, 7.0, 20.0])
    def test_gamma_integrals_across_shapes(self, shape):
        f = lambda a: math.exp(-a + (shape - 1) * math.log(a)) if a > 0 else 0.0
        value, _ = integrate_semi_infinite(f, points=[shape], scale=max(shape, 1.0))
        assert value == pytest.approx(math.exp(log_gamma(shape)), rel=1e-11)

    def test_exponential_integral_value(self):
        f = lambda a: math.exp(-a) * a**2 / (1 + a)
        value, _ = integrate_semi_infinite(f)
        assert value == pytest.approx(math.e * exp1(1.0), rel=1e-11)
