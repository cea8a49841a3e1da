import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.special as sp

from sensec.specfun import (
    OmegaParams,
    lambda_coeff,
    omega_closed_form_alpha4,
    omega_integral,
    parabolic_cylinder_d,
    phi_const,
    upsilon,
    xi_coeff,
)


class TestPhiConst:
    def test_alpha_4(self):
        pl = phi_const(4.0)
        assert pl.delta == 0.5
        assert pl.phi == pytest.approx(math.pi**2 / 2.0, rel=1e-14)

    def test_alpha_3_reflection_identity(self):
        # Gamma(1+d)Gamma(1-d) = pi*d/sin(pi*d) gives a gamma-free oracle
        d = 2.0 / 3.0
        expected = math.pi * math.pi * d / math.sin(math.pi * d)
        assert phi_const(3.0).phi == pytest.approx(expected, rel=1e-13)
        assert phi_const(3.0).phi == pytest.approx(7.597625010352073, rel=1e-12)

    def test_large_alpha_limit_is_pi(self):
        assert phi_const(1e9).phi == pytest.approx(math.pi, rel=1e-8)

    def test_phi_at_least_pi(self):
        for alpha in (2.1, 2.5, 3.0, 4.0, 6.0, 20.0):
            assert phi_const(alpha).phi >= math.pi - 1e-12

    @pytest.mark.parametrize("alpha", [2.0, 1.5, 0.0, -4.0])
    def test_domain_error(self, alpha):
        with pytest.raises(ValueError):
            phi_const(alpha)


def upsilon_bruteforce(p, n, delta):
    total = 0.0
    for subset in itertools.combinations(range(1, p), p - n):
        prod = 1.0
        for i, q in enumerate(sorted(subset), start=1):
            prod *= q - delta * (q - i + 1)
        total += prod
    return total


class TestUpsilon:
    def test_examples(self):
        assert upsilon(2, 1, 0.5) == pytest.approx(0.5)
        assert upsilon(3, 1, 0.5) == pytest.approx(0.75)

    @pytest.mark.parametrize("p", range(1, 9))
    def test_convention_top_is_one(self, p):
        assert upsilon(p, p, 0.37) == 1.0

    @pytest.mark.parametrize("delta", [0.1, 0.5, 0.9])
    def test_matches_enumeration(self, delta):
        for p in range(1, 9):
            for n in range(1, p + 1):
                assert upsilon(p, n, delta) == pytest.approx(
                    upsilon_bruteforce(p, n, delta), rel=1e-12
                ), (p, n, delta)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            upsilon(3, 0, 0.5)
        with pytest.raises(ValueError):
            upsilon(3, 4, 0.5)
        with pytest.raises(ValueError):
            upsilon(0, 0, 0.5)


class TestLambdaCoeff:
    def test_examples(self):
        assert lambda_coeff(1, 1) == pytest.approx(1.0)
        assert lambda_coeff(4, 1) == pytest.approx(0.25)
        assert lambda_coeff(2, 2) == pytest.approx(1.5)

    def test_positive(self):
        for K in range(1, 9):
            for k in range(1, K + 1):
                assert lambda_coeff(K, k) > 0.0

    def test_low_threshold_identity(self):
        # k C(K,k) sum_l C(k-1,l)(-1)^l/(K-k+l+1) = 1: the first-power analog,
        # which forces the outage probability to vanish at threshold zero
        for K in range(1, 9):
            for k in range(1, K + 1):
                acc = Fraction(0)
                for l in range(k):
                    acc += Fraction((-1) ** l * math.comb(k - 1, l), K - k + l + 1)
                assert k * math.comb(K, k) * acc == 1

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            lambda_coeff(3, 0)
        with pytest.raises(ValueError):
            lambda_coeff(3, 4)


class TestXiCoeff:
    def test_examples(self):
        assert xi_coeff(1, 0.5) == 1.0
        assert xi_coeff(2, 0.5) == pytest.approx(0.5)
        assert xi_coeff(3, 0.5) == pytest.approx(0.375)

    @pytest.mark.parametrize("delta", [0.05, 0.3, 0.5, 0.8, 0.95])
    def test_decreasing_and_bounded(self, delta):
        prev = 1.0 + 1e-15
        for M in range(1, 65):
            v = xi_coeff(M, delta)
            assert 0.0 < v <= 1.0
            assert v < prev
            prev = v

    @pytest.mark.parametrize("M", [1, 2, 5, 12, 40])
    @pytest.mark.parametrize("delta", [0.25, 0.5, 2.0 / 3.0])
    def test_gamma_ratio_identity(self, M, delta):
        expected = math.gamma(M - delta) / (math.gamma(M) * math.gamma(1.0 - delta))
        assert xi_coeff(M, delta) == pytest.approx(expected, rel=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            xi_coeff(0, 0.5)
        with pytest.raises(ValueError):
            xi_coeff(3, 1.5)


class TestOmegaIntegral:
    def test_pure_exponential(self):
        assert omega_integral(OmegaParams(0, 0.0, 2.0, 4.0)) == pytest.approx(0.5, rel=1e-12)

    @pytest.mark.parametrize("m", [0, 1, 2, 5])
    @pytest.mark.parametrize("t", [0.3, 1.0, 4.2])
    def test_gamma_moments(self, m, t):
        expected = math.factorial(m) / t ** (m + 1)
        assert omega_integral(OmegaParams(m, 0.0, t, 3.7)) == pytest.approx(expected, rel=1e-12)

    def test_gaussian_case(self):
        val = omega_integral(OmegaParams(0, 0.7, 0.0, 4.0))
        assert val == pytest.approx(0.5 * math.sqrt(math.pi / 0.7), rel=1e-12)

    def test_divergent(self):
        with pytest.raises(ValueError):
            omega_integral(OmegaParams(1.0, 0.0, 0.0, 4.0))

    def test_spec_point_cross_check(self):
        p = OmegaParams(1.5, 0.3, 1.2, 4.0)
        assert omega_integral(p) == pytest.approx(omega_closed_form_alpha4(p), rel=1e-6)

    def test_quadrature_vs_closed_small_lattice(self):
        for mu in (0.0, 2.5, 7.0):
            for t1 in (1e-3, 0.3, 5.0):
                for t2 in (0.0, 0.7, 8.0):
                    p = OmegaParams(mu, t1, t2, 4.0)
                    assert omega_integral(p) == pytest.approx(
                        omega_closed_form_alpha4(p), rel=1e-6
                    ), (mu, t1, t2)

    def test_general_alpha_against_series_free_quad(self):
        # independent oracle: raw scipy quad on the untransformed integrand
        from scipy.integrate import quad

        for mu, t1, t2, alpha in [(1.0, 0.5, 2.0, 3.0), (3.5, 0.05, 0.4, 5.0)]:
            ref = quad(
                lambda x: x**mu * math.exp(-t1 * x ** (alpha / 2) - t2 * x), 0, np.inf
            )[0]
            assert omega_integral(OmegaParams(mu, t1, t2, alpha)) == pytest.approx(ref, rel=1e-8)


class TestClosedFormAlpha4:
    def test_requires_alpha4(self):
        with pytest.raises(ValueError):
            omega_closed_form_alpha4(OmegaParams(1.0, 0.5, 1.0, 3.0))

    def test_requires_positive_tau1(self):
        with pytest.raises(ValueError):
            omega_closed_form_alpha4(OmegaParams(1.0, 0.0, 1.0, 4.0))

    def test_mu2_point_matches_quadrature(self):
        p = OmegaParams(2.0, 1.0, 1.0, 4.0)
        assert omega_closed_form_alpha4(p) == pytest.approx(omega_integral(p), rel=1e-9)

    def test_extreme_scaled_argument_no_overflow(self):
        # tau2^2/(8 tau1) ~ 1e4 would overflow a naive exp * D product
        p = OmegaParams(3.0, 1e-3, 10.0, 4.0)
        v = omega_closed_form_alpha4(p)
        assert math.isfinite(v)
        assert v == pytest.approx(omega_integral(p), rel=1e-6)


class TestParabolicCylinder:
    @pytest.mark.parametrize(
        "nu,z", [(0.5, 0.3), (1.0, 1.0), (1.5, 0.8), (3.2, 2.0), (0.5, 5.0), (6.0, 8.0)]
    )
    def test_against_scipy(self, nu, z):
        assert parabolic_cylinder_d(nu, z) == pytest.approx(sp.pbdv(-nu, z)[0], rel=1e-9)

    def test_domain(self):
        with pytest.raises(ValueError):
            parabolic_cylinder_d(0.0, 1.0)
