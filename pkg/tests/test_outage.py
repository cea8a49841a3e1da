import math
import warnings

import numpy as np
import pytest

from sensec.network import NetworkConfig
from sensec.outage import (
    cop_coefficients,
    cop_general,
    cop_interference_limited,
    cop_low_approx,
    sop_general,
    sop_interference_limited,
)
from sensec.specfun import lambda_coeff, phi_const, xi_coeff


def make_cfg(**overrides):
    params = dict(
        lambda_s=1.0,
        lambda_c=0.01,
        lambda_e=1e-4,
        K=3,
        M_c=8,
        M_e=2,
        P_a=10.0,
        P_j=10.0,
        omega=1.0,
        alpha=4.0,
    )
    params.update(overrides)
    return NetworkConfig(**params)


class TestCopGeneral:
    def test_vanishes_at_zero_threshold(self):
        cfg = make_cfg(omega=0.0)
        assert cop_general(cfg, 0.05, 1, 0.0) == 0.0
        assert cop_general(cfg, 0.05, 1, 1e-9) < 1e-4

    def test_equals_il_without_noise(self):
        for K, M_c, k in [(1, 2, 1), (3, 8, 1), (3, 8, 3), (4, 6, 2)]:
            cfg = make_cfg(K=K, M_c=M_c, omega=0.0)
            for beta in (0.3, 1.0, 10.0):
                g = cop_general(cfg, 0.05, k, beta)
                il = cop_interference_limited(cfg, 0.05, k, beta)
                assert g == pytest.approx(il, abs=1e-10)

    def test_small_noise_limit(self):
        cfg = make_cfg(K=1, M_c=2, omega=1e-12)
        g = cop_general(cfg, 0.05, 1, 1.0)
        il = cop_interference_limited(cfg, 0.05, 1, 1.0)
        assert g == pytest.approx(il, rel=1e-4)

    def test_il_below_general_with_noise(self):
        cfg = make_cfg()
        for k in (1, 2, 3):
            for beta in (0.5, 1.0, 5.0):
                assert cop_interference_limited(cfg, 0.05, k, beta) <= cop_general(
                    cfg, 0.05, k, beta
                )

    def test_monotone_in_parameters(self):
        base = dict(rho=0.05, k=1, beta=1.0)
        betas = [cop_general(make_cfg(), base["rho"], 1, b) for b in (0.2, 0.5, 1.0, 2.0, 5.0)]
        assert all(b >= a for a, b in zip(betas, betas[1:]))
        noises = [cop_general(make_cfg(omega=w), 0.05, 1, 1.0) for w in (0.0, 0.5, 1.0, 2.0, 4.0)]
        assert all(b >= a for a, b in zip(noises, noises[1:]))
        rhos = [cop_general(make_cfg(), r, 1, 1.0) for r in (0.0, 0.1, 0.3, 0.6, 1.0)]
        assert all(b >= a for a, b in zip(rhos, rhos[1:]))
        dens = [cop_general(make_cfg(lambda_s=s), 0.3, 1, 1.0) for s in (0.5, 1.0, 2.0, 4.0)]
        assert all(b >= a for a, b in zip(dens, dens[1:]))
        # later decoding order = farther sensor and no remaining projection
        # headroom, so outage grows with the stream index
        ks = [cop_general(make_cfg(), 0.05, k, 1.0) for k in (1, 2, 3)]
        assert all(b >= a for a, b in zip(ks, ks[1:]))

    def test_more_antennas_reduce_outage(self):
        lo = cop_general(make_cfg(M_c=16), 0.05, 1, 1.0)
        hi = cop_general(make_cfg(M_c=8), 0.05, 1, 1.0)
        assert lo < hi

    def test_alpha4_closed_form_path_agrees(self):
        cfg = make_cfg()
        for k in (1, 3):
            for beta in (0.5, 2.0):
                q = cop_general(cfg, 0.05, k, beta, omega_method="quad")
                c = cop_general(cfg, 0.05, k, beta, omega_method="alpha4")
                assert c == pytest.approx(q, rel=1e-6)

    def test_stream_index_validated(self):
        with pytest.raises(ValueError):
            cop_general(make_cfg(), 0.05, 4, 1.0)
        with pytest.raises(ValueError):
            cop_general(make_cfg(), 0.05, 0, 1.0)

    def test_general_alpha(self):
        cfg = make_cfg(alpha=3.5, omega=0.0)
        g = cop_general(cfg, 0.05, 2, 1.0)
        il = cop_interference_limited(cfg, 0.05, 2, 1.0)
        assert g == pytest.approx(il, abs=1e-10)
        assert 0.0 < g < 1.0


class TestCopLowApprox:
    def test_single_sensor_shape(self):
        # with one scheduled sensor the geometry factor is exactly 1 and the
        # antenna factor is xi(M_c); the expansion is coefficient * beta^delta
        cfg = make_cfg(K=1, M_c=2, omega=0.0)
        pl = phi_const(cfg.alpha)
        from sensec.network import derive_densities

        dd = derive_densities(cfg, 0.05)
        assert lambda_coeff(1, 1) == 1.0
        assert xi_coeff(1, 0.5) == 1.0
        beta = 1e-3
        expected = (
            pl.phi * dd.lambda_o * beta**0.5 / (math.pi * cfg.lambda_c) * xi_coeff(2, 0.5)
        )
        assert cop_low_approx(cfg, 0.05, 1, beta) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("K,M_c,k", [(2, 8, 1), (3, 8, 2), (4, 16, 4)])
    def test_asymptotic_ratio(self, K, M_c, k):
        cfg = make_cfg(K=K, M_c=M_c, omega=0.0)
        beta = 1.0
        while cop_interference_limited(cfg, 0.05, k, beta) > 1e-3:
            beta /= 2.0
        il = cop_interference_limited(cfg, 0.05, k, beta)
        low = cop_low_approx(cfg, 0.05, k, beta)
        assert 0.98 <= low / il <= 1.02

    def test_increasing_in_rho_and_beta(self):
        cfg = make_cfg()
        rs = [cop_low_approx(cfg, r, 1, 0.01) for r in (0.0, 0.2, 0.5, 1.0)]
        assert all(b > a for a, b in zip(rs, rs[1:]))
        bs = [cop_low_approx(cfg, 0.05, 1, b) for b in (0.001, 0.005, 0.01, 0.04)]
        assert all(b > a for a, b in zip(bs, bs[1:]))

    def test_clamped_at_one(self):
        assert cop_low_approx(make_cfg(), 1.0, 3, 1e9) == 1.0


class TestCopCoefficients:
    def test_fields(self):
        cfg = make_cfg()
        co = cop_coefficients(cfg, 0.05, 2, beta_e_star=0.5)
        assert co.M_k == cfg.M_c - cfg.K + 2
        assert co.B_k == pytest.approx(1.0 / 3.0)
        assert co.A_k > 0.0
        # A_k reproduces the low-outage expansion
        beta_t = 0.01
        assert co.A_k * beta_t**co.delta == pytest.approx(
            cop_low_approx(cfg, 0.05, 2, beta_t), rel=1e-12
        )


class TestSopGeneral:
    def test_vanishes_for_rare_eavesdroppers(self):
        assert sop_general(make_cfg(lambda_e=1e-12), 0.05, 1.0) < 1e-7

    def test_equals_il_without_noise(self):
        cfg = make_cfg(omega=0.0)
        for beta in (0.3, 1.0, 10.0):
            for rho in (0.01, 0.05, 0.5):
                g = sop_general(cfg, rho, beta)
                il = sop_interference_limited(cfg, rho, beta)
                assert g == pytest.approx(il, abs=1e-10)

    def test_small_noise_limit(self):
        cfg = make_cfg(omega=1e-12)
        g = sop_general(cfg, 0.05, 1.0)
        il = sop_interference_limited(cfg, 0.05, 1.0)
        assert g == pytest.approx(il, rel=1e-4)

    def test_il_above_general_with_noise(self):
        cfg = make_cfg()
        for beta in (0.5, 1.0, 5.0):
            assert sop_interference_limited(cfg, 0.05, beta) >= sop_general(cfg, 0.05, beta)

    def test_monotonicity(self):
        cfg = make_cfg()
        bs = [sop_general(cfg, 0.05, b) for b in (0.2, 0.5, 1.0, 3.0, 10.0)]
        assert all(b <= a for a, b in zip(bs, bs[1:]))
        rhos = [sop_general(cfg, r, 1.0) for r in (0.01, 0.05, 0.2, 0.6, 1.0)]
        assert all(b <= a for a, b in zip(rhos, rhos[1:]))
        lams = [sop_general(make_cfg(lambda_e=l), 0.05, 1.0) for l in (1e-5, 1e-4, 1e-3)]
        assert all(b >= a for a, b in zip(lams, lams[1:]))
        mes = [sop_general(make_cfg(M_e=m), 0.05, 1.0) for m in (1, 2, 3, 4)]
        assert all(b >= a for a, b in zip(mes, mes[1:]))

    def test_log_survival_linear_in_lambda_e(self):
        cfg1 = make_cfg(lambda_e=1e-4)
        cfg3 = make_cfg(lambda_e=3e-4)
        l1 = math.log1p(-sop_general(cfg1, 0.05, 1.0))
        l3 = math.log1p(-sop_general(cfg3, 0.05, 1.0))
        assert l3 == pytest.approx(3.0 * l1, rel=1e-9)

    def test_alpha4_closed_form_path_agrees(self):
        cfg = make_cfg()
        for beta in (0.5, 2.0):
            q = sop_general(cfg, 0.05, beta, omega_method="quad")
            c = sop_general(cfg, 0.05, beta, omega_method="alpha4")
            assert c == pytest.approx(q, rel=1e-6)

    def test_degenerate_without_noise_or_jamming(self):
        cfg = make_cfg(omega=0.0)
        with pytest.warns(UserWarning, match="unbounded"):
            assert sop_general(cfg, 0.0, 1.0) == 1.0

    def test_noise_limited_rho_zero_is_valid(self):
        cfg = make_cfg()  # omega = 1 mW
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            p = sop_general(cfg, 0.0, 1.0)
        assert 0.0 < p < 1.0


class TestSopInterferenceLimited:
    def test_reference_value(self):
        # lambda_i = 0.96 regime: hand-evaluated closed form
        cfg = make_cfg(K=4, M_c=8, omega=0.0)
        phi = math.pi ** 2 / 2.0
        expected = -math.expm1(-math.pi * 1e-4 * 2 / (phi * 0.05 * 0.96))
        got = sop_interference_limited(cfg, 0.05, 1.0)
        assert got == pytest.approx(expected, rel=1e-12)
        assert got == pytest.approx(2.65e-3, rel=5e-3)

    def test_limits(self):
        cfg = make_cfg(omega=0.0)
        assert sop_interference_limited(cfg, 0.05, 1e12) < 1e-6
        assert sop_interference_limited(cfg, 1e-9, 1.0) == pytest.approx(1.0)

    def test_rho_zero_degenerates(self):
        with pytest.warns(UserWarning, match="rho = 0"):
            assert sop_interference_limited(make_cfg(), 0.0, 1.0) == 1.0

    def test_beta_must_be_positive(self):
        with pytest.raises(ValueError):
            sop_interference_limited(make_cfg(), 0.05, 0.0)
