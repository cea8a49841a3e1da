import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sensec.network import (
    ConfigError,
    NetworkConfig,
    OutageConstraints,
    WiretapCode,
    dbm_to_linear,
    derive_densities,
    linear_to_dbm,
    load_config,
)


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


class TestDbm:
    def test_reference_points(self):
        assert dbm_to_linear(0.0) == 1.0
        assert dbm_to_linear(10.0) == pytest.approx(10.0)
        assert dbm_to_linear(-10.0) == pytest.approx(0.1)

    def test_round_trip(self):
        for p in (-30.0, 0.0, 3.0, 17.5):
            assert linear_to_dbm(dbm_to_linear(p)) == pytest.approx(p, abs=1e-12)

    def test_nonfinite_rejected(self):
        with pytest.raises(ConfigError):
            dbm_to_linear(math.inf)


class TestNetworkConfig:
    def test_k_must_be_below_antennas(self):
        with pytest.raises(ConfigError):
            make_cfg(K=8, M_c=8)

    def test_sensor_density_must_exceed_scheduled(self):
        with pytest.raises(ConfigError):
            make_cfg(lambda_s=0.02, K=3, lambda_c=0.01)

    def test_warns_when_barely_dense(self):
        with pytest.warns(UserWarning):
            make_cfg(lambda_s=0.1, K=3, lambda_c=0.01)

    def test_alpha_must_exceed_two(self):
        with pytest.raises(ConfigError):
            make_cfg(alpha=2.0)

    def test_noise_can_be_zero(self):
        assert make_cfg(omega=0.0).omega == 0.0

    def test_with_replaces_and_revalidates(self):
        cfg = make_cfg()
        assert cfg.with_(K=4).K == 4
        with pytest.raises(ConfigError):
            cfg.with_(M_c=2)


class TestDerivedDensities:
    def test_no_jamming(self):
        dd = derive_densities(make_cfg(K=4, M_c=8), 0.0)
        assert dd.lambda_a == pytest.approx(0.04)
        assert dd.lambda_i == pytest.approx(0.96)
        assert dd.lambda_j == 0.0
        assert dd.lambda_o == pytest.approx(0.04)

    def test_full_jamming_equal_powers(self):
        dd = derive_densities(make_cfg(K=4, M_c=8), 1.0)
        assert dd.lambda_o == pytest.approx(1.0)

    def test_partial_jamming(self):
        dd = derive_densities(make_cfg(K=4, M_c=8), 0.05)
        assert dd.lambda_j == pytest.approx(0.048)
        assert dd.lambda_o == pytest.approx(0.088)

    def test_power_ratio_scaling(self):
        cfg = make_cfg(P_j=2.5, P_a=10.0)
        dd = derive_densities(cfg, 0.2)
        expected = dd.lambda_a + (2.5 / 10.0) ** 0.5 * dd.lambda_j
        assert dd.lambda_o == pytest.approx(expected, rel=1e-14)

    def test_monotone_in_rho_pj_lambda_s(self):
        cfg = make_cfg()
        lo = [derive_densities(cfg, r).lambda_o for r in np.linspace(0, 1, 6)]
        assert all(b > a for a, b in zip(lo, lo[1:]))
        lp = [derive_densities(make_cfg(P_j=p), 0.3).lambda_o for p in (1.0, 5.0, 10.0, 20.0)]
        assert all(b > a for a, b in zip(lp, lp[1:]))
        ls = [derive_densities(make_cfg(lambda_s=s), 0.3).lambda_o for s in (0.5, 1.0, 2.0)]
        assert all(b > a for a, b in zip(ls, ls[1:]))

    def test_rho_range(self):
        with pytest.raises(ConfigError):
            derive_densities(make_cfg(), 1.2)


class TestWiretapCode:
    def test_threshold_identity(self):
        code = WiretapCode(R_s=[1.0, 2.0], R_e=[0.5, 0.25])
        bt, bs, be = code.beta_t, code.beta_s, code.beta_e
        np.testing.assert_allclose(bt, be + (1.0 + be) * bs, rtol=1e-13)

    def test_rate_sum(self):
        code = WiretapCode(R_s=[1.5], R_e=[0.7])
        assert code.R_t[0] == pytest.approx(2.2)

    @given(st.floats(min_value=0.0, max_value=20.0))
    def test_rate_threshold_round_trip(self, r):
        beta = 2.0**r - 1.0
        assert math.log2(1.0 + beta) == pytest.approx(r, abs=1e-12)

    def test_from_thresholds(self):
        code = WiretapCode.from_thresholds(beta_s=[3.0], beta_e=[1.0])
        assert code.R_s[0] == pytest.approx(2.0)
        assert code.R_e[0] == pytest.approx(1.0)

    def test_negative_rate_rejected(self):
        with pytest.raises(ConfigError):
            WiretapCode(R_s=[-0.1], R_e=[0.0])


class TestOutageConstraints:
    def test_bounds(self):
        OutageConstraints(sigma=0.1, epsilon=0.1)
        for bad in (0.0, 1.0, -0.2, 1.5):
            with pytest.raises(ConfigError):
                OutageConstraints(sigma=bad, epsilon=0.1)
            with pytest.raises(ConfigError):
                OutageConstraints(sigma=0.1, epsilon=bad)


VALID_CONFIG = """\
# example deployment
lambda_s = 1.0
lambda_c = 0.01
lambda_e = 1e-4
K = 3
M_c = 8
M_e = 2
P_a_dbm = 10
P_j_dbm = 10   # same as data power
omega_dbm = 0
alpha = 4
"""


class TestLoadConfig:
    def test_valid(self, tmp_path):
        p = tmp_path / "net.cfg"
        p.write_text(VALID_CONFIG)
        cfg = load_config(p)
        assert cfg.K == 3
        assert cfg.P_a == pytest.approx(10.0)
        assert cfg.omega == pytest.approx(1.0)

    def test_interference_limited_literal(self, tmp_path):
        p = tmp_path / "net.cfg"
        p.write_text(VALID_CONFIG.replace("omega_dbm = 0", "omega = 0"))
        assert load_config(p).omega == 0.0

    def test_unknown_key(self, tmp_path):
        p = tmp_path / "net.cfg"
        p.write_text(VALID_CONFIG + "bogus = 1\n")
        with pytest.raises(ConfigError, match="unknown key"):
            load_config(p)

    def test_missing_key(self, tmp_path):
        p = tmp_path / "net.cfg"
        p.write_text("\n".join(VALID_CONFIG.splitlines()[:-1]))
        with pytest.raises(ConfigError, match="missing"):
            load_config(p)

    def test_duplicate_key(self, tmp_path):
        p = tmp_path / "net.cfg"
        p.write_text(VALID_CONFIG + "K = 4\n")
        with pytest.raises(ConfigError, match="duplicate"):
            load_config(p)

    def test_both_omega_forms(self, tmp_path):
        p = tmp_path / "net.cfg"
        p.write_text(VALID_CONFIG + "omega = 0\n")
        with pytest.raises(ConfigError, match="not both"):
            load_config(p)

    def test_nonzero_linear_omega_rejected(self, tmp_path):
        p = tmp_path / "net.cfg"
        p.write_text(VALID_CONFIG.replace("omega_dbm = 0", "omega = 2"))
        with pytest.raises(ConfigError):
            load_config(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "nope.cfg")

    def test_bad_number(self, tmp_path):
        p = tmp_path / "net.cfg"
        p.write_text(VALID_CONFIG.replace("alpha = 4", "alpha = four"))
        with pytest.raises(ConfigError, match="not a number"):
            load_config(p)
