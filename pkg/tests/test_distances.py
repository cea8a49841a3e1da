import math

import numpy as np
import pytest
from scipy import stats
from scipy.integrate import quad

from sensec.distances import (
    ordered_distance_cdf,
    ordered_distance_pdf,
    sample_ordered_distances,
)


def order_stat_pdf_oracle(r, k, K, lam):
    """Binomial order-statistics form, independent of the expanded sum."""
    F = 1.0 - math.exp(-math.pi * lam * r * r)
    f = 2.0 * math.pi * lam * r * math.exp(-math.pi * lam * r * r)
    return k * math.comb(K, k) * F ** (k - 1) * (1.0 - F) ** (K - k) * f


class TestPdf:
    def test_nearest_is_rayleigh(self):
        lam = 0.03
        for r in (0.1, 1.0, 3.0, 8.0):
            expected = 2.0 * math.pi * lam * r * math.exp(-math.pi * lam * r * r)
            assert ordered_distance_pdf(r, 1, 1, lam) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("K", [1, 2, 4, 8])
    def test_matches_order_statistics_oracle(self, K):
        lam = 0.01
        rs = np.linspace(0.01, 20.0, 40)
        for k in range(1, K + 1):
            mine = ordered_distance_pdf(rs, k, K, lam)
            ref = [order_stat_pdf_oracle(r, k, K, lam) for r in rs]
            # expanded alternating sum loses relative accuracy only where the
            # density itself is negligible
            np.testing.assert_allclose(mine, ref, rtol=1e-9, atol=1e-13)

    @pytest.mark.parametrize("K", [1, 3, 5, 8])
    def test_normalisation(self, K):
        lam = 0.02
        for k in range(1, K + 1):
            total = quad(lambda r: ordered_distance_pdf(r, k, K, lam), 0, np.inf)[0]
            assert total == pytest.approx(1.0, abs=1e-6)

    def test_mean_nearest(self):
        lam = 0.05
        mean = quad(lambda r: r * ordered_distance_pdf(r, 1, 1, lam), 0, np.inf)[0]
        assert mean == pytest.approx(1.0 / (2.0 * math.sqrt(lam)), rel=1e-8)

    def test_nonnegative(self):
        rs = np.linspace(0, 30, 200)
        vals = ordered_distance_pdf(rs, 3, 6, 0.01)
        assert np.all(vals >= -1e-15)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            ordered_distance_pdf(1.0, 0, 3, 0.1)
        with pytest.raises(ValueError):
            ordered_distance_pdf(1.0, 4, 3, 0.1)
        with pytest.raises(ValueError):
            ordered_distance_pdf(1.0, 1, 3, -0.1)
        with pytest.raises(ValueError):
            ordered_distance_pdf(-1.0, 1, 3, 0.1)


class TestCdf:
    def test_cdf_is_pdf_integral(self):
        from scipy.integrate import cumulative_simpson

        lam, K = 0.01, 5
        grid = np.linspace(0, 40, 8001)
        for k in (1, 3, 5):
            dens = ordered_distance_pdf(grid, k, K, lam)
            num = cumulative_simpson(dens, x=grid, initial=0.0)
            np.testing.assert_allclose(
                ordered_distance_cdf(grid, k, K, lam), num, atol=5e-9
            )

    def test_limits(self):
        assert ordered_distance_cdf(0.0, 2, 4, 0.1) == 0.0
        assert ordered_distance_cdf(1e4, 2, 4, 0.1) == pytest.approx(1.0)


class TestSampler:
    def test_ascending(self):
        rng = np.random.default_rng(0)
        d = sample_ordered_distances(6, 0.01, rng, size=500)
        assert d.shape == (500, 6)
        assert np.all(np.diff(d, axis=1) >= 0.0)

    def test_single_draw_shape(self):
        rng = np.random.default_rng(0)
        assert sample_ordered_distances(4, 0.01, rng).shape == (4,)

    def test_nearest_squared_is_exponential(self):
        rng = np.random.default_rng(7)
        lam = 0.02
        d = sample_ordered_distances(1, lam, rng, size=100_000)[:, 0]
        stat = stats.kstest(math.pi * lam * d**2, "expon").statistic
        assert stat < 0.01

    @pytest.mark.parametrize("k", [1, 2, 4])
    def test_marginal_matches_numeric_cdf(self, k):
        # oracle CDF by numeric integration of the ordered-distance density
        K, lam = 4, 0.01
        rng = np.random.default_rng(123)
        d = np.sort(sample_ordered_distances(K, lam, rng, size=100_000)[:, k - 1])
        grid = np.linspace(0.0, d[-1] * 1.05, 20_001)
        dens = ordered_distance_pdf(grid, k, K, lam)
        cdf_grid = np.concatenate(
            [[0.0], np.cumsum((dens[1:] + dens[:-1]) / 2 * np.diff(grid))]
        )
        F = np.interp(d, grid, cdf_grid)
        n = d.size
        ks = np.max(np.maximum(np.arange(1, n + 1) / n - F, F - np.arange(n) / n))
        assert ks < 0.01
