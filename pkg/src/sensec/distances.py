"""Order statistics of the distances from a node to its K scheduled sensors.

A sensor associates with its nearest fusion center, so the unordered link
distance L has density f(r) = 2 pi lambda_c r exp(-pi lambda_c r^2).  Sorting
K independent such links ascending gives the serving distances of the K
decoding streams; the k-th marginal is what the analytics integrate over and
what the Monte-Carlo sampler must reproduce.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "ordered_distance_pdf",
    "ordered_distance_cdf",
    "sample_ordered_distances",
]


def _check_args(k: int, K: int, lambda_c: float) -> None:
    if K < 1 or k < 1 or k > K:
        raise ValueError(f"need 1 <= k <= K, got k={k}, K={K}")
    if lambda_c <= 0:
        raise ValueError(f"lambda_c must be > 0, got {lambda_c}")


def ordered_distance_pdf(r, k: int, K: int, lambda_c: float):
    """Density of the k-th smallest of K i.i.d. nearest-neighbour distances.

    f(r) = 2 k C(K,k) sum_l C(k-1,l) (-1)^l pi lambda_c r exp(-pi lambda_c r^2 (K-k+l+1)).
    Accepts scalars or arrays.
    """
    _check_args(k, K, lambda_c)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("distances must be >= 0")
    x = math.pi * lambda_c * r * r
    acc = np.zeros_like(r)
    for l in range(k):
        acc += math.comb(k - 1, l) * (-1) ** l * np.exp(-x * (K - k + l + 1))
    out = 2.0 * k * math.comb(K, k) * math.pi * lambda_c * r * acc
    return float(out) if out.ndim == 0 else out


def ordered_distance_cdf(r, k: int, K: int, lambda_c: float):
    """CDF of the k-th ordered distance via the binomial order-statistics form.

    P{L_(k) <= r} = sum_{j=k}^{K} C(K,j) F(r)^j (1-F(r))^(K-j) with
    F(r) = 1 - exp(-pi lambda_c r^2).  Independent route from the pdf above.
    """
    _check_args(k, K, lambda_c)
    r = np.asarray(r, dtype=float)
    F = -np.expm1(-math.pi * lambda_c * r * r)
    out = np.zeros_like(F)
    for j in range(k, K + 1):
        out += math.comb(K, j) * F**j * (1.0 - F) ** (K - j)
    return float(out) if out.ndim == 0 else out


def sample_ordered_distances(K: int, lambda_c: float, rng: np.random.Generator, size=None):
    """Draw the K ascending serving distances by inverse transform.

    Each unordered distance is sqrt(-ln(1-U) / (pi lambda_c)); the K draws are
    sorted ascending.  With ``size=None`` returns one (K,) vector, otherwise a
    (size, K) array of independent replicates.
    """
    _check_args(1, K, lambda_c)
    shape = (K,) if size is None else (size, K)
    u = rng.random(shape)
    d = np.sqrt(-np.log1p(-u) / (math.pi * lambda_c))
    d.sort(axis=-1)
    return d
