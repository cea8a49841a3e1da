"""Pure-numpy simulation backend.

Same trial layout and random streams as the numba kernels, with the inner
field sums vectorised per trial.  Roughly an order of magnitude slower than
the compiled path; selected with SENSEC_BACKEND=numpy or when numba is
unavailable.
"""

from __future__ import annotations

import math

import numpy as np

from .rng import (
    INV_SQRT2,
    TWO_PI,
    complex_gaussian_block,
    next_unit,
    poisson_draw,
    stream_key,
    unit_block,
)


def _zf_gain_np(ch: np.ndarray, k1: int) -> float:
    h = ch[k1 - 1]
    g = float(np.sum(h.real**2 + h.imag**2))
    later = ch[k1:]
    if later.shape[0] == 0:
        return g
    q, _ = np.linalg.qr(later.T)  # orthonormal basis of span(later channel vectors)
    coef = q.conj().T @ h
    g -= float(np.sum(coef.real**2 + coef.imag**2))
    return max(g, 0.0)


def _field_power(key: int, n: int, P: float, r2max: float, nha: float) -> float:
    if n == 0:
        return 0.0
    u = unit_block(key, 2 * n)
    d2 = r2max * u[0::2]
    return float(np.sum(P * d2**nha * (-np.log(u[1::2]))))


def cop_outcomes(seed, trials, K, k1, M_c, pi_lc, mu_a, mu_j, r2max, P_a, P_j, alpha, omega, beta_t):
    nha = -alpha / 2.0
    out = np.empty(trials, np.uint8)
    for t in range(trials):
        key0 = stream_key(seed, t, 0)
        n_a, key0 = poisson_draw(key0, mu_a)
        n_j, key0 = poisson_draw(key0, mu_j)

        u = unit_block(stream_key(seed, t, 1), K)
        L2 = np.sort(-np.log(u) / pi_lc)

        ch = complex_gaussian_block(stream_key(seed, t, 2), K * M_c).reshape(K, M_c)
        g = _zf_gain_np(ch, k1)

        Ia = _field_power(stream_key(seed, t, 3), n_a, P_a, r2max, nha)
        Ij = _field_power(stream_key(seed, t, 4), n_j, P_j, r2max, nha)

        sinr = P_a * g * L2[k1 - 1] ** (nha) / (Ia + Ij + omega)
        out[t] = 1 if sinr < beta_t else 0
    return out


def _jammer_covariance(kpos, kg, n_j, M_e, P_j, r2j, nha, omega):
    A = omega * np.eye(M_e, dtype=np.complex128)
    if n_j == 0:
        return A
    w = P_j * (r2j * unit_block(kpos, n_j)) ** nha
    G = complex_gaussian_block(kg, n_j * M_e).reshape(n_j, M_e)
    A += (G.conj().T * w) @ G
    return A


def _mmse_sinr(A, h, P_a, d2e, nha):
    q = float((h.conj() @ np.linalg.solve(A, h)).real)
    return P_a * q * d2e**nha


def sop_outcomes_pereve(seed, trials, M_e, mu_e, r2e, mu_j, r2j, P_a, P_j, alpha, omega, beta_e):
    nha = -alpha / 2.0
    out = np.empty(trials, np.uint8)
    for t in range(trials):
        key0 = stream_key(seed, t, 0)
        n_e, key0 = poisson_draw(key0, mu_e)
        hit = 0
        if n_e:
            key1 = stream_key(seed, t, 1)
            for i in range(n_e):
                u, key1 = next_unit(key1)
                d2e = r2e * u
                h = complex_gaussian_block(stream_key(seed, t, 16 + 4 * i), M_e)
                n_ji, _ = poisson_draw(stream_key(seed, t, 17 + 4 * i), mu_j)
                if omega == 0.0 and n_ji < M_e:
                    hit = 1
                    break
                A = _jammer_covariance(
                    stream_key(seed, t, 18 + 4 * i),
                    stream_key(seed, t, 19 + 4 * i),
                    n_ji, M_e, P_j, r2j, nha, omega,
                )
                if _mmse_sinr(A, h, P_a, d2e, nha) > beta_e:
                    hit = 1
                    break
        out[t] = hit
    return out


def sop_outcomes_common(seed, trials, M_e, mu_e, r2e, mu_j, r2j, P_a, P_j, alpha, omega, beta_e):
    nha = -alpha / 2.0
    out = np.empty(trials, np.uint8)
    for t in range(trials):
        key0 = stream_key(seed, t, 0)
        n_e, key0 = poisson_draw(key0, mu_e)
        if n_e == 0:
            out[t] = 0
            continue
        n_j, key0 = poisson_draw(key0, mu_j)
        if omega == 0.0 and n_j < M_e:
            out[t] = 1
            continue
        ue = unit_block(stream_key(seed, t, 1), 2 * n_e)
        er = np.sqrt(r2e * ue[0::2])
        eang = TWO_PI * ue[1::2]
        ex, ey = er * np.cos(eang), er * np.sin(eang)
        uj = unit_block(stream_key(seed, t, 2), 2 * n_j)
        jr = np.sqrt(r2j * uj[0::2])
        jang = TWO_PI * uj[1::2]
        jx, jy = jr * np.cos(jang), jr * np.sin(jang)

        hit = 0
        for i in range(n_e):
            h = complex_gaussian_block(stream_key(seed, t, 16 + 2 * i), M_e)
            d2 = (ex[i] - jx) ** 2 + (ey[i] - jy) ** 2
            w = P_j * d2**nha
            G = complex_gaussian_block(stream_key(seed, t, 17 + 2 * i), n_j * M_e).reshape(n_j, M_e)
            A = omega * np.eye(M_e, dtype=np.complex128) + (G.conj().T * w) @ G
            if _mmse_sinr(A, h, P_a, er[i] ** 2, nha) > beta_e:
                hit = 1
                break
        out[t] = hit
    return out


def zf_gain_batch(seed, n, K, M_c, k1):
    out = np.empty(n)
    for t in range(n):
        ch = complex_gaussian_block(stream_key(seed, t, 2), K * M_c).reshape(K, M_c)
        out[t] = _zf_gain_np(ch, k1)
    return out


def unit_sequence(seed, trial, lane, n):
    return unit_block(stream_key(seed, trial, lane), n)


def poisson_sequence(seed, lane, lam, n):
    out = np.empty(n, np.int64)
    key = stream_key(seed, 0, lane)
    for i in range(n):
        out[i], key = poisson_draw(key, lam)
    return out
