"""Numba-compiled trial kernels (the hot path of the simulator).

Mirrors the stream protocol of ``rng.py`` in uint64 arithmetic; every trial
reads only its own (seed, trial, lane) streams and writes one outcome byte,
so the parallel loop is reduction-free and results do not depend on the
number of threads.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit, prange

U64 = np.uint64
_GAMMA = U64(0x9E3779B97F4A7C15)
_MIX1 = U64(0xBF58476D1CE4E5B9)
_MIX2 = U64(0x94D049BB133111EB)
_S30 = U64(30)
_S27 = U64(27)
_S31 = U64(31)
_S11 = U64(11)
_ONE = U64(1)
_U2F = 2.0**-53
_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_TWO_PI = 2.0 * math.pi


@njit(cache=True)
def _fmix(z):
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


@njit(cache=True)
def _stream_key(seed, trial, lane):
    k = _fmix(seed + _GAMMA)
    k = _fmix(k ^ (trial * _MIX1))
    return _fmix(k ^ (lane * _MIX2))


@njit(cache=True)
def _unit(key):
    key = key + _GAMMA
    z = _fmix(key)
    return (np.float64((z >> _S11) + _ONE)) * _U2F, key


@njit(cache=True)
def _poisson(key, lam):
    if lam <= 0.0:
        return 0, key
    if lam < 10.0:
        enlam = math.exp(-lam)
        x = 0
        prod = 1.0
        while True:
            u, key = _unit(key)
            prod *= u
            if prod > enlam:
                x += 1
            else:
                return x, key
    slam = math.sqrt(lam)
    loglam = math.log(lam)
    b = 0.931 + 2.53 * slam
    a = -0.059 + 0.02483 * b
    invalpha = 1.1239 + 1.1328 / (b - 3.4)
    vr = 0.9277 - 3.6224 / (b - 2.0)
    while True:
        u, key = _unit(key)
        v, key = _unit(key)
        U = u - 0.5
        us = 0.5 - abs(U)
        if us == 0.0:
            continue
        k = math.floor((2.0 * a / us + b) * U + lam + 0.43)
        if us >= 0.07 and v <= vr:
            return int(k), key
        if k < 0.0 or (us < 0.013 and v > us):
            continue
        if math.log(v) + math.log(invalpha) - math.log(a / (us * us) + b) <= (
            k * loglam - lam - math.lgamma(k + 1.0)
        ):
            return int(k), key


@njit(cache=True)
def _draw_cn_matrix(key, rows, cols):
    """rows x cols matrix of CN(0,1) entries, drawn row-major in Box-Muller pairs."""
    out = np.empty((rows, cols), np.complex128)
    for i in range(rows):
        for a in range(cols):
            u1, key = _unit(key)
            u2, key = _unit(key)
            r = math.sqrt(-2.0 * math.log(u1))
            ang = _TWO_PI * u2
            out[i, a] = complex(
                r * math.cos(ang) * _INV_SQRT2, r * math.sin(ang) * _INV_SQRT2
            )
    return out, key


@njit(cache=True)
def _zf_gain(ch, k1):
    """Squared norm of channel row k1-1 after projecting out rows k1..K-1.

    Gram-Schmidt over the later (farther, not yet decoded) channel vectors;
    the residual power is the post-projection signal gain of stream k1.
    """
    K, M = ch.shape
    g = 0.0
    for a in range(M):
        g += ch[k1 - 1, a].real ** 2 + ch[k1 - 1, a].imag ** 2
    m = K - k1
    if m == 0:
        return g
    Q = np.empty((m, M), np.complex128)
    r = 0
    for j in range(m):
        for a in range(M):
            Q[r, a] = ch[k1 + j, a]
        for b in range(r):
            c = complex(0.0, 0.0)
            for a in range(M):
                c += Q[b, a].conjugate() * Q[r, a]
            for a in range(M):
                Q[r, a] -= c * Q[b, a]
        nv = 0.0
        for a in range(M):
            nv += Q[r, a].real ** 2 + Q[r, a].imag ** 2
        if nv > 1e-24:
            inv = 1.0 / math.sqrt(nv)
            for a in range(M):
                Q[r, a] *= inv
            r += 1
    for b in range(r):
        c = complex(0.0, 0.0)
        for a in range(M):
            c += Q[b, a].conjugate() * ch[k1 - 1, a]
        g -= c.real**2 + c.imag**2
    return g if g > 0.0 else 0.0


@njit(cache=True)
def _field_power(key, n, P, r2max, alpha_is4, nha):
    """Aggregate received power of n disk points with Exp(1) effective gains."""
    total = 0.0
    for _ in range(n):
        u1, key = _unit(key)
        u2, key = _unit(key)
        d2 = r2max * u1
        w = P / (d2 * d2) if alpha_is4 else P * d2**nha
        total += w * (-math.log(u2))
    return total, key


@njit(cache=True)
def _cop_trial(seed, t, K, k1, M_c, pi_lc, mu_a, mu_j, r2max, P_a, P_j, alpha, omega, beta_t):
    key0 = _stream_key(seed, t, U64(0))
    n_a, key0 = _poisson(key0, mu_a)
    n_j, key0 = _poisson(key0, mu_j)

    key1 = _stream_key(seed, t, U64(1))
    L2 = np.empty(K)
    for i in range(K):
        u, key1 = _unit(key1)
        L2[i] = -math.log(u) / pi_lc
    L2.sort()

    ch, _ = _draw_cn_matrix(_stream_key(seed, t, U64(2)), K, M_c)
    g = _zf_gain(ch, k1)

    alpha_is4 = alpha == 4.0
    nha = -alpha / 2.0
    Ia, _ = _field_power(_stream_key(seed, t, U64(3)), n_a, P_a, r2max, alpha_is4, nha)
    Ij, _ = _field_power(_stream_key(seed, t, U64(4)), n_j, P_j, r2max, alpha_is4, nha)

    l2 = L2[k1 - 1]
    sig = P_a * g / (l2 * l2) if alpha_is4 else P_a * g * l2**nha
    sinr = sig / (Ia + Ij + omega)
    return np.uint8(1) if sinr < beta_t else np.uint8(0)


@njit(cache=True, parallel=True)
def cop_outcomes(seed, trials, K, k1, M_c, pi_lc, mu_a, mu_j, r2max, P_a, P_j, alpha, omega, beta_t):
    out = np.empty(trials, np.uint8)
    for t in prange(trials):
        out[t] = _cop_trial(
            seed, U64(t), K, k1, M_c, pi_lc, mu_a, mu_j, r2max, P_a, P_j, alpha, omega, beta_t
        )
    return out


@njit(cache=True)
def _mmse_sinr(A, h, M_e, P_a, d2e, alpha_is4, nha):
    y = np.linalg.solve(A, h.reshape(M_e, 1))
    q = 0.0
    for a in range(M_e):
        q += (h[a].conjugate() * y[a, 0]).real
    return P_a * q / (d2e * d2e) if alpha_is4 else P_a * q * d2e**nha


@njit(cache=True)
def _sop_trial_pereve(seed, t, M_e, mu_e, r2e, mu_j, r2j, P_a, P_j, alpha, omega, beta_e):
    key0 = _stream_key(seed, t, U64(0))
    n_e, key0 = _poisson(key0, mu_e)
    if n_e == 0:
        return np.uint8(0)
    key1 = _stream_key(seed, t, U64(1))
    alpha_is4 = alpha == 4.0
    nha = -alpha / 2.0
    for i in range(n_e):
        u, key1 = _unit(key1)
        d2e = r2e * u
        hmat, _ = _draw_cn_matrix(_stream_key(seed, t, U64(16 + 4 * i)), 1, M_e)
        h = hmat[0]
        n_ji, _ = _poisson(_stream_key(seed, t, U64(17 + 4 * i)), mu_j)
        if omega == 0.0 and n_ji < M_e:
            return np.uint8(1)  # rank-deficient covariance: MMSE SINR unbounded
        A = np.zeros((M_e, M_e), np.complex128)
        for a in range(M_e):
            A[a, a] = omega
        kpos = _stream_key(seed, t, U64(18 + 4 * i))
        kg = _stream_key(seed, t, U64(19 + 4 * i))
        gv = np.empty(M_e, np.complex128)
        for _j in range(n_ji):
            u1, kpos = _unit(kpos)
            d2 = r2j * u1
            w = P_j / (d2 * d2) if alpha_is4 else P_j * d2**nha
            for a in range(M_e):
                ua, kg = _unit(kg)
                ub, kg = _unit(kg)
                r = math.sqrt(-2.0 * math.log(ua))
                ang = _TWO_PI * ub
                gv[a] = complex(r * math.cos(ang) * _INV_SQRT2, r * math.sin(ang) * _INV_SQRT2)
            for a in range(M_e):
                for b in range(M_e):
                    A[a, b] += w * gv[a] * gv[b].conjugate()
        if _mmse_sinr(A, h, M_e, P_a, d2e, alpha_is4, nha) > beta_e:
            return np.uint8(1)
    return np.uint8(0)


@njit(cache=True, parallel=True)
def sop_outcomes_pereve(seed, trials, M_e, mu_e, r2e, mu_j, r2j, P_a, P_j, alpha, omega, beta_e):
    out = np.empty(trials, np.uint8)
    for t in prange(trials):
        out[t] = _sop_trial_pereve(
            seed, U64(t), M_e, mu_e, r2e, mu_j, r2j, P_a, P_j, alpha, omega, beta_e
        )
    return out


@njit(cache=True)
def _sop_trial_common(seed, t, M_e, mu_e, r2e, mu_j, r2j, P_a, P_j, alpha, omega, beta_e):
    key0 = _stream_key(seed, t, U64(0))
    n_e, key0 = _poisson(key0, mu_e)
    if n_e == 0:
        return np.uint8(0)
    n_j, key0 = _poisson(key0, mu_j)
    if omega == 0.0 and n_j < M_e:
        return np.uint8(1)
    alpha_is4 = alpha == 4.0
    nha = -alpha / 2.0

    key1 = _stream_key(seed, t, U64(1))
    ex = np.empty(n_e)
    ey = np.empty(n_e)
    e_d2 = np.empty(n_e)
    for i in range(n_e):
        u1, key1 = _unit(key1)
        u2, key1 = _unit(key1)
        r = math.sqrt(r2e * u1)
        ang = _TWO_PI * u2
        ex[i] = r * math.cos(ang)
        ey[i] = r * math.sin(ang)
        e_d2[i] = r * r

    key2 = _stream_key(seed, t, U64(2))
    jx = np.empty(n_j)
    jy = np.empty(n_j)
    for j in range(n_j):
        u1, key2 = _unit(key2)
        u2, key2 = _unit(key2)
        r = math.sqrt(r2j * u1)
        ang = _TWO_PI * u2
        jx[j] = r * math.cos(ang)
        jy[j] = r * math.sin(ang)

    gv = np.empty(M_e, np.complex128)
    for i in range(n_e):
        hmat, _ = _draw_cn_matrix(_stream_key(seed, t, U64(16 + 2 * i)), 1, M_e)
        h = hmat[0]
        kg = _stream_key(seed, t, U64(17 + 2 * i))
        A = np.zeros((M_e, M_e), np.complex128)
        for a in range(M_e):
            A[a, a] = omega
        for j in range(n_j):
            dx = ex[i] - jx[j]
            dy = ey[i] - jy[j]
            d2 = dx * dx + dy * dy
            w = P_j / (d2 * d2) if alpha_is4 else P_j * d2**nha
            for a in range(M_e):
                ua, kg = _unit(kg)
                ub, kg = _unit(kg)
                r = math.sqrt(-2.0 * math.log(ua))
                ang = _TWO_PI * ub
                gv[a] = complex(r * math.cos(ang) * _INV_SQRT2, r * math.sin(ang) * _INV_SQRT2)
            for a in range(M_e):
                for b in range(M_e):
                    A[a, b] += w * gv[a] * gv[b].conjugate()
        if _mmse_sinr(A, h, M_e, P_a, e_d2[i], alpha_is4, nha) > beta_e:
            return np.uint8(1)
    return np.uint8(0)


@njit(cache=True, parallel=True)
def sop_outcomes_common(seed, trials, M_e, mu_e, r2e, mu_j, r2j, P_a, P_j, alpha, omega, beta_e):
    out = np.empty(trials, np.uint8)
    for t in prange(trials):
        out[t] = _sop_trial_common(
            seed, U64(t), M_e, mu_e, r2e, mu_j, r2j, P_a, P_j, alpha, omega, beta_e
        )
    return out


@njit(cache=True)
def zf_gain_batch(seed, n, K, M_c, k1):
    """n independent post-projection signal gains (distribution checks)."""
    out = np.empty(n)
    for t in range(n):
        ch, _ = _draw_cn_matrix(_stream_key(seed, U64(t), U64(2)), K, M_c)
        out[t] = _zf_gain(ch, k1)
    return out


@njit(cache=True)
def unit_sequence(seed, trial, lane, n):
    """First n uniforms of a stream (cross-backend RNG identity test)."""
    out = np.empty(n)
    key = _stream_key(U64(seed), U64(trial), U64(lane))
    for i in range(n):
        out[i], key = _unit(key)
    return out


@njit(cache=True)
def poisson_sequence(seed, lane, lam, n):
    """n Poisson draws from one stream (distribution/agreement tests)."""
    out = np.empty(n, np.int64)
    key = _stream_key(U64(seed), U64(0), U64(lane))
    for i in range(n):
        out[i], key = _poisson(key, lam)
    return out
