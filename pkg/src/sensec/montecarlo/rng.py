"""Counter-based random streams shared by both simulation backends.

Every (seed, trial, lane) triple names an independent splitmix64 stream, so
trials can run in any order or in parallel and still consume exactly the same
numbers.  The scalar path works on Python ints (masked to 64 bits); the block
path produces the identical sequence with vectorised numpy, which the
pure-numpy backend uses for bulk draws.  The numba kernels carry their own
uint64 copy of the same arithmetic; a unit test pins all three to the same
stream.
"""

from __future__ import annotations

import math

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
INV_SQRT2 = 1.0 / math.sqrt(2.0)
TWO_PI = 2.0 * math.pi
_U2F = 2.0**-53


def fmix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def stream_key(seed: int, trial: int, lane: int) -> int:
    """64-bit state of the (seed, trial, lane) stream."""
    k = fmix64((seed + GAMMA) & MASK64)
    k = fmix64(k ^ ((trial * MIX1) & MASK64))
    return fmix64(k ^ ((lane * MIX2) & MASK64))


def next_unit(key: int) -> tuple[float, int]:
    """One uniform draw in (0, 1] plus the advanced stream state."""
    key = (key + GAMMA) & MASK64
    return (float(fmix64(key) >> 11) + 1.0) * _U2F, key


def unit_block(key: int, n: int) -> np.ndarray:
    """The next n uniforms of the stream as one vectorised block.

    Identical values, in order, to n successive ``next_unit`` calls.
    """
    idx = np.arange(1, n + 1, dtype=np.uint64)
    z = np.uint64(key) + np.uint64(GAMMA) * idx
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    z = z ^ (z >> np.uint64(31))
    return (((z >> np.uint64(11)) + np.uint64(1)).astype(np.float64)) * _U2F


def normal_pairs(u: np.ndarray) -> np.ndarray:
    """Box-Muller transform of an even-length uniform block (interleaved pairs)."""
    r = np.sqrt(-2.0 * np.log(u[0::2]))
    ang = TWO_PI * u[1::2]
    out = np.empty_like(u)
    out[0::2] = r * np.cos(ang)
    out[1::2] = r * np.sin(ang)
    return out


def complex_gaussian_block(key: int, n: int) -> np.ndarray:
    """n unit-variance circularly symmetric complex Gaussians from the stream."""
    z = normal_pairs(unit_block(key, 2 * n))
    return (z[0::2] + 1j * z[1::2]) * INV_SQRT2


def poisson_draw(key: int, lam: float) -> tuple[int, int]:
    """Poisson sample from the stream (Knuth product below 10, PTRS above).

    Returns (count, advanced key).  The variate consumes a data-dependent
    number of uniforms, which is why counts get their own lane in the trial
    layout.
    """
    if lam <= 0.0:
        return 0, key
    if lam < 10.0:
        enlam = math.exp(-lam)
        x = 0
        prod = 1.0
        while True:
            u, key = next_unit(key)
            prod *= u
            if prod > enlam:
                x += 1
            else:
                return x, key
    # transformed rejection with squeeze (Hormann's PTRS)
    slam = math.sqrt(lam)
    loglam = math.log(lam)
    b = 0.931 + 2.53 * slam
    a = -0.059 + 0.02483 * b
    invalpha = 1.1239 + 1.1328 / (b - 3.4)
    vr = 0.9277 - 3.6224 / (b - 2.0)
    while True:
        u, key = next_unit(key)
        v, key = next_unit(key)
        U = u - 0.5
        us = 0.5 - abs(U)
        if us == 0.0:
            continue
        k = math.floor((2.0 * a / us + b) * U + lam + 0.43)
        if us >= 0.07 and v <= vr:
            return int(k), key
        if k < 0 or (us < 0.013 and v > us):
            continue
        if math.log(v) + math.log(invalpha) - math.log(a / (us * us) + b) <= (
            k * loglam - lam - math.lgamma(k + 1.0)
        ):
            return int(k), key
