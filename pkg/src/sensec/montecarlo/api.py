"""Monte-Carlo estimation of the outage probabilities.

The simulator realises the model exactly as the analytics assume it: ordered
serving distances, independent Poisson interferer/jammer/eavesdropper fields
on a finite disk, actual channel-vector projection for the decoded stream,
Exp(1) effective gains for interferers, and an MMSE covariance solve per
eavesdropper.  Two backends share one counter-based stream protocol: compiled
numba kernels (default) and a pure-numpy fallback, selected with the
SENSEC_BACKEND environment variable or ``set_backend``.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass

import numpy as np

from ..network import NetworkConfig, derive_densities
from . import fallback
from .rng import MASK64

__all__ = [
    "OutageEstimate",
    "ProbeRow",
    "available_backends",
    "get_backend",
    "set_backend",
    "set_threads",
    "default_radius",
    "simulate_cop",
    "simulate_sop",
    "convergence_probe",
    "zf_weight_vector",
    "zf_signal_gain_samples",
    "projected_interferer_gain_samples",
]

_ENV_VAR = "SENSEC_BACKEND"
_backend_override: str | None = None


def _numba_kernels():
    from . import kernels  # deferred: importing numba is slow and may be absent

    return kernels


def available_backends() -> tuple[str, ...]:
    try:
        _numba_kernels()
    except ImportError:
        return ("numpy",)
    return ("numba", "numpy")


def set_backend(name: str | None) -> None:
    """Force the simulation backend ("numba" or "numpy"); None re-enables auto."""
    global _backend_override
    if name is not None and name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    _backend_override = name


def get_backend() -> str:
    if _backend_override is not None:
        return _backend_override
    env = os.environ.get(_ENV_VAR, "").strip().lower()
    if env in ("numba", "numpy"):
        return env
    if env:
        raise ValueError(f"{_ENV_VAR} must be 'numba' or 'numpy', got {env!r}")
    return "numba" if "numba" in available_backends() else "numpy"


def _impl(backend: str | None):
    name = backend if backend is not None else get_backend()
    if name == "numba":
        return name, _numba_kernels()
    if name == "numpy":
        return name, fallback
    raise ValueError(f"unknown backend {name!r}")


def set_threads(n: int) -> None:
    """Limit the compiled backend's worker threads (numpy backend: no-op)."""
    if n < 1:
        raise ValueError("thread count must be >= 1")
    try:
        import numba
    except ImportError:
        return
    numba.set_num_threads(n)


@dataclass(frozen=True)
class OutageEstimate:
    """Monte-Carlo outage probability with its binomial standard error."""

    p_hat: float
    stderr: float
    trials: int
    seed: int
    successes: int
    r_max: float
    backend: str
    notes: tuple[str, ...] = ()


def default_radius(cfg: NetworkConfig) -> float:
    """Simulation disk radius: 30 mean fusion-center spacings."""
    return 30.0 / math.sqrt(math.pi * cfg.lambda_c)


def _estimate(outcomes: np.ndarray, seed: int, r_max: float, backend: str, notes) -> OutageEstimate:
    n = outcomes.size
    s = int(outcomes.sum())
    p = s / n
    return OutageEstimate(
        p_hat=p,
        stderr=math.sqrt(p * (1.0 - p) / n),
        trials=n,
        seed=seed,
        successes=s,
        r_max=r_max,
        backend=backend,
        notes=tuple(notes),
    )


def _check_common(trials: int, r_max: float | None, cfg: NetworkConfig) -> float:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    r = default_radius(cfg) if r_max is None else float(r_max)
    if r <= 0:
        raise ValueError("r_max must be > 0")
    return r


def simulate_cop(
    cfg: NetworkConfig,
    rho: float,
    k: int,
    beta_t: float,
    trials: int,
    seed: int = 0,
    r_max: float | None = None,
    backend: str | None = None,
) -> OutageEstimate:
    """Estimate the connection outage probability of stream k.

    Per trial: ordered serving distances by inverse transform, K channel
    vectors with the decoded stream's gain computed by explicit projection,
    interferer and jammer disk fields with Exp(1) effective gains, then the
    SINR test against beta_t.
    """
    if not 1 <= k <= cfg.K:
        raise ValueError(f"stream index k must lie in [1, {cfg.K}], got {k}")
    if beta_t < 0:
        raise ValueError("beta_t must be >= 0")
    r = _check_common(trials, r_max, cfg)
    dd = derive_densities(cfg, rho)
    area = math.pi * r * r
    notes = []
    tail = (
        2.0
        * math.pi
        * (dd.lambda_a * cfg.P_a + dd.lambda_j * cfg.P_j)
        * r ** (2.0 - cfg.alpha)
        / (cfg.alpha - 2.0)
    )
    signal_scale = cfg.P_a * (math.pi * cfg.lambda_c / cfg.K) ** (cfg.alpha / 2.0)
    if tail > 1e-3 * (cfg.omega + signal_scale):
        notes.append(
            f"r_max={r:g} may truncate relevant interference "
            f"(mean tail {tail:.3g} mW); check with convergence_probe"
        )
    name, impl = _impl(backend)
    out = impl.cop_outcomes(
        _seed64(name, seed),
        trials,
        cfg.K,
        k,
        cfg.M_c,
        math.pi * cfg.lambda_c,
        dd.lambda_a * area,
        dd.lambda_j * area,
        r * r,
        cfg.P_a,
        cfg.P_j,
        cfg.alpha,
        cfg.omega,
        beta_t,
    )
    return _estimate(out, seed, r, name, notes)


def _eve_cut_radius(cfg: NetworkConfig, beta_e: float) -> float:
    """Radius beyond which an eavesdropper cannot beat beta_e through the noise.

    The MMSE quadratic form is at most ||h||^2/omega with ||h||^2 ~
    Gamma(M_e, 1), so success at distance r needs a gamma tail beyond
    omega*beta_e*r^alpha/P_a; the threshold T makes that tail < ~1e-20.
    """
    if cfg.omega == 0.0 or beta_e == 0.0:
        return math.inf
    T = 60.0 + 10.0 * cfg.M_e
    return (T * cfg.P_a / (cfg.omega * beta_e)) ** (1.0 / cfg.alpha)


def simulate_sop(
    cfg: NetworkConfig,
    rho: float,
    beta_e: float,
    trials: int,
    seed: int = 0,
    r_max: float | None = None,
    jammer_mode: str = "per-eavesdropper",
    backend: str | None = None,
) -> OutageEstimate:
    """Estimate the secrecy outage probability (best eavesdropper vs beta_e).

    ``jammer_mode="per-eavesdropper"`` draws an independent jammer field
    around each eavesdropper, matching the factorised expectation behind the
    closed form; ``"common-field"`` shares one jammer realisation per trial
    (physically faithful variant).  With receiver noise present, eavesdroppers
    beyond a provably irrelevant radius are skipped.
    """
    if jammer_mode not in ("per-eavesdropper", "common-field"):
        raise ValueError(f"unknown jammer_mode {jammer_mode!r}")
    if beta_e <= 0:
        raise ValueError("beta_e must be > 0")
    r = _check_common(trials, r_max, cfg)
    dd = derive_densities(cfg, rho)
    notes = []
    r_eve = min(r, _eve_cut_radius(cfg, beta_e))
    if cfg.omega == 0.0:
        notes.append(
            "omega = 0: no noise-based eavesdropper cutoff applies; the "
            "estimate depends on r_max, verify with convergence_probe"
        )
    mu_e = cfg.lambda_e * math.pi * r_eve * r_eve
    mu_j = dd.lambda_j * math.pi * r * r
    name, impl = _impl(backend)
    fn = impl.sop_outcomes_pereve if jammer_mode == "per-eavesdropper" else impl.sop_outcomes_common
    out = fn(
        _seed64(name, seed),
        trials,
        cfg.M_e,
        mu_e,
        r_eve * r_eve,
        mu_j,
        r * r,
        cfg.P_a,
        cfg.P_j,
        cfg.alpha,
        cfg.omega,
        beta_e,
    )
    return _estimate(out, seed, r, name, notes)


@dataclass(frozen=True)
class ProbeRow:
    r_max: float
    p_hat: float
    stderr: float
    stable: bool  # within one combined stderr of the previous radius


def convergence_probe(
    cfg: NetworkConfig,
    rho: float,
    quantity: str,
    r_max_list,
    *,
    k: int = 1,
    beta: float = 1.0,
    trials: int = 20000,
    seed: int = 0,
    jammer_mode: str = "per-eavesdropper",
    backend: str | None = None,
) -> list[ProbeRow]:
    """Re-estimate one outage quantity at growing disk radii (same seed).

    Marks a radius as stable once the estimate moved by less than one
    combined standard error from the previous radius.
    """
    radii = [float(r) for r in r_max_list]
    if len(radii) < 2:
        raise ValueError("need at least two radii")
    if sorted(radii) != radii:
        raise ValueError("radii must be ascending")
    if quantity not in ("cop", "sop"):
        raise ValueError(f"quantity must be 'cop' or 'sop', got {quantity!r}")
    rows: list[ProbeRow] = []
    prev: OutageEstimate | None = None
    for r in radii:
        if quantity == "cop":
            est = simulate_cop(cfg, rho, k, beta, trials, seed, r_max=r, backend=backend)
        else:
            est = simulate_sop(
                cfg, rho, beta, trials, seed, r_max=r, jammer_mode=jammer_mode, backend=backend
            )
        stable = False
        if prev is not None:
            comb = math.hypot(est.stderr, prev.stderr)
            stable = abs(est.p_hat - prev.p_hat) < max(comb, 1.0 / trials)
        rows.append(ProbeRow(r_max=r, p_hat=est.p_hat, stderr=est.stderr, stable=stable))
        prev = est
    return rows


def _seed64(backend_name: str, seed: int):
    s = seed & MASK64
    return np.uint64(s) if backend_name == "numba" else s


def zf_weight_vector(channels: np.ndarray, k: int) -> np.ndarray:
    """Explicit ZF-MRC weight vector for stream k given the K channel vectors.

    Unit vector orthogonal to every later (not yet decoded) channel, aligned
    with the projection of channel k onto that orthogonal complement:
    w = conj(U) (U^T conj(h_k)) / ||U^T conj(h_k)|| with U an orthonormal
    basis of the complement.
    """
    ch = np.asarray(channels)
    K, M = ch.shape
    if not 1 <= k <= K:
        raise ValueError(f"k must lie in [1, {K}]")
    later = ch[k:].T  # columns are the later channel vectors
    m = later.shape[1]
    if m:
        q, _ = np.linalg.qr(np.ascontiguousarray(later), mode="complete")
        U = q[:, m:]
    else:
        U = np.eye(M, dtype=np.complex128)
    v = U.T @ ch[k - 1].conj()
    nv = np.linalg.norm(v)
    if nv == 0.0:
        raise ValueError("channel k lies entirely in the span of the later channels")
    return U.conj() @ (v / nv)


def zf_signal_gain_samples(
    M_c: int, K: int, k: int, n: int, seed: int = 0, backend: str | None = None
) -> np.ndarray:
    """n draws of the post-projection signal gain (should be Gamma(M_k, 1))."""
    if not 1 <= k <= K or K >= M_c:
        raise ValueError("need 1 <= k <= K < M_c")
    name, impl = _impl(backend)
    return impl.zf_gain_batch(_seed64(name, seed), n, K, M_c, k)


def projected_interferer_gain_samples(
    M_c: int, K: int, k: int, n: int, seed: int = 0
) -> np.ndarray:
    """n draws of |w^T h|^2 for h independent of the weight (should be Exp(1))."""
    if not 1 <= k <= K or K >= M_c:
        raise ValueError("need 1 <= k <= K < M_c")
    rng = np.random.default_rng(seed)
    ch = (rng.standard_normal((n, K, M_c)) + 1j * rng.standard_normal((n, K, M_c))) / math.sqrt(2)
    hx = (rng.standard_normal((n, M_c)) + 1j * rng.standard_normal((n, M_c))) / math.sqrt(2)
    out = np.empty(n)
    for i in range(n):
        w = zf_weight_vector(ch[i], k)
        out[i] = abs(w @ hx[i]) ** 2
    return out
