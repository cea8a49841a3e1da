"""Closed-form connection and secrecy outage probabilities.

Connection outage is the event that the fusion center's post-projection SINR
for stream k falls below the codeword threshold beta_t; secrecy outage is the
event that the best eavesdropper's MMSE SINR exceeds the redundancy threshold
beta_e.  Each probability comes in a general (noisy) form built on the Omega
tail integral, an interference-limited closed form, and (for connection
outage) a low-outage expansion that the rate designs invert.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .network import NetworkConfig, derive_densities
from .specfun import (
    OmegaParams,
    _omega_value,
    lambda_coeff,
    omega_closed_form_alpha4,
    phi_const,
    upsilon,
    xi_coeff,
)

__all__ = [
    "CopCoefficients",
    "cop_coefficients",
    "cop_general",
    "cop_interference_limited",
    "cop_low_approx",
    "sop_general",
    "sop_interference_limited",
]

_CLAMP_TOL = 1e-8


def _clamp_probability(x: float, label: str) -> float:
    if x < -_CLAMP_TOL or x > 1.0 + _CLAMP_TOL:
        warnings.warn(
            f"{label} = {x!r} lies outside [0, 1] by more than {_CLAMP_TOL}; clamping",
            stacklevel=3,
        )
    return min(max(x, 0.0), 1.0)


def _upsilon_table(pmax: int, delta: float) -> list[list[float]]:
    # ups[p][n] for 1 <= n <= p < pmax; rows p=0 and entries n=0 are padding
    return [[0.0] + [upsilon(p, n, delta) for n in range(1, p + 1)] for p in range(pmax)]


def _omega(mu: float, tau1: float, tau2: float, alpha: float, method: str) -> float:
    if method == "alpha4" and alpha == 4.0 and tau1 > 0.0:
        return omega_closed_form_alpha4(OmegaParams(mu, tau1, tau2, alpha))
    if method not in ("quad", "alpha4"):
        raise ValueError(f"unknown omega method {method!r}")
    return _omega_value(mu, tau1, tau2, alpha)


def _check_stream(cfg: NetworkConfig, k: int) -> int:
    if not 1 <= k <= cfg.K:
        raise ValueError(f"stream index k must lie in [1, {cfg.K}], got {k}")
    return cfg.M_c - cfg.K + k  # diversity order after projecting out later streams


def cop_general(
    cfg: NetworkConfig, rho: float, k: int, beta_t: float, *, omega_method: str = "quad"
) -> float:
    """Connection outage probability of the k-th nearest scheduled sensor.

    Exact expression: the Gamma(M_k, 1) signal gain is expanded against the
    Laplace transform of the aggregate interference and averaged over the
    ordered serving distance, leaving a triple finite sum of Omega integrals
    with tau1 = omega*beta_t/P_a and tau2 = phi*lambda_o*beta_t^delta
    + pi*lambda_c*(K - k + l + 1).

    ``omega_method``: "quad" evaluates every Omega integral by adaptive
    quadrature; "alpha4" routes through the parabolic-cylinder form when
    alpha = 4 (cross-validation path).
    """
    M_k = _check_stream(cfg, k)
    if beta_t < 0:
        raise ValueError(f"beta_t must be > 0, got {beta_t}")
    if beta_t == 0.0:
        return 0.0
    dd = derive_densities(cfg, rho)
    pl = phi_const(cfg.alpha)
    delta = pl.delta
    K = cfg.K

    tau1 = cfg.omega * beta_t / cfg.P_a
    lam_term = pl.phi * dd.lambda_o * beta_t**delta
    base = delta * lam_term  # delta * phi * lambda_o * beta_t^delta

    ups = _upsilon_table(M_k, delta)

    l_terms = []
    for l in range(k):
        tau2 = lam_term + math.pi * cfg.lambda_c * (K - k + l + 1)
        cache: dict[float, float] = {}

        def om(mu: float, tau2=tau2, cache=cache) -> float:
            if mu not in cache:
                cache[mu] = _omega(mu, tau1, tau2, cfg.alpha, omega_method)
            return cache[mu]

        acc = 0.0
        for m in range(M_k):
            inv_mfact = 1.0 / math.factorial(m)
            for p in range(m + 1):
                w = math.comb(m, p) * inv_mfact * tau1 ** (m - p)
                if w == 0.0:
                    continue
                if p == 0:
                    term = om(m * cfg.alpha / 2.0)
                else:
                    term = 0.0
                    for n in range(1, p + 1):
                        term += base**n * om(cfg.alpha / 2.0 * (m - p) + n) * ups[p][n]
                acc += w * term
        l_terms.append(math.comb(k - 1, l) * (-1) ** l * acc)

    raw = 1.0 - math.pi * cfg.lambda_c * k * math.comb(K, k) * math.fsum(l_terms)
    return _clamp_probability(raw, f"cop_general(k={k}, beta_t={beta_t})")


def cop_interference_limited(cfg: NetworkConfig, rho: float, k: int, beta_t: float) -> float:
    """Connection outage with receiver noise ignored (closed form, no quadrature)."""
    M_k = _check_stream(cfg, k)
    if beta_t < 0:
        raise ValueError(f"beta_t must be > 0, got {beta_t}")
    if beta_t == 0.0:
        return 0.0
    dd = derive_densities(cfg, rho)
    pl = phi_const(cfg.alpha)
    delta = pl.delta
    K = cfg.K

    lam_term = pl.phi * dd.lambda_o * beta_t**delta
    ups = _upsilon_table(M_k, delta)

    l_terms = []
    for l in range(k):
        tau2 = lam_term + math.pi * cfg.lambda_c * (K - k + l + 1)
        ratio = delta * lam_term / tau2
        inner = 1.0
        for m in range(1, M_k):
            inv_mfact = 1.0 / math.factorial(m)
            for n in range(1, m + 1):
                inner += math.factorial(n) * inv_mfact * ratio**n * ups[m][n]
        l_terms.append(math.comb(k - 1, l) * (-1) ** l * inner / tau2)

    raw = 1.0 - math.pi * cfg.lambda_c * k * math.comb(K, k) * math.fsum(l_terms)
    return _clamp_probability(raw, f"cop_interference_limited(k={k}, beta_t={beta_t})")


def cop_low_approx(cfg: NetworkConfig, rho: float, k: int, beta_t: float) -> float:
    """Low-outage expansion of the connection outage probability.

    p ~ (phi*lambda_o*beta_t^delta / (pi*lambda_c)) * Lambda_k * Xi_{M_k};
    the geometry and antenna factors decouple, which is what makes the rate
    design invertible in closed form.
    """
    M_k = _check_stream(cfg, k)
    if beta_t < 0:
        raise ValueError(f"beta_t must be > 0, got {beta_t}")
    dd = derive_densities(cfg, rho)
    pl = phi_const(cfg.alpha)
    raw = (
        pl.phi
        * dd.lambda_o
        * beta_t**pl.delta
        / (math.pi * cfg.lambda_c)
        * lambda_coeff(cfg.K, k)
        * xi_coeff(M_k, pl.delta)
    )
    return min(raw, 1.0)


@dataclass(frozen=True)
class CopCoefficients:
    """Cached per-sensor coefficients of the low-outage connection model.

    A_k multiplies beta_t^delta in the low-outage expansion; B_k
    = beta_e*/(1+beta_e*) shifts the secrecy threshold when the codeword
    threshold is rewritten in terms of beta_s.
    """

    k: int
    M_k: int
    lambda_k: float
    xi_mk: float
    A_k: float
    B_k: float
    alpha: float

    @property
    def delta(self) -> float:
        return 2.0 / self.alpha


def cop_coefficients(cfg: NetworkConfig, rho: float, k: int, beta_e_star: float) -> CopCoefficients:
    """Build the low-outage coefficient bundle for sensor k at jamming level rho."""
    M_k = _check_stream(cfg, k)
    if beta_e_star < 0:
        raise ValueError(f"beta_e_star must be >= 0, got {beta_e_star}")
    dd = derive_densities(cfg, rho)
    pl = phi_const(cfg.alpha)
    lam = lambda_coeff(cfg.K, k)
    xi = xi_coeff(M_k, pl.delta)
    A_k = pl.phi * dd.lambda_o / (math.pi * cfg.lambda_c) * lam * xi
    B_k = beta_e_star / (1.0 + beta_e_star)
    return CopCoefficients(k=k, M_k=M_k, lambda_k=lam, xi_mk=xi, A_k=A_k, B_k=B_k, alpha=cfg.alpha)


def sop_general(
    cfg: NetworkConfig, rho: float, beta_e: float, *, omega_method: str = "quad"
) -> float:
    """Secrecy outage probability against the best MMSE eavesdropper.

    1 - exp(-pi*lambda_e * sum_{m=1}^{M_e} sum_{n=0}^{M_e-m}
    zeta1^(m-1) zeta2^n / ((m-1)! n!) * Omega_u) with zeta1 = omega*beta_e/P_a,
    zeta2 = phi*lambda_j*(P_j*beta_e/P_a)^delta and u = (alpha/2)(m-1) + n.
    Identical for every stream: only the threshold carries a sensor index.

    With no jamming and no receiver noise the eavesdropper SINR is unbounded
    and the probability degenerates to 1 (warned).
    """
    if beta_e <= 0:
        raise ValueError(f"beta_e must be > 0, got {beta_e}")
    dd = derive_densities(cfg, rho)
    pl = phi_const(cfg.alpha)

    zeta1 = cfg.omega * beta_e / cfg.P_a
    zeta2 = pl.phi * dd.lambda_j * (cfg.P_j * beta_e / cfg.P_a) ** pl.delta
    if zeta1 == 0.0 and zeta2 == 0.0:
        warnings.warn(
            "no jamming (rho=0) and no receiver noise: eavesdropper SINR is "
            "unbounded, secrecy outage probability degenerates to 1",
            stacklevel=2,
        )
        return 1.0

    total = 0.0
    for m in range(1, cfg.M_e + 1):
        coef_m = zeta1 ** (m - 1) / _fact(m - 1)
        if coef_m == 0.0:
            continue
        for n in range(0, cfg.M_e - m + 1):
            coef = coef_m * zeta2**n / _fact(n)
            if coef == 0.0:
                continue
            u = cfg.alpha / 2.0 * (m - 1) + n
            total += coef * _omega(u, zeta1, zeta2, cfg.alpha, omega_method)

    raw = -math.expm1(-math.pi * cfg.lambda_e * total)
    return _clamp_probability(raw, f"sop_general(beta_e={beta_e})")


def sop_interference_limited(cfg: NetworkConfig, rho: float, beta_e: float) -> float:
    """Secrecy outage with the eavesdropper noise ignored (closed form).

    1 - exp(-(pi*lambda_e*M_e / (phi*rho*lambda_i)) * (P_a/(P_j*beta_e))^delta).
    Overestimates the eavesdroppers relative to the general form, which is the
    conservative choice for design.  rho = 0 degenerates to 1 (warned).
    """
    if beta_e <= 0:
        raise ValueError(f"beta_e must be > 0, got {beta_e}")
    dd = derive_densities(cfg, rho)
    if rho == 0.0:
        warnings.warn(
            "rho = 0: no jamming reaches the eavesdroppers in the "
            "interference-limited model; secrecy outage probability is 1",
            stacklevel=2,
        )
        return 1.0
    pl = phi_const(cfg.alpha)
    exponent = (
        math.pi
        * cfg.lambda_e
        * cfg.M_e
        / (pl.phi * dd.lambda_j)
        * (cfg.P_a / (cfg.P_j * beta_e)) ** pl.delta
    )
    raw = -math.expm1(-exponent)
    return _clamp_probability(raw, f"sop_interference_limited(beta_e={beta_e})")


def _fact(n: int) -> float:
    # exact up to 20!, log-gamma beyond (overflow safety for very large M_e)
    if n <= 20:
        return float(math.factorial(n))
    return math.exp(math.lgamma(n + 1.0))
