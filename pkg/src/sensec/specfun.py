"""Special functions and coefficient sums shared by the outage analytics.

Everything here is a pure function of its arguments.  The central object is
the tail integral

    Omega(mu; tau1, tau2, alpha) = int_0^inf x^mu exp(-tau1 x^(alpha/2) - tau2 x) dx

which shows up in every outage expression after the interference Laplace
transform is averaged over the serving-link distance.  One adaptive-quadrature
engine evaluates it for any path-loss exponent; for alpha = 4 an equivalent
parabolic-cylinder form is provided as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from scipy.integrate import quad
from scipy.special import gammaln

__all__ = [
    "PathLossDerived",
    "OmegaParams",
    "phi_const",
    "omega_integral",
    "omega_closed_form_alpha4",
    "parabolic_cylinder_d",
    "upsilon",
    "lambda_coeff",
    "xi_coeff",
]

_LOG_DBL_MIN = -745.0  # exp() underflows to 0 below this


@dataclass(frozen=True)
class PathLossDerived:
    """Path-loss exponent together with its derived constants.

    delta = 2/alpha and phi = pi * Gamma(1+delta) * Gamma(1-delta); phi is the
    interference-geometry constant of a planar Poisson field under power-law
    attenuation.
    """

    alpha: float
    delta: float
    phi: float


@dataclass(frozen=True)
class OmegaParams:
    """Arguments of the Omega tail integral (see module docstring)."""

    mu: float
    tau1: float
    tau2: float
    alpha: float

    def validate(self) -> None:
        if self.mu < 0:
            raise ValueError(f"mu must be >= 0, got {self.mu}")
        if self.tau1 < 0 or self.tau2 < 0:
            raise ValueError("tau1 and tau2 must be >= 0")
        if self.alpha <= 2:
            raise ValueError(f"alpha must exceed 2, got {self.alpha}")
        if self.tau1 == 0 and self.tau2 == 0:
            raise ValueError("integral diverges: tau1 = tau2 = 0")


def phi_const(alpha: float) -> PathLossDerived:
    """Derived path-loss constants for exponent ``alpha`` (> 2)."""
    if alpha <= 2:
        raise ValueError(
            f"path-loss exponent must exceed 2 (model diverges), got {alpha}"
        )
    delta = 2.0 / alpha
    phi = math.pi * math.gamma(1.0 + delta) * math.gamma(1.0 - delta)
    return PathLossDerived(alpha=float(alpha), delta=delta, phi=phi)


def _omega_value(mu: float, tau1: float, tau2: float, alpha: float) -> float:
    """Evaluate the Omega integral; see ``omega_integral`` for the contract."""
    if tau1 == 0.0:
        # plain gamma integral
        return math.exp(gammaln(mu + 1.0) - (mu + 1.0) * math.log(tau2))
    if tau2 == 0.0:
        # substitute y = x^(alpha/2)
        c = 2.0 * (mu + 1.0) / alpha
        return (2.0 / alpha) * math.exp(gammaln(c) - c * math.log(tau1))

    # Rescale x = s*y so that the dominant exponential decay rate is mu+1,
    # which keeps the peak of the integrand at y = O(1) for any parameter
    # combination, then map y = u/(1-u) onto the unit interval.
    half_alpha = alpha / 2.0
    s = min((mu + 1.0) / tau2, ((mu + 1.0) / tau1) ** (1.0 / half_alpha))
    t1 = tau1 * s**half_alpha
    t2 = tau2 * s

    def integrand(u: float) -> float:
        if u <= 0.0:
            return 1.0 if mu == 0.0 else 0.0
        if u >= 1.0:
            return 0.0
        y = u / (1.0 - u)
        ln = mu * math.log(y) - t1 * y**half_alpha - t2 * y
        if ln < _LOG_DBL_MIN:
            return 0.0
        return math.exp(ln) / ((1.0 - u) * (1.0 - u))

    res = quad(integrand, 0.0, 1.0, epsabs=0.0, epsrel=1e-12, limit=300, full_output=1)
    val = res[0]
    if len(res) > 3 or val <= 0.0:
        # one retry on a split interval before giving up
        left = quad(integrand, 0.0, 0.5, epsabs=0.0, epsrel=1e-12, limit=500, full_output=1)
        right = quad(integrand, 0.5, 1.0, epsabs=0.0, epsrel=1e-12, limit=500, full_output=1)
        val = left[0] + right[0]
        if val <= 0.0:
            raise ArithmeticError(
                f"quadrature failed for Omega(mu={mu}, tau1={tau1}, tau2={tau2}, alpha={alpha})"
            )
    lv = (mu + 1.0) * math.log(s) + math.log(val)
    return math.exp(lv) if lv < 709.0 else math.inf


def omega_integral(params: OmegaParams) -> float:
    """Tail integral int_0^inf x^mu exp(-tau1 x^(alpha/2) - tau2 x) dx.

    Uses closed gamma forms when one coefficient vanishes and adaptive
    quadrature on a rescaled finite interval otherwise (relative accuracy
    around 1e-9 or better).
    """
    params.validate()
    return _omega_value(params.mu, params.tau1, params.tau2, params.alpha)


def omega_closed_form_alpha4(params: OmegaParams) -> float:
    """Alpha = 4 evaluation of the Omega integral via its parabolic-cylinder form.

    Equivalent to (2 tau1)^(-(mu+1)/2) * Gamma(mu+1) * exp(tau2^2/(8 tau1))
    * D_{-mu-1}(tau2 / sqrt(2 tau1)); the exponentially scaled product is
    computed directly from the integral representation of D to avoid
    overflow, using the same quadrature engine as ``omega_integral``.
    """
    params.validate()
    if params.alpha != 4.0:
        raise ValueError("closed form requires alpha = 4")
    if params.tau1 == 0.0:
        raise ValueError("tau1 = 0: use omega_integral (plain gamma form)")
    z = params.tau2 / math.sqrt(2.0 * params.tau1)
    inner = _omega_value(params.mu, 0.5, z, 4.0)
    lv = -0.5 * (params.mu + 1.0) * math.log(2.0 * params.tau1) + math.log(inner)
    return math.exp(lv) if lv < 709.0 else math.inf


def parabolic_cylinder_d(nu: float, z: float) -> float:
    """Parabolic cylinder function D_{-nu}(z) for nu > 0, z >= 0.

    Evaluated through the integral representation
    D_{-nu}(z) = exp(-z^2/4) / Gamma(nu) * int_0^inf t^(nu-1) exp(-t^2/2 - z t) dt
    with the shared quadrature engine.
    """
    if nu <= 0:
        raise ValueError(f"integral representation requires nu > 0, got {nu}")
    inner = _omega_value(nu - 1.0, 0.5, z, 4.0) if z > 0 else _omega_value(nu - 1.0, 0.5, 0.0, 4.0)
    lv = -0.25 * z * z - gammaln(nu) + math.log(inner)
    return math.exp(lv) if lv < 709.0 else math.inf


def upsilon(p: int, n: int, delta: float) -> float:
    """Coefficient of the p-th derivative of the interference Laplace transform.

    Sum over all subsets psi of {1, ..., p-1} with |psi| = p - n of the
    product over the ascending-sorted elements q_i of [q_i - delta*(q_i-i+1)],
    with upsilon(p, p, .) = 1 (empty subset).  Computed by a subset-size DP
    instead of explicit enumeration; every factor is nonnegative for
    0 < delta < 1, so plain float accumulation is exact enough.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if n < 1 or n > p:
        raise ValueError(f"n must lie in [1, p], got n={n}, p={p}")
    size = p - n
    # d[i] = sum over subsets of {1..q} of cardinality i of the sorted product
    d = [0.0] * (size + 1)
    d[0] = 1.0
    for q in range(1, p):
        for i in range(min(q, size), 0, -1):
            d[i] += d[i - 1] * (q - delta * (q - i + 1))
    return d[size]


def lambda_coeff(K: int, k: int) -> float:
    """Geometry coefficient of the k-th nearest of K scheduled sensors.

    k * C(K, k) * sum_l C(k-1, l) (-1)^l / (K-k+l+1)^2, evaluated in exact
    rational arithmetic (the sum alternates) and returned as float.
    """
    if K < 1 or k < 1 or k > K:
        raise ValueError(f"need 1 <= k <= K, got k={k}, K={K}")
    acc = Fraction(0)
    for l in range(k):
        acc += Fraction((-1) ** l * math.comb(k - 1, l), (K - k + l + 1) ** 2)
    return float(k * math.comb(K, k) * acc)


def xi_coeff(M: int, delta: float) -> float:
    """Antenna-diversity coefficient: 1 + sum_{m=1}^{M-1} (1/m!) prod_{i<m} (i-delta).

    Lies in (0, 1] and decreases strictly with M for 0 < delta < 1.
    """
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0,1), got {delta}")
    total = 1.0
    term = 1.0
    for m in range(1, M):
        term *= (m - 1 - delta) / m
        total += term
    return total
