"""Joint wiretap-rate and jamming-probability design.

Two schemes maximise the sum secrecy throughput sum_k R_s,k (1 - p_co,k)
under per-sensor outage constraints p_co <= sigma, p_so <= epsilon:

* optimal: per-sensor redundancy fixed by inverting the secrecy-outage
  constraint, secrecy threshold found by bisecting the throughput derivative
  (the objective is quasi-concave), jamming probability by grid search with
  golden-section refinement;
* sub-optimal: both outage constraints forced to equality, giving closed-form
  thresholds, with the jamming probability from a three-case rule built on a
  monotone auxiliary function G (bisection in the interior case).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .network import NetworkConfig, OutageConstraints, derive_densities
from .outage import (
    CopCoefficients,
    cop_coefficients,
    cop_interference_limited,
    cop_low_approx,
    sop_general,
    sop_interference_limited,
)
from .specfun import lambda_coeff, phi_const, xi_coeff

__all__ = [
    "InfeasibleDesignError",
    "SubOptAuxiliaries",
    "ThresholdResult",
    "RhoResult",
    "SubOptThroughput",
    "DesignResult",
    "MonotonicityRow",
    "MonotonicityReport",
    "optimal_redundancy",
    "optimal_secrecy_threshold",
    "optimal_throughput_at_rho",
    "optimal_design",
    "subopt_auxiliaries",
    "suboptimal_rates",
    "kappa",
    "G_function",
    "suboptimal_rho",
    "suboptimal_throughput",
    "suboptimal_design",
    "rho_monotonicity_report",
    "RHO_DIRECTIONS",
]

_LN2 = math.log(2.0)
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class InfeasibleDesignError(ValueError):
    """The constraints cannot be met by any admissible rate/jamming choice."""


def optimal_redundancy(
    cfg: NetworkConfig, rho: float, epsilon: float, model: str = "il"
) -> float:
    """Redundancy threshold beta_e* solving p_so(beta_e*) = epsilon.

    model="il": closed-form inversion of the interference-limited secrecy
    outage (conservative, the default design choice).  model="general":
    bisection on the noisy expression, valid because it decreases in beta_e.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0,1), got {epsilon}")
    if model == "il":
        if rho == 0.0:
            raise InfeasibleDesignError(
                "rho = 0: interference-limited secrecy outage is 1 for any rate"
            )
        dd = derive_densities(cfg, rho)
        pl = phi_const(cfg.alpha)
        inner = (
            math.pi
            * cfg.lambda_e
            * cfg.M_e
            / (pl.phi * dd.lambda_i * math.log(1.0 / (1.0 - epsilon)))
        )
        return cfg.P_a / cfg.P_j * rho ** (-cfg.alpha / 2.0) * inner ** (cfg.alpha / 2.0)
    if model != "general":
        raise ValueError(f"model must be 'il' or 'general', got {model!r}")

    lo, hi = 1e-9, 1e12
    f_lo = sop_general(cfg, rho, lo) - epsilon
    f_hi = sop_general(cfg, rho, hi) - epsilon
    if f_lo < 0.0:
        return lo
    if f_hi > 0.0:
        raise InfeasibleDesignError(
            f"secrecy outage stays above epsilon={epsilon} even at beta_e={hi:g}"
        )
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        f = sop_general(cfg, rho, mid) - epsilon
        if abs(f) <= 1e-9:
            return mid
        if f > 0.0:
            lo = mid
        else:
            hi = mid
    return math.sqrt(lo * hi)


@dataclass(frozen=True)
class ThresholdResult:
    """Outcome of the per-sensor secrecy-threshold optimisation."""

    beta_s: float
    t_k: float  # secrecy throughput contribution (bits/s/Hz)
    feasible: bool
    cap_active: bool  # the reliability cap, not the interior root, binds


def _throughput_derivative(beta: float, A: float, B: float, delta: float) -> float:
    first = (1.0 - A * (beta + B) ** delta) / ((1.0 + beta) * _LN2)
    if beta == 0.0 and B == 0.0:
        return first
    second = A * delta * math.log2(1.0 + beta) / (beta + B) ** (1.0 - delta)
    return first - second


def _throughput_value(beta: float, A: float, B: float, delta: float) -> float:
    return (1.0 - A * (beta + B) ** delta) * math.log2(1.0 + beta)


def optimal_secrecy_threshold(
    coeffs: CopCoefficients, sigma: float | None = None
) -> ThresholdResult:
    """Secrecy threshold beta_s* maximising (1 - A(beta+B)^delta) log2(1+beta).

    The objective is quasi-concave on (0, beta_max) with
    beta_max = A^(-alpha/2) - B, so the unique zero crossing of its derivative
    is found by bisection.  When ``sigma`` is given, beta_s is additionally
    capped so the low-outage connection probability at the implied codeword
    threshold stays within sigma; if that cap binds before the derivative
    turns negative, the cap is the optimum.
    """
    A, B, alpha, delta = coeffs.A_k, coeffs.B_k, coeffs.alpha, coeffs.delta
    if A <= 0.0:
        raise ValueError(f"A_k must be > 0, got {A}")
    if not 0.0 <= B < 1.0:
        raise ValueError(f"B_k must lie in [0,1), got {B}")
    beta_max = A ** (-alpha / 2.0) - B
    upper = beta_max
    if sigma is not None:
        # cop_low(beta_t) <= sigma with beta_t = (1+beta_e)(beta_s + B)
        cap = (sigma / A) ** (alpha / 2.0) * (1.0 - B) - B
        upper = min(upper, cap)
    if upper <= 0.0:
        return ThresholdResult(beta_s=0.0, t_k=0.0, feasible=False, cap_active=False)

    if _throughput_derivative(upper, A, B, delta) >= 0.0:
        t = max(_throughput_value(upper, A, B, delta), 0.0)
        return ThresholdResult(beta_s=upper, t_k=t, feasible=True, cap_active=True)

    lo, hi = 0.0, upper
    while hi - lo > 1e-10 * (1.0 + hi):
        mid = 0.5 * (lo + hi)
        if _throughput_derivative(mid, A, B, delta) > 0.0:
            lo = mid
        else:
            hi = mid
    beta = 0.5 * (lo + hi)
    t = max(_throughput_value(beta, A, B, delta), 0.0)
    return ThresholdResult(beta_s=beta, t_k=t, feasible=True, cap_active=False)


@dataclass(frozen=True)
class SubOptAuxiliaries:
    """X_k, Y, Z reparametrisation of the equality-constrained design.

    X_k measures the legitimate channel's rate headroom under the reliability
    constraint, Y the affordable jamming level, Z the eavesdroppers' strength;
    rho_min is the smallest jamming probability at which every sensor keeps a
    nonnegative secrecy rate.
    """

    X: np.ndarray
    Y: float
    Z: float
    rho_min: float
    k_blocking: int  # 1-based index of the sensor that pins rho_min
    feasible: bool


def subopt_auxiliaries(cfg: NetworkConfig, sigma: float, epsilon: float) -> SubOptAuxiliaries:
    OutageConstraints(sigma=sigma, epsilon=epsilon)  # validates ranges
    pl = phi_const(cfg.alpha)
    dd = derive_densities(cfg, 0.0)
    half_alpha = cfg.alpha / 2.0
    X = np.array(
        [
            (
                sigma
                * math.pi
                * cfg.lambda_c
                / (dd.lambda_a * pl.phi * lambda_coeff(cfg.K, k) * xi_coeff(cfg.M_c - cfg.K + k, pl.delta))
            )
            ** half_alpha
            for k in range(1, cfg.K + 1)
        ]
    )
    Y = dd.lambda_i / dd.lambda_a * (cfg.P_j / cfg.P_a) ** pl.delta
    Z = (
        cfg.P_a
        / cfg.P_j
        * (
            math.pi
            * cfg.lambda_e
            * cfg.M_e
            / (pl.phi * dd.lambda_i * math.log(1.0 / (1.0 - epsilon)))
        )
        ** half_alpha
    )
    margin = (X / Z) ** pl.delta - Y
    k_blocking = int(np.argmin(margin)) + 1
    if np.any(margin <= 0.0):
        return SubOptAuxiliaries(X=X, Y=Y, Z=Z, rho_min=math.inf, k_blocking=k_blocking, feasible=False)
    rho_min = float(np.max(1.0 / margin))
    return SubOptAuxiliaries(
        X=X, Y=Y, Z=Z, rho_min=rho_min, k_blocking=k_blocking, feasible=rho_min <= 1.0
    )


def suboptimal_rates(
    cfg: NetworkConfig, rho: float, sigma: float, epsilon: float
) -> tuple[np.ndarray, float]:
    """Closed-form thresholds forcing p_co,k = sigma and p_so,k = epsilon.

    Returns (beta_t array over sensors, beta_e); beta_e carries no sensor
    index.  Requires rho > 0.
    """
    if rho <= 0.0:
        raise InfeasibleDesignError("suboptimal rates need rho > 0")
    aux = subopt_auxiliaries(cfg, sigma, epsilon)
    half_alpha = cfg.alpha / 2.0
    beta_t = aux.X * (1.0 + aux.Y * rho) ** (-half_alpha)
    beta_e = aux.Z * rho ** (-half_alpha)
    return beta_t, float(beta_e)


def kappa(rho: float, aux: SubOptAuxiliaries, alpha: float) -> float:
    """Mean of 1/(X_k (1+Y rho)^(-alpha/2) + 1); lies in (0,1), grows with rho."""
    w = aux.X * (1.0 + aux.Y * rho) ** (-alpha / 2.0)
    return float(np.mean(1.0 / (w + 1.0)))


def G_function(rho: float, aux: SubOptAuxiliaries, alpha: float) -> float:
    """Sign proxy of dT/d rho: 1 + Y rho k(rho) - (Y rho^(alpha/2+1)/Z)(1 - k(rho)).

    Strictly decreasing in rho, so its unique zero is the interior optimum of
    the equality-constrained throughput.
    """
    kap = kappa(rho, aux, alpha)
    return 1.0 + aux.Y * rho * kap - aux.Y * rho ** (alpha / 2.0 + 1.0) / aux.Z * (1.0 - kap)


@dataclass(frozen=True)
class RhoResult:
    rho_star: float
    case: str  # "rho_min" | "saturated" | "interior" | "infeasible"
    feasible: bool
    k_blocking: int
    g_residual: float  # |G(rho_star)| in the interior case, else nan
    aux: SubOptAuxiliaries


def suboptimal_rho(cfg: NetworkConfig, sigma: float, epsilon: float) -> RhoResult:
    """Three-case rule for the throughput-maximising jamming probability.

    Weak eavesdroppers (small Z): rho* = rho_min; dominant eavesdroppers:
    rho* = 1; otherwise the unique root of G on [rho_min, 1].
    """
    aux = subopt_auxiliaries(cfg, sigma, epsilon)
    if not aux.feasible:
        return RhoResult(
            rho_star=math.nan,
            case="infeasible",
            feasible=False,
            k_blocking=aux.k_blocking,
            g_residual=math.nan,
            aux=aux,
        )
    half_p1 = cfg.alpha / 2.0 + 1.0
    kap_min = kappa(aux.rho_min, aux, cfg.alpha)
    if aux.Z < aux.Y * aux.rho_min**half_p1 * (1.0 - kap_min) / (1.0 + aux.Y * aux.rho_min * kap_min):
        return RhoResult(aux.rho_min, "rho_min", True, aux.k_blocking, math.nan, aux)
    kap_one = kappa(1.0, aux, cfg.alpha)
    if aux.Z >= aux.Y * (1.0 - kap_one) / (1.0 + aux.Y * kap_one):
        return RhoResult(1.0, "saturated", True, aux.k_blocking, math.nan, aux)

    lo, hi = aux.rho_min, 1.0
    g = math.nan
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        g = G_function(mid, aux, cfg.alpha)
        if abs(g) <= 1e-10:
            return RhoResult(mid, "interior", True, aux.k_blocking, abs(g), aux)
        if g > 0.0:
            lo = mid
        else:
            hi = mid
    mid = 0.5 * (lo + hi)
    return RhoResult(mid, "interior", True, aux.k_blocking, abs(G_function(mid, aux, cfg.alpha)), aux)


@dataclass(frozen=True)
class SubOptThroughput:
    t_sum: float
    per_sensor: np.ndarray
    clipped: np.ndarray  # sensors whose negative contribution was floored at 0


def suboptimal_throughput(
    cfg: NetworkConfig, rho: float, sigma: float, epsilon: float
) -> SubOptThroughput:
    """Equality-constrained sum secrecy throughput at jamming probability rho.

    (1 - sigma) sum_k log2((1+beta_t,k)/(1+beta_e)); sensors whose term is
    negative (possible only below rho_min) are floored at zero and flagged.
    """
    beta_t, beta_e = suboptimal_rates(cfg, rho, sigma, epsilon)
    per = (1.0 - sigma) * np.log2((1.0 + beta_t) / (1.0 + beta_e))
    clipped = per < 0.0
    per = np.where(clipped, 0.0, per)
    return SubOptThroughput(t_sum=float(per.sum()), per_sensor=per, clipped=clipped)


@dataclass(frozen=True)
class DesignResult:
    """A complete rate/jamming design with its verification data."""

    scheme: str  # "optimal" | "suboptimal"
    feasible: bool
    rho_star: float
    t_sum: float
    R_t: np.ndarray
    R_s: np.ndarray
    R_e: np.ndarray
    beta_t: np.ndarray
    beta_s: np.ndarray
    beta_e: float
    t_k: np.ndarray
    sensor_feasible: np.ndarray
    cop_low_check: np.ndarray  # low-outage connection model at the returned rates
    cop_il_check: np.ndarray  # interference-limited connection model (informational)
    sop_check: float  # secrecy model used for the design, at beta_e
    case: str = ""  # suboptimal three-case label
    g_residual: float = math.nan
    k_blocking: int = 0
    notes: tuple[str, ...] = ()


def _design_from_thresholds(
    cfg: NetworkConfig,
    scheme: str,
    rho: float,
    beta_s: np.ndarray,
    beta_e: float,
    t_k: np.ndarray,
    sensor_feasible: np.ndarray,
    model: str,
    **extra,
) -> DesignResult:
    beta_s = np.asarray(beta_s, dtype=float)
    beta_t = beta_e + (1.0 + beta_e) * beta_s
    R_s = np.log2(1.0 + beta_s)
    R_e = np.where(beta_s > 0.0, math.log2(1.0 + beta_e), 0.0)
    cop_low = np.array(
        [
            cop_low_approx(cfg, rho, k, float(bt)) if beta_s[k - 1] > 0 else 0.0
            for k, bt in zip(range(1, cfg.K + 1), beta_t)
        ]
    )
    cop_il = np.array(
        [
            cop_interference_limited(cfg, rho, k, float(bt)) if beta_s[k - 1] > 0 else 0.0
            for k, bt in zip(range(1, cfg.K + 1), beta_t)
        ]
    )
    if model == "il":
        sop = sop_interference_limited(cfg, rho, beta_e) if beta_e > 0 else 1.0
    else:
        sop = sop_general(cfg, rho, beta_e) if beta_e > 0 else 1.0
    return DesignResult(
        scheme=scheme,
        feasible=bool(np.any(sensor_feasible)),
        rho_star=rho,
        t_sum=float(np.sum(t_k)),
        R_t=R_s + R_e,
        R_s=R_s,
        R_e=R_e,
        beta_t=beta_t,
        beta_s=beta_s,
        beta_e=beta_e,
        t_k=np.asarray(t_k, dtype=float),
        sensor_feasible=np.asarray(sensor_feasible, dtype=bool),
        cop_low_check=cop_low,
        cop_il_check=cop_il,
        sop_check=sop,
        **extra,
    )


def optimal_throughput_at_rho(
    cfg: NetworkConfig, sigma: float, epsilon: float, rho: float, model: str = "il"
) -> tuple[float, list[ThresholdResult], float]:
    """Optimal-scheme throughput for a fixed jamming probability.

    Returns (T, per-sensor threshold results, beta_e*).  Infeasible sensors
    contribute zero.
    """
    try:
        beta_e = optimal_redundancy(cfg, rho, epsilon, model=model)
    except InfeasibleDesignError:
        return 0.0, [ThresholdResult(0.0, 0.0, False, False)] * cfg.K, math.nan
    results = []
    total = 0.0
    for k in range(1, cfg.K + 1):
        co = cop_coefficients(cfg, rho, k, beta_e)
        res = optimal_secrecy_threshold(co, sigma=sigma)
        results.append(res)
        total += res.t_k
    return total, results, beta_e


def optimal_design(
    cfg: NetworkConfig,
    sigma: float,
    epsilon: float,
    rho_grid_step: float = 0.01,
    model: str = "il",
) -> DesignResult:
    """Grid search over the jamming probability with golden-section refinement.

    The throughput is observed single-peaked in rho but that is unproven for
    this scheme, so a coarse grid guards against missing the basin before the
    local refinement (to 1e-4 in rho).  Ties return the smallest rho.
    """
    OutageConstraints(sigma=sigma, epsilon=epsilon)
    if not 0.0 < rho_grid_step <= 0.1:
        raise ValueError(f"rho_grid_step must lie in (0, 0.1], got {rho_grid_step}")

    n = int(round(1.0 / rho_grid_step))
    grid = [i * rho_grid_step for i in range(1, n)] + [1.0]
    if model == "general":
        grid = [0.0] + grid

    def T(rho: float) -> float:
        return optimal_throughput_at_rho(cfg, sigma, epsilon, rho, model=model)[0]

    values = [T(r) for r in grid]
    best = int(np.argmax(values))
    cand_rho, cand_T = grid[best], values[best]

    if cand_T > 0.0:
        lo = grid[best - 1] if best > 0 else grid[0]
        hi = grid[best + 1] if best + 1 < len(grid) else grid[-1]
        a, b = lo, hi
        c = b - _INVPHI * (b - a)
        d = a + _INVPHI * (b - a)
        fc, fd = T(c), T(d)
        while b - a > 1e-4:
            if fc >= fd:
                b, d, fd = d, c, fc
                c = b - _INVPHI * (b - a)
                fc = T(c)
            else:
                a, c, fc = c, d, fd
                d = a + _INVPHI * (b - a)
                fd = T(d)
        refined = c if fc >= fd else d
        fr = max(fc, fd)
        if fr > cand_T or (fr == cand_T and refined < cand_rho):
            cand_rho, cand_T = refined, fr

    t_total, results, beta_e = optimal_throughput_at_rho(cfg, sigma, epsilon, cand_rho, model=model)
    feas = np.array([r.feasible for r in results])
    notes = ()
    if not feas.any():
        notes = ("no sensor admits a positive secrecy rate at any grid point",)
    return _design_from_thresholds(
        cfg,
        "optimal",
        cand_rho,
        np.array([r.beta_s for r in results]),
        beta_e if math.isfinite(beta_e) else 0.0,
        np.array([r.t_k for r in results]),
        feas,
        model,
        notes=notes,
    )


def suboptimal_design(cfg: NetworkConfig, sigma: float, epsilon: float) -> DesignResult:
    """Closed-form design: three-case rho rule plus equality-constrained rates."""
    rr = suboptimal_rho(cfg, sigma, epsilon)
    if not rr.feasible:
        K = cfg.K
        zeros = np.zeros(K)
        return DesignResult(
            scheme="suboptimal",
            feasible=False,
            rho_star=math.nan,
            t_sum=0.0,
            R_t=zeros,
            R_s=zeros,
            R_e=zeros,
            beta_t=zeros,
            beta_s=zeros,
            beta_e=math.nan,
            t_k=zeros,
            sensor_feasible=np.zeros(K, dtype=bool),
            cop_low_check=zeros,
            cop_il_check=zeros,
            sop_check=math.nan,
            case="infeasible",
            k_blocking=rr.k_blocking,
            notes=(f"sensor {rr.k_blocking} cannot reach a nonnegative secrecy rate",),
        )
    beta_t, beta_e = suboptimal_rates(cfg, rr.rho_star, sigma, epsilon)
    st = suboptimal_throughput(cfg, rr.rho_star, sigma, epsilon)
    beta_s = np.maximum((1.0 + beta_t) / (1.0 + beta_e) - 1.0, 0.0)
    return _design_from_thresholds(
        cfg,
        "suboptimal",
        rr.rho_star,
        beta_s,
        beta_e,
        st.per_sensor,
        ~st.clipped,
        "il",
        case=rr.case,
        g_residual=rr.g_residual,
        k_blocking=rr.k_blocking,
    )


RHO_DIRECTIONS = {
    "sigma": "decreasing",
    "epsilon": "decreasing",
    "M_c": "decreasing",
    "lambda_s": "decreasing",
    "P_j": "decreasing",  # swept jamming power at fixed P_a, i.e. the power ratio
    "lambda_c": "increasing",
    "K": "increasing",
    "lambda_e": "increasing",
    "M_e": "increasing",
}


@dataclass(frozen=True)
class MonotonicityRow:
    value: float
    rho_star: float
    case: str
    interior: bool


@dataclass(frozen=True)
class MonotonicityReport:
    parameter: str
    expected: str  # "decreasing" | "increasing"
    rows: list[MonotonicityRow]
    all_interior: bool
    direction_ok: bool  # strict monotonicity in the expected direction (interior rows)


def rho_monotonicity_report(
    cfg: NetworkConfig, sigma: float, epsilon: float, parameter: str, values
) -> MonotonicityReport:
    """Sweep one parameter and check the direction of the interior optimum rho.

    Rows where the three-case rule leaves the interior regime are flagged and
    excluded from the direction verdict.
    """
    if parameter not in RHO_DIRECTIONS:
        raise ValueError(
            f"parameter must be one of {sorted(RHO_DIRECTIONS)}, got {parameter!r}"
        )
    rows = []
    for v in values:
        sig, eps, c = sigma, epsilon, cfg
        if parameter == "sigma":
            sig = float(v)
        elif parameter == "epsilon":
            eps = float(v)
        elif parameter in ("K", "M_c", "M_e"):
            c = cfg.with_(**{parameter: int(v)})
        else:
            c = cfg.with_(**{parameter: float(v)})
        rr = suboptimal_rho(c, sig, eps)
        rows.append(
            MonotonicityRow(
                value=float(v),
                rho_star=rr.rho_star,
                case=rr.case,
                interior=rr.case == "interior",
            )
        )
    interior = [r for r in rows if r.interior]
    expected = RHO_DIRECTIONS[parameter]
    seq = [r.rho_star for r in interior]
    if len(seq) >= 2:
        if expected == "decreasing":
            ok = all(b < a for a, b in zip(seq, seq[1:]))
        else:
            ok = all(b > a for a, b in zip(seq, seq[1:]))
    else:
        ok = False
    return MonotonicityReport(
        parameter=parameter,
        expected=expected,
        rows=rows,
        all_interior=len(interior) == len(rows),
        direction_ok=ok,
    )
