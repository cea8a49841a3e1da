"""Network parameter container, unit handling, and derived densities.

All internal quantities are linear: powers in milliwatts, densities per unit
area.  dBm appears only at the configuration/CLI boundary.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

__all__ = [
    "ConfigError",
    "NetworkConfig",
    "DerivedDensities",
    "WiretapCode",
    "OutageConstraints",
    "dbm_to_linear",
    "linear_to_dbm",
    "derive_densities",
    "load_config",
]


class ConfigError(ValueError):
    """Invalid network configuration or configuration file."""


def dbm_to_linear(p_dbm: float) -> float:
    """Convert dBm to linear milliwatts."""
    if not math.isfinite(p_dbm):
        raise ConfigError(f"power must be finite, got {p_dbm} dBm")
    return 10.0 ** (p_dbm / 10.0)


def linear_to_dbm(p_mw: float) -> float:
    """Convert linear milliwatts to dBm."""
    if p_mw <= 0:
        raise ConfigError(f"power must be > 0 mW, got {p_mw}")
    return 10.0 * math.log10(p_mw)


@dataclass(frozen=True)
class NetworkConfig:
    """Physical and deployment parameters of the sensor network.

    lambda_s, lambda_c, lambda_e: sensor / fusion-center / eavesdropper
    densities per unit area.  K sensors are scheduled per fusion center with
    M_c receive antennas; eavesdroppers carry M_e antennas.  P_a and P_j are
    the information and jamming transmit powers in milliwatts, omega the
    receiver noise power in milliwatts (0 for the interference-limited
    model), alpha the path-loss exponent.
    """

    lambda_s: float
    lambda_c: float
    lambda_e: float
    K: int
    M_c: int
    M_e: int
    P_a: float
    P_j: float
    omega: float
    alpha: float

    def __post_init__(self):
        if self.lambda_s <= 0 or self.lambda_c <= 0 or self.lambda_e <= 0:
            raise ConfigError("densities lambda_s, lambda_c, lambda_e must be > 0")
        if self.K < 1:
            raise ConfigError(f"K must be >= 1, got {self.K}")
        if self.M_c <= self.K:
            raise ConfigError(
                f"need K < M_c for zero-forcing of the remaining streams, got K={self.K}, M_c={self.M_c}"
            )
        if self.M_e < 1:
            raise ConfigError(f"M_e must be >= 1, got {self.M_e}")
        if self.P_a <= 0 or self.P_j <= 0:
            raise ConfigError("transmit powers P_a, P_j must be > 0 mW")
        if self.omega < 0:
            raise ConfigError(f"noise power omega must be >= 0 mW, got {self.omega}")
        if self.alpha <= 2:
            raise ConfigError(f"path-loss exponent must exceed 2, got {self.alpha}")
        if self.lambda_s <= self.K * self.lambda_c:
            raise ConfigError(
                "lambda_s must exceed K*lambda_c (otherwise no idle sensors remain): "
                f"lambda_s={self.lambda_s}, K*lambda_c={self.K * self.lambda_c}"
            )
        if self.lambda_s < 10.0 * self.K * self.lambda_c:
            warnings.warn(
                "lambda_s is less than 10x K*lambda_c; the dense-sensor "
                "assumption behind the scheduling model is weak here",
                stacklevel=2,
            )

    @property
    def delta(self) -> float:
        return 2.0 / self.alpha

    def with_(self, **kwargs) -> "NetworkConfig":
        """Copy with selected fields replaced (validation re-runs)."""
        return replace(self, **kwargs)


@dataclass(frozen=True)
class DerivedDensities:
    """Densities induced by scheduling and by the jamming probability rho."""

    lambda_a: float  # scheduled (interfering) sensors: K * lambda_c
    lambda_i: float  # idle sensors: lambda_s - K * lambda_c
    rho: float
    lambda_j: float  # active jammers: rho * lambda_i
    lambda_o: float  # power-weighted effective interferer density


def derive_densities(cfg: NetworkConfig, rho: float) -> DerivedDensities:
    """Scheduled/idle/jammer densities and the effective interferer density.

    lambda_o = lambda_a + (P_j/P_a)^delta * lambda_j folds the jammers into an
    equivalent density of information-power interferers.
    """
    if not 0.0 <= rho <= 1.0:
        raise ConfigError(f"rho must lie in [0, 1], got {rho}")
    lambda_a = cfg.K * cfg.lambda_c
    lambda_i = cfg.lambda_s - lambda_a
    if lambda_i <= 0:
        raise ConfigError("lambda_s <= K*lambda_c leaves no idle sensors")
    lambda_j = rho * lambda_i
    lambda_o = lambda_a + (cfg.P_j / cfg.P_a) ** cfg.delta * lambda_j
    return DerivedDensities(lambda_a, lambda_i, rho, lambda_j, lambda_o)


def _thresholds(rates: np.ndarray) -> np.ndarray:
    return np.exp2(rates) - 1.0


@dataclass(frozen=True)
class WiretapCode:
    """Per-sensor wiretap-code rates (bits/s/Hz) for the K scheduled sensors.

    R_t = R_s + R_e; the SINR thresholds are beta = 2^R - 1, satisfying
    beta_t = beta_e + (1 + beta_e) * beta_s.
    """

    R_s: np.ndarray
    R_e: np.ndarray

    def __post_init__(self):
        R_s = np.atleast_1d(np.asarray(self.R_s, dtype=float))
        R_e = np.atleast_1d(np.asarray(self.R_e, dtype=float))
        if R_s.shape != R_e.shape:
            raise ConfigError("R_s and R_e must have one entry per sensor")
        if np.any(R_s < 0) or np.any(R_e < 0):
            raise ConfigError("rates must be >= 0")
        object.__setattr__(self, "R_s", R_s)
        object.__setattr__(self, "R_e", R_e)

    @property
    def R_t(self) -> np.ndarray:
        return self.R_s + self.R_e

    @property
    def beta_t(self) -> np.ndarray:
        return _thresholds(self.R_t)

    @property
    def beta_s(self) -> np.ndarray:
        return _thresholds(self.R_s)

    @property
    def beta_e(self) -> np.ndarray:
        return _thresholds(self.R_e)

    @classmethod
    def from_thresholds(cls, beta_s, beta_e) -> "WiretapCode":
        beta_s = np.atleast_1d(np.asarray(beta_s, dtype=float))
        beta_e = np.atleast_1d(np.asarray(beta_e, dtype=float))
        if np.any(beta_s < 0) or np.any(beta_e < 0):
            raise ConfigError("thresholds must be >= 0")
        return cls(R_s=np.log2(1.0 + beta_s), R_e=np.log2(1.0 + beta_e))


@dataclass(frozen=True)
class OutageConstraints:
    """Maximum tolerable connection (sigma) and secrecy (epsilon) outage."""

    sigma: float
    epsilon: float

    def __post_init__(self):
        if not 0.0 < self.sigma < 1.0:
            raise ConfigError(f"sigma must lie in (0, 1), got {self.sigma}")
        if not 0.0 < self.epsilon < 1.0:
            raise ConfigError(f"epsilon must lie in (0, 1), got {self.epsilon}")


_CONFIG_KEYS = {
    "lambda_s",
    "lambda_c",
    "lambda_e",
    "K",
    "M_c",
    "M_e",
    "P_a_dbm",
    "P_j_dbm",
    "omega_dbm",
    "omega",
    "alpha",
}
_REQUIRED = {"lambda_s", "lambda_c", "lambda_e", "K", "M_c", "M_e", "P_a_dbm", "P_j_dbm", "alpha"}


def load_config(path) -> NetworkConfig:
    """Parse a flat key=value config file (UTF-8, '#' comments).

    Noise is given either as ``omega_dbm=<value>`` or as the literal
    ``omega=0`` for the interference-limited model.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc

    raw: dict[str, str] = {}
    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{ln}: expected key=value, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{ln}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"{path}:{ln}: duplicate key {key!r}")
        raw[key] = value

    missing = _REQUIRED - raw.keys()
    if missing:
        raise ConfigError(f"{path}: missing keys: {', '.join(sorted(missing))}")
    if "omega" in raw and "omega_dbm" in raw:
        raise ConfigError(f"{path}: give either omega=0 or omega_dbm, not both")
    if "omega" in raw:
        if raw["omega"].strip() != "0":
            raise ConfigError(f"{path}: the linear 'omega' key only accepts 0; use omega_dbm otherwise")
        omega = 0.0
    elif "omega_dbm" in raw:
        omega = dbm_to_linear(_as_float(raw["omega_dbm"], "omega_dbm", path))
    else:
        raise ConfigError(f"{path}: missing noise specification (omega_dbm or omega=0)")

    return NetworkConfig(
        lambda_s=_as_float(raw["lambda_s"], "lambda_s", path),
        lambda_c=_as_float(raw["lambda_c"], "lambda_c", path),
        lambda_e=_as_float(raw["lambda_e"], "lambda_e", path),
        K=_as_int(raw["K"], "K", path),
        M_c=_as_int(raw["M_c"], "M_c", path),
        M_e=_as_int(raw["M_e"], "M_e", path),
        P_a=dbm_to_linear(_as_float(raw["P_a_dbm"], "P_a_dbm", path)),
        P_j=dbm_to_linear(_as_float(raw["P_j_dbm"], "P_j_dbm", path)),
        omega=omega,
        alpha=_as_float(raw["alpha"], "alpha", path),
    )


def _as_float(value: str, key: str, path) -> float:
    try:
        return float(value)
    except ValueError as exc:
        raise ConfigError(f"{path}: key {key!r}: not a number: {value!r}") from exc


def _as_int(value: str, key: str, path) -> int:
    try:
        return int(value)
    except ValueError as exc:
        raise ConfigError(f"{path}: key {key!r}: not an integer: {value!r}") from exc
