"""Secrecy analysis and rate/jamming design for random-access sensor networks.

Closed-form connection/secrecy outage probabilities for a Poisson-deployed
network with zero-forcing SIC fusion centers, MMSE eavesdroppers and random
jamming, a Monte-Carlo simulator that validates them, and optimisers for the
sum secrecy throughput.
"""

from .network import (
    ConfigError,
    DerivedDensities,
    NetworkConfig,
    OutageConstraints,
    WiretapCode,
    dbm_to_linear,
    derive_densities,
    linear_to_dbm,
    load_config,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DerivedDensities",
    "NetworkConfig",
    "OutageConstraints",
    "WiretapCode",
    "dbm_to_linear",
    "derive_densities",
    "linear_to_dbm",
    "load_config",
    "__version__",
]
