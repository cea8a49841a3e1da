from .api import (
    OutageEstimate,
    ProbeRow,
    available_backends,
    convergence_probe,
    default_radius,
    get_backend,
    projected_interferer_gain_samples,
    set_backend,
    set_threads,
    simulate_cop,
    simulate_sop,
    zf_signal_gain_samples,
    zf_weight_vector,
)

__all__ = [
    "OutageEstimate",
    "ProbeRow",
    "available_backends",
    "convergence_probe",
    "default_radius",
    "get_backend",
    "projected_interferer_gain_samples",
    "set_backend",
    "set_threads",
    "simulate_cop",
    "simulate_sop",
    "zf_signal_gain_samples",
    "zf_weight_vector",
]
