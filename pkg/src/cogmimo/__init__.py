"""Throughput and energy efficiency of a cognitive MIMO link.

A secondary transmitter senses a primary user's band, transmits at one of
two power levels depending on the sensing outcome, and is subject to an
average-interference budget, a peak-power cap, and a statistical queueing
(QoS) constraint.  This package computes the link's effective capacity,
its ergodic limit, the low-power energy-efficiency figures (minimum energy
per bit and wideband slope), the exact Rayleigh-fading closed form, and a
frame-level queue simulation that validates the QoS exponent as the
buffer-tail decay rate.
"""

__version__ = "0.1.0"

from .config import (
    ActivityModel,
    PowerPolicy,
    SensingModel,
    SystemConfig,
    check_policy,
    db_to_linear,
    linear_to_db,
    mu_cap,
    p2_cap,
    snr_of,
)
from .channel import (
    NoiseCovariance,
    build_kz,
    dump_ensemble,
    hermitian_eig,
    identity_interference,
    load_ensemble,
    sample_rayleigh,
    whiten,
)
from .rates import (
    GainEnsemble,
    ScenarioRates,
    beamform_covariance,
    capacity_covariance,
    ensemble_rates,
    log_det_rate,
    precompute_gains,
    scenario_rates,
    waterfill,
)
from .effcap import (
    EffCapResult,
    TransitionModel,
    detection_weights,
    effective_capacity,
    effective_rate,
    effective_rate_mc_stderr,
    ergodic_capacity,
    spectral_radius_rank2,
    transition_probs,
)
from .lowsnr import (
    LowSnrReport,
    first_derivative,
    lowsnr_expansion,
    lowsnr_report,
    min_energy_per_bit,
    second_derivative_sym,
    top_eigen_stats,
    uniform_closed_forms,
    wideband_slope,
)
from .rayleigh import HankelSpec, closed_form_effective_rate, hankel_entry, rate_mgf
from .queuesim import DecayEstimate, QueueTrace, estimate_decay, simulate

__all__ = [
    "ActivityModel",
    "DecayEstimate",
    "EffCapResult",
    "GainEnsemble",
    "HankelSpec",
    "LowSnrReport",
    "NoiseCovariance",
    "PowerPolicy",
    "QueueTrace",
    "ScenarioRates",
    "SensingModel",
    "SystemConfig",
    "TransitionModel",
    "beamform_covariance",
    "build_kz",
    "capacity_covariance",
    "check_policy",
    "closed_form_effective_rate",
    "db_to_linear",
    "detection_weights",
    "dump_ensemble",
    "effective_capacity",
    "effective_rate",
    "effective_rate_mc_stderr",
    "ensemble_rates",
    "ergodic_capacity",
    "estimate_decay",
    "first_derivative",
    "hankel_entry",
    "hermitian_eig",
    "identity_interference",
    "linear_to_db",
    "load_ensemble",
    "log_det_rate",
    "lowsnr_expansion",
    "lowsnr_report",
    "min_energy_per_bit",
    "mu_cap",
    "p2_cap",
    "precompute_gains",
    "rate_mgf",
    "sample_rayleigh",
    "scenario_rates",
    "second_derivative_sym",
    "simulate",
    "snr_of",
    "spectral_radius_rank2",
    "top_eigen_stats",
    "transition_probs",
    "uniform_closed_forms",
    "waterfill",
    "whiten",
]
