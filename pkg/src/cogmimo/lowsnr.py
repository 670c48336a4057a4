# Low-power-regime analysis: derivatives of the effective capacity at
# vanishing SNR, minimum energy per bit, and the wideband slope.
#
# At snr -> 0 the optimal input beamforms into the maximal-eigenvalue
# eigenspaces of H^H K_z^{-1} H (busy-sensed) and H^H H (idle-sensed), and
# the busy/idle power ratio is pinned to 1: the interference budget stops
# binding as the absolute power vanishes, and full busy-sensed power
# maximizes the first derivative.

import math
from dataclasses import dataclass

import numpy as np

from .config import ActivityModel, SensingModel, SystemConfig, linear_to_db
from .channel import NoiseCovariance
from .effcap import detection_weights
from .rates import TIE_REL_TOL, precompute_gains

LN2 = math.log(2.0)


@dataclass(frozen=True)
class LowSnrReport:
    """Low-SNR figures of merit for one configuration.

    c_dot / c_ddot are the first and second derivatives of the
    per-dimension effective capacity at snr = 0 (c_ddot and s0 are None
    when a + b != 1, where no closed form exists).  m1 / m2 record the
    largest top-eigenvalue multiplicity seen in the ensemble for the
    busy- and idle-sensed kernels.
    """

    c_dot: float
    c_ddot: float | None
    ebn0_min: float
    ebn0_min_db: float
    s0: float | None
    ell1: float
    ell2: float
    m1: int
    m2: int


def top_eigen_stats(
    samples: np.ndarray,
    kz: NoiseCovariance,
    tie_rel_tol: float = TIE_REL_TOL,
):
    """Per-sample top eigenvalues and multiplicities of both rate kernels.

    Returns (lam_busy, mult_busy, lam_idle, mult_idle).  Eigenvalues within
    tie_rel_tol * lambda_max of the top count as tied; continuous fading
    gives multiplicity 1 almost surely, but structured inputs (H = I) need
    the correct count.
    """
    gains = precompute_gains(samples, kz)
    lam_b = gains.busy[:, 0]
    lam_i = gains.idle[:, 0]
    mult_b = np.sum(gains.busy >= lam_b[:, None] * (1.0 - tie_rel_tol), axis=1)
    mult_i = np.sum(gains.idle >= lam_i[:, None] * (1.0 - tie_rel_tol), axis=1)
    return lam_b, mult_b, lam_i, mult_i


def first_derivative(
    samples: np.ndarray,
    kz: NoiseCovariance,
    sensing: SensingModel,
    activity: ActivityModel,
) -> float:
    """d/dsnr of the per-dimension effective capacity at snr = 0.

    Equal to (w_busy * E[lambda_max(H^H K_z^{-1} H)]
              + w_idle * E[lambda_max(H^H H)]) / ln 2
    with the detection weights of `detection_weights` and mu = 1.  The
    value does not depend on the QoS exponent.
    """
    lam_b, _, lam_i, _ = top_eigen_stats(samples, kz)
    w_busy, w_idle = detection_weights(sensing, activity)
    return (w_busy * float(lam_b.mean()) + w_idle * float(lam_i.mean())) / LN2


def min_energy_per_bit(
    samples: np.ndarray,
    kz: NoiseCovariance,
    sensing: SensingModel,
    activity: ActivityModel,
) -> tuple[float, float]:
    """Minimum energy per bit (linear, dB): the snr -> 0 limit of snr / C.

    The reciprocal of the first derivative; degenerate all-zero channels
    are rejected.
    """
    c_dot = first_derivative(samples, kz, sensing, activity)
    if c_dot <= 0:
        raise ValueError("first derivative is zero; energy per bit undefined")
    lin = 1.0 / c_dot
    return lin, linear_to_db(lin)


def _moment_terms(samples, kz, sensing, activity):
    lam_b, mult_b, lam_i, mult_i = top_eigen_stats(samples, kz)
    ell1, ell2 = detection_weights(sensing, activity)
    e1 = float(np.mean(ell1 * lam_b + ell2 * lam_i))
    s2 = float(np.mean(ell1 * lam_b**2 + ell2 * lam_i**2))
    w = float(np.mean(ell1 * lam_b**2 / mult_b + ell2 * lam_i**2 / mult_i))
    return e1, s2, w, int(mult_b.max()), int(mult_i.max())


def _require_memoryless(activity: ActivityModel):
    if abs(activity.a + activity.b - 1.0) > 1e-12:
        raise ValueError(
            "second-order low-SNR analysis requires a + b = 1 "
            f"(memoryless activity), got a+b={activity.a + activity.b}"
        )


def second_derivative_sym(
    samples: np.ndarray,
    kz: NoiseCovariance,
    sensing: SensingModel,
    activity: ActivityModel,
    cfg: SystemConfig,
) -> float:
    """Second derivative of the per-dimension effective capacity at snr = 0.

    Only available for memoryless activity (a + b = 1).  Three terms: the
    QoS penalty theta*T*B*N/ln^2(2) times the variance-type gap
    E^2[l1*lam1 + l2*lam2] - E[l1*lam1^2 + l2*lam2^2], minus N/ln(2) times
    the multiplicity-weighted second moment.  Always <= 0, and its
    magnitude grows linearly in theta.
    """
    _require_memoryless(activity)
    e1, s2, w, _, _ = _moment_terms(samples, kz, sensing, activity)
    qos = cfg.theta * cfg.T * cfg.B * cfg.N / LN2**2
    return qos * (e1**2 - s2) - (cfg.N / LN2) * w


def wideband_slope(
    samples: np.ndarray,
    kz: NoiseCovariance,
    sensing: SensingModel,
    activity: ActivityModel,
    cfg: SystemConfig,
) -> float:
    """Wideband slope S0 in bits/s/Hz/(3 dB) per receive antenna (a + b = 1).

    Explicit moment form; algebraically identical to 2*c_dot^2*ln2/(-c_ddot)
    built from `first_derivative` and `second_derivative_sym`.
    """
    _require_memoryless(activity)
    e1, s2, w, _, _ = _moment_terms(samples, kz, sensing, activity)
    denom = cfg.theta * cfg.T * cfg.B * cfg.N * (s2 - e1**2) + cfg.N * w * LN2
    if denom <= 0:
        raise ValueError("degenerate ensemble: slope denominator is zero")
    return 2.0 * e1**2 * LN2 / denom


def uniform_closed_forms(
    cfg: SystemConfig,
    sensing: SensingModel,
    activity: ActivityModel,
    sigma_s2: float | None = None,
) -> tuple[float, float | None]:
    """Closed-form (ebn0_min, s0) for uniform power allocation over i.i.d.
    Gaussian fading, using the exact Gaussian trace moments
    E[tr(H^H H)] = NM, E[tr^2] = NM(NM+1), E[tr((H^H H)^2)] = NM(N+M).

    ebn0_min = ln2 / ((l1/sigma_s2 + l2) * N * M); s0 follows the matching
    moment-substituted expression and requires a + b = 1 (None otherwise).
    """
    if sigma_s2 is None:
        sigma_s2 = cfg.sigma_s2
    if sigma_s2 <= 0:
        raise ValueError("closed forms require sigma_s2 > 0")
    ell1, ell2 = detection_weights(sensing, activity)
    n, m = cfg.N, cfg.M
    l2w = ell1 / sigma_s2 + ell2
    ebn0 = LN2 / (l2w * n * m)
    if abs(activity.a + activity.b - 1.0) > 1e-12:
        return ebn0, None
    l4w = ell1 / sigma_s2**2 + ell2
    denom = cfg.theta * cfg.T * cfg.B * (l4w * m * (n * m + 1) - l2w**2 * n * m**2) \
        + l4w * m * (n + m) * LN2
    s0 = 2.0 * l2w**2 * m**2 / denom
    return ebn0, s0


def lowsnr_expansion(report: LowSnrReport, snr: float) -> float:
    """Second-order capacity approximation c_dot*snr + c_ddot*snr^2/2."""
    if snr < 0:
        raise ValueError(f"snr must be >= 0, got {snr}")
    second = 0.0 if report.c_ddot is None else report.c_ddot * snr**2 / 2.0
    return report.c_dot * snr + second


def lowsnr_report(
    samples: np.ndarray,
    kz: NoiseCovariance,
    sensing: SensingModel,
    activity: ActivityModel,
    cfg: SystemConfig,
) -> LowSnrReport:
    """Assemble every low-SNR figure of merit for one configuration."""
    _, _, _, m1, m2 = _moment_terms(samples, kz, sensing, activity)
    c_dot = first_derivative(samples, kz, sensing, activity)
    ebn0, ebn0_db = min_energy_per_bit(samples, kz, sensing, activity)
    ell1, ell2 = detection_weights(sensing, activity)
    memoryless = abs(activity.a + activity.b - 1.0) <= 1e-12
    c_ddot = second_derivative_sym(samples, kz, sensing, activity, cfg) if memoryless else None
    s0 = wideband_slope(samples, kz, sensing, activity, cfg) if memoryless else None
    return LowSnrReport(
        c_dot=c_dot,
        c_ddot=c_ddot,
        ebn0_min=ebn0,
        ebn0_min_db=ebn0_db,
        s0=s0,
        ell1=ell1,
        ell2=ell2,
        m1=m1,
        m2=m2,
    )
