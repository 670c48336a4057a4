# Effective capacity of the four-state sensing/activity service process.
#
# The link is a Markov-modulated service: each frame lands in one of four
# scenarios (busy/idle crossed with detected-busy/detected-idle), serves at
# rate r1 when detected busy, r2 when idle and detected idle, and zero in
# the miss-detection OFF state.  The log moment generating function of the
# accumulated service is log of the spectral radius of the rate-weighted
# transition matrix, which has rank <= 2 and therefore a closed-form
# largest eigenvalue.

import math
from dataclasses import dataclass

import numpy as np

from .config import ActivityModel, PowerPolicy, SensingModel, SystemConfig, p2_cap, snr_of
from .channel import NoiseCovariance
from .rates import GainEnsemble, ensemble_rates, precompute_gains

NORMALIZATIONS = ("per_hz", "per_dimension")


@dataclass(frozen=True)
class TransitionModel:
    """Four-state transition structure induced by PU activity and sensing.

    p_b holds the transition probabilities out of a busy-channel state
    (to states 1..4), p_i those out of an idle-channel state.  Rows 1-2 of
    the full 4x4 matrix equal p_b and rows 3-4 equal p_i, so the matrix
    has rank <= 2.
    """

    p_b: np.ndarray
    p_i: np.ndarray

    @property
    def r(self) -> np.ndarray:
        """The assembled 4x4 transition matrix."""
        return np.vstack([self.p_b, self.p_b, self.p_i, self.p_i])


@dataclass(frozen=True)
class EffCapResult:
    """Optimized effective capacity with the policy that attains it."""

    value: float
    mu_star: float
    p2_star: float
    normalization: str


def transition_probs(activity: ActivityModel, sensing: SensingModel) -> TransitionModel:
    """Transition probabilities of the joint activity/sensing chain.

    Sensing is independent per frame, so the destination state factors into
    the activity transition times the detection outcome in the new frame.
    Each row sums to one.
    """
    a, b = activity.a, activity.b
    p_d, p_f = sensing.p_d, sensing.p_f
    p_b = np.array([(1 - a) * p_d, (1 - a) * (1 - p_d), a * p_f, a * (1 - p_f)])
    p_i = np.array([b * p_d, b * (1 - p_d), (1 - b) * p_f, (1 - b) * (1 - p_f)])
    return TransitionModel(p_b=p_b, p_i=p_i)


def spectral_radius_rank2(theta_t1: float, theta_t2: float, tm: TransitionModel) -> float:
    """Largest eigenvalue magnitude of diag(T1, 1, T1, T2) @ R, closed form.

    T1 and T2 are the moment generating function values E[exp(-theta*T*r1)]
    and E[exp(-theta*T*r2)] of the busy- and idle-sensed service rates; the
    OFF state contributes the constant 1.  Because R has two distinct rows
    the weighted matrix has at most two nonzero eigenvalues and the radius
    reduces to the quadratic-root expression below.
    """
    pb1, pb2, pb3, pb4 = tm.p_b
    pi1, pi2, pi3, pi4 = tm.p_i
    t1, t2 = theta_t1, theta_t2
    s = (pb1 + pi3) * t1 + pi4 * t2 + pb2
    d = (pb1 - pi3) * t1 - pi4 * t2 + pb2
    cross = 4.0 * (pi1 * t1 + pi2) * (pb3 * t1 + pb4 * t2)
    return 0.5 * s + 0.5 * math.sqrt(d * d + cross)


def _as_gains(samples, kz: NoiseCovariance) -> GainEnsemble:
    if isinstance(samples, GainEnsemble):
        return samples
    return precompute_gains(samples, kz)


def _norm_factor(normalization: str, n: int) -> float:
    if normalization == "per_hz":
        return 1.0
    if normalization == "per_dimension":
        return float(n)
    raise ValueError(f"normalization must be one of {NORMALIZATIONS}, got {normalization!r}")


def effective_rate(
    samples,
    kz: NoiseCovariance,
    policy: PowerPolicy,
    cfg: SystemConfig,
    tm: TransitionModel,
    covariance_mode: str = "uniform",
    normalization: str = "per_hz",
) -> float:
    """Effective rate at a fixed power policy, in bits/s/Hz (per_hz) or
    bits/s/Hz/dimension (per_dimension).

    The MGF values are Monte Carlo means over the ensemble; `samples` may
    be a raw (count, N, M) array or a precomputed GainEnsemble.  Requires
    theta > 0; use `ergodic_capacity` for the vanishing-theta limit.
    """
    theta = cfg.theta
    if theta <= 0:
        raise ValueError("effective_rate requires theta > 0; use ergodic_capacity at theta = 0")
    gains = _as_gains(samples, kz)
    snr = snr_of(policy.p2, cfg)
    r1, r2 = ensemble_rates(gains, policy.mu * cfg.N * snr, cfg.N * snr, cfg.B, covariance_mode)
    t1 = float(np.mean(np.exp(-theta * cfg.T * r1)))
    t2 = float(np.mean(np.exp(-theta * cfg.T * r2)))
    sp = spectral_radius_rank2(t1, t2, tm)
    return -math.log(sp) / (theta * cfg.T * cfg.B * _norm_factor(normalization, cfg.N))


def effective_capacity(
    samples,
    kz: NoiseCovariance,
    cfg: SystemConfig,
    sensing: SensingModel,
    activity: ActivityModel,
    p_max: float,
    p_int: float,
    grid: int = 101,
    covariance_mode: str = "uniform",
    normalization: str = "per_hz",
) -> EffCapResult:
    """Maximize the effective rate over the feasible (mu, p2) rectangle.

    Uniform grid over mu in [0, 1]; for each mu the p2 axis is rescaled to
    [0, p2_cap(mu)] so the interference frontier is always sampled.  All
    grid points share the ensemble (common random numbers), which keeps the
    objective surface smooth and the argmax stable.
    """
    if grid < 2:
        raise ValueError(f"grid must have at least 2 points per axis, got {grid}")
    gains = _as_gains(samples, kz)
    tm = transition_probs(activity, sensing)
    best = (-math.inf, 0.0, 0.0)
    for mu in np.linspace(0.0, 1.0, grid):
        cap = p2_cap(p_max, p_int, sensing.p_d, mu)
        for p2 in np.linspace(0.0, cap, grid):
            pol = PowerPolicy(p_max=p_max, p_int=p_int, mu=float(mu), p2=float(p2))
            val = effective_rate(gains, kz, pol, cfg, tm, covariance_mode, normalization)
            if val > best[0]:
                best = (val, float(mu), float(p2))
    return EffCapResult(value=best[0], mu_star=best[1], p2_star=best[2], normalization=normalization)


def detection_weights(sensing: SensingModel, activity: ActivityModel) -> tuple[float, float]:
    """Stationary probabilities of (detected busy) and (idle and detected idle).

    These weight the r1 and r2 contributions in the ergodic limit and in
    every low-power formula: (b*p_d + a*p_f)/(a+b) and a*(1-p_f)/(a+b).
    """
    a, b = activity.a, activity.b
    w_busy = (b * sensing.p_d + a * sensing.p_f) / (a + b)
    w_idle = a * (1.0 - sensing.p_f) / (a + b)
    return w_busy, w_idle


def effective_rate_mc_stderr(
    samples,
    kz: NoiseCovariance,
    policy: PowerPolicy,
    cfg: SystemConfig,
    sensing: SensingModel,
    activity: ActivityModel,
    covariance_mode: str = "uniform",
) -> tuple[float, float]:
    """Effective rate (per_hz) with its Monte Carlo standard error.

    Only defined for memoryless activity (a + b = 1), where the spectral
    radius is linear in the two MGF means and the delta method applies:
    se(rate) = se(bracket) / (theta*T*B * bracket).  The per-sample bracket
    uses common random numbers for the busy and idle branches.
    """
    if abs(activity.a + activity.b - 1.0) > 1e-12:
        raise ValueError("standard error requires a + b = 1")
    theta = cfg.theta
    if theta <= 0:
        raise ValueError("requires theta > 0")
    gains = _as_gains(samples, kz)
    snr = snr_of(policy.p2, cfg)
    r1, r2 = ensemble_rates(gains, policy.mu * cfg.N * snr, cfg.N * snr, cfg.B, covariance_mode)
    a, b = activity.a, activity.b
    ell1 = b * sensing.p_d + a * sensing.p_f
    ell2 = a * (1.0 - sensing.p_f)
    off = b * (1.0 - sensing.p_d)
    bracket = ell1 * np.exp(-theta * cfg.T * r1) + ell2 * np.exp(-theta * cfg.T * r2) + off
    mean = float(bracket.mean())
    se = float(bracket.std(ddof=1)) / math.sqrt(len(bracket))
    rate = -math.log(mean) / (theta * cfg.T * cfg.B)
    return rate, se / (theta * cfg.T * cfg.B * mean)


def ergodic_capacity(
    samples,
    kz: NoiseCovariance,
    policy: PowerPolicy,
    cfg: SystemConfig,
    sensing: SensingModel,
    activity: ActivityModel,
    covariance_mode: str = "uniform",
    normalization: str = "per_hz",
) -> float:
    """Vanishing-theta limit of the effective rate on the same ensemble.

    Weighted average of the mean rates, the weights being the stationary
    probability of transmitting at r1 (detected busy) and at r2 (idle and
    detected idle); the OFF state contributes nothing.
    """
    gains = _as_gains(samples, kz)
    snr = snr_of(policy.p2, cfg)
    r1, r2 = ensemble_rates(gains, policy.mu * cfg.N * snr, cfg.N * snr, cfg.B, covariance_mode)
    w_busy, w_idle = detection_weights(sensing, activity)
    mean_rate = w_busy * float(np.mean(r1)) + w_idle * float(np.mean(r2))
    return mean_rate / (cfg.B * _norm_factor(normalization, cfg.N))
