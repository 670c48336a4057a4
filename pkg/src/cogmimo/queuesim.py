# Frame-level queue simulation validating that the QoS exponent really is
# the buffer-tail decay rate when the arrival rate equals the effective
# capacity.

import math
from dataclasses import dataclass

import numpy as np

from .config import ActivityModel, PowerPolicy, SensingModel, SystemConfig, snr_of
from .channel import build_kz, identity_interference
from .rates import GainEnsemble, ensemble_rates, _gram_eigvals


@dataclass(frozen=True)
class QueueTrace:
    """One simulated queue path.

    queue_bits[t] = max(0, queue_bits[t-1] + arrivals - service[t]);
    service is T*r1 in states 1 and 3, T*r2 in state 4 and zero in the
    miss-detection state 2 (those bits stay in the queue).
    """

    queue_bits: np.ndarray
    arrivals: float
    service: np.ndarray
    state_seq: np.ndarray


@dataclass(frozen=True)
class DecayEstimate:
    """Tail-decay regression result: log Pr(Q >= q) ~ -theta_hat * q."""

    theta_hat: float
    r_squared: float
    thresholds: np.ndarray


def _activity_path(rng, activity: ActivityModel, frames: int) -> np.ndarray:
    """Busy/idle sequence started from the stationary distribution."""
    a, b = activity.a, activity.b
    u = rng.random(frames)
    busy = np.empty(frames, dtype=bool)
    state = bool(rng.random() < activity.p_busy)
    for t in range(frames):
        state = (u[t] >= a) if state else (u[t] < b)
        busy[t] = state
    return busy


def simulate(
    cfg: SystemConfig,
    sensing: SensingModel,
    activity: ActivityModel,
    policy: PowerPolicy,
    arrival_bits_per_frame: float,
    frames: int,
    seed: int,
    covariance_mode: str = "uniform",
    chunk: int = 200_000,
) -> QueueTrace:
    """Simulate `frames` steps of the sensing/transmission queue.

    Per frame: evolve the activity chain, draw the sensing outcome, draw an
    independent channel realization, serve at the scenario rate, and apply
    the queue recursion.  Deterministic for a fixed seed; the channel
    eigenvalue work is chunked so memory stays flat.
    """
    if frames < 1:
        raise ValueError(f"frames must be >= 1, got {frames}")
    if arrival_bits_per_frame < 0:
        raise ValueError("arrival must be >= 0")
    rng = np.random.Generator(np.random.Philox(key=seed))

    busy = _activity_path(rng, activity, frames)
    u_det = rng.random(frames)
    detected_busy = np.where(busy, u_det < sensing.p_d, u_det < sensing.p_f)
    state_seq = np.where(
        busy, np.where(detected_busy, 1, 2), np.where(detected_busy, 3, 4)
    ).astype(np.int8)

    kz = build_kz(identity_interference(cfg.N), cfg.sigma_s2, cfg.sigma_n2)
    snr = snr_of(policy.p2, cfg)
    w1 = policy.mu * cfg.N * snr
    w2 = cfg.N * snr

    service = np.empty(frames)
    for lo in range(0, frames, chunk):
        hi = min(lo + chunk, frames)
        block = np.sqrt(0.5) * (
            rng.standard_normal((hi - lo, cfg.N, cfg.M))
            + 1j * rng.standard_normal((hi - lo, cfg.N, cfg.M))
        )
        idle_ev = _gram_eigvals(block)
        busy_ev = _gram_eigvals(np.matmul(kz.k_z_inv_sqrt, block))
        gains = GainEnsemble(busy=busy_ev, idle=idle_ev, m_tx=cfg.M)
        r1, r2 = ensemble_rates(gains, w1, w2, cfg.B, covariance_mode)
        s = state_seq[lo:hi]
        service[lo:hi] = np.where(
            detected_busy[lo:hi], cfg.T * r1, np.where(s == 2, 0.0, cfg.T * r2)
        )

    # Lindley recursion via the reflected-walk identity:
    # q_t = S_t - min(0, min_{j<=t} S_j) with S the cumulative net input.
    increments = arrival_bits_per_frame - service
    s_cum = np.cumsum(increments)
    queue = s_cum - np.minimum.accumulate(np.minimum(s_cum, 0.0))
    return QueueTrace(
        queue_bits=queue,
        arrivals=arrival_bits_per_frame,
        service=service,
        state_seq=state_seq,
    )


def auto_thresholds(queue: np.ndarray, n_points: int = 8) -> np.ndarray:
    """Tail thresholds at log-spaced exceedance probabilities 1e-1 .. 1e-2.

    The decay law holds only deep in the tail, but the deepest observable
    percentiles of a finite run are truncated by the path maximum and bias
    the slope upward, so the window stops at the 99th percentile.
    """
    probs = np.logspace(-1.0, -2.0, n_points)
    return np.unique(np.quantile(queue, 1.0 - probs))


def estimate_decay(
    trace: QueueTrace | np.ndarray,
    thresholds: np.ndarray | None = None,
    warmup_frac: float = 0.1,
) -> DecayEstimate:
    """Least-squares slope of log Pr(Q >= q) against q over the thresholds.

    Discards a warm-up prefix (default 10% of frames).  Requires at least
    three strictly increasing thresholds with nonzero empirical tails.
    """
    queue = trace.queue_bits if isinstance(trace, QueueTrace) else np.asarray(trace)
    queue = queue[int(len(queue) * warmup_frac):]
    if thresholds is None:
        thresholds = auto_thresholds(queue)
    thresholds = np.unique(np.asarray(thresholds, dtype=float))
    tail = np.array([(queue >= t).mean() for t in thresholds])
    keep = tail > 0
    thresholds, tail = thresholds[keep], tail[keep]
    if len(thresholds) < 3:
        raise ValueError("fewer than 3 thresholds with nonzero empirical tail")
    y = np.log(tail)
    design = np.vstack([thresholds, np.ones_like(thresholds)]).T
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    fit = design @ coef
    ss_res = float(np.sum((y - fit) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    return DecayEstimate(
        theta_hat=max(-float(coef[0]), 0.0),
        r_squared=r2,
        thresholds=thresholds,
    )
