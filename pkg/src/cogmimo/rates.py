# Instantaneous transmission rates and scenario capacities.
#
# Rates are log-det expressions in the whitened (busy-sensed) or plain
# (idle-sensed) channel Gram matrix.  The per-sample API mirrors the
# scalar formulas; the GainEnsemble path precomputes per-sample Gram
# eigenvalues once so that sweeps and grid searches only pay for cheap
# elementwise work per operating point.

import math
from dataclasses import dataclass

import numpy as np

from .config import PowerPolicy, SystemConfig, snr_of
from .channel import NoiseCovariance, hermitian_eig

LN2 = math.log(2.0)
ZERO_MODE_REL = 1e-12
TIE_REL_TOL = 1e-9

COVARIANCE_MODES = ("uniform", "waterfill", "beamform")


@dataclass(frozen=True)
class ScenarioRates:
    """Busy/idle transmission rates r1, r2 and the four scenario capacities.

    c[0]..c[3] are the capacities of (busy, detected busy), (busy, detected
    idle), (idle, detected busy), (idle, detected idle).  Rates and
    capacities are in bits/s.
    """

    r1: float
    r2: float
    c: tuple[float, float, float, float]


def log_det_rate(
    h: np.ndarray,
    k_x: np.ndarray,
    weight: float,
    kz_inv: np.ndarray | None = None,
    bandwidth: float = 1.0,
) -> float:
    """B * log2 det[I + weight * H K_x H^H (K_z^{-1} or I)] in bits/s.

    `weight` is the effective SNR scalar: mu*N*snr for the busy-sensed
    rate (with kz_inv present) and N*snr for the idle-sensed rate (without).
    The determinant argument is I plus a PSD-spectrum matrix, so the result
    is always >= 0.
    """
    if weight < 0:
        raise ValueError(f"weight must be >= 0, got {weight}")
    h = np.asarray(h)
    a = h @ k_x @ h.conj().T
    if kz_inv is not None:
        a = a @ kz_inv
    _, logdet = np.linalg.slogdet(np.eye(a.shape[0]) + weight * a)
    return bandwidth * logdet.real / LN2


def waterfill(gains: np.ndarray, total: float) -> np.ndarray:
    """Power allocation maximizing sum log(1 + p_i * g_i) with sum p_i = total.

    Exact active-set solution: sort gains descending, find the largest
    active set whose common water level keeps every allocation nonnegative.
    Gains <= 0 receive zero power.
    """
    gains = np.asarray(gains, dtype=float)
    if gains.size == 0:
        raise ValueError("waterfill requires at least one gain")
    if total <= 0:
        raise ValueError(f"total power must be > 0, got {total}")
    alloc = np.zeros_like(gains)
    order = np.argsort(gains)[::-1]
    g = gains[order]
    pos = g > 0
    if not pos.any():
        return alloc
    g = g[pos]  # positive gains form a prefix of the descending sort
    inv = 1.0 / g
    # water level for the top-j active set; feasible while nu >= 1/g_j
    for j in range(len(g), 0, -1):
        nu = (total + inv[:j].sum()) / j
        if nu * g[j - 1] >= 1.0:
            break
    alloc[order[:j]] = np.maximum(nu - inv[:j], 0.0)
    return alloc


def capacity_covariance(
    h: np.ndarray,
    weight: float,
    kz_inv: np.ndarray | None = None,
) -> np.ndarray:
    """Trace-1 input covariance maximizing the log-det rate at this weight.

    Eigendecomposes H^H (K_z^{-1}) H and water-fills the unit trace budget
    across its positive modes.  As weight -> 0 the allocation collapses to
    the top eigenvector (beamforming); as weight grows it approaches
    uniform over the active modes.
    """
    h = np.asarray(h)
    m = h.shape[1]
    g = h.conj().T @ (kz_inv @ h if kz_inv is not None else h)
    lam, v = hermitian_eig(0.5 * (g + g.conj().T))
    lam = np.where(lam > ZERO_MODE_REL * max(lam[0], 0.0), lam, 0.0)
    if weight <= 0 or lam[0] <= 0:
        return np.eye(m, dtype=complex) / m
    p = waterfill(weight * lam, 1.0)
    return (v * p) @ v.conj().T


def beamform_covariance(
    h: np.ndarray,
    kz_inv: np.ndarray | None = None,
    tie_rel_tol: float = TIE_REL_TOL,
) -> tuple[np.ndarray, int]:
    """Rank-m covariance spanning the maximal-eigenvalue eigenspace.

    Ties within tie_rel_tol * lambda_max count as part of the top eigenspace
    and receive equal weights 1/m.  Returns (covariance, multiplicity).
    """
    h = np.asarray(h)
    m_tx = h.shape[1]
    g = h.conj().T @ (kz_inv @ h if kz_inv is not None else h)
    lam, v = hermitian_eig(0.5 * (g + g.conj().T))
    if lam[0] <= 0:
        return np.eye(m_tx, dtype=complex) / m_tx, m_tx
    mult = int(np.sum(lam >= lam[0] * (1.0 - tie_rel_tol)))
    u = v[:, :mult]
    return (u @ u.conj().T) / mult, mult


def _covariance_for(h, weight, kz_inv, mode):
    m = h.shape[1]
    if mode == "uniform":
        return np.eye(m, dtype=complex) / m
    if mode == "waterfill":
        return capacity_covariance(h, weight, kz_inv)
    if mode == "beamform":
        return beamform_covariance(h, kz_inv)[0]
    raise ValueError(f"unknown covariance mode {mode!r}")


def scenario_rates(
    h: np.ndarray,
    kz: NoiseCovariance,
    policy: PowerPolicy,
    cfg: SystemConfig,
    covariance_mode: str = "uniform",
) -> ScenarioRates:
    """Rates r1, r2 and capacities C1..C4 for one channel realization.

    r1 applies when the channel is sensed busy (weight mu*N*snr, whitened
    by K_z^{-1}); r2 when sensed idle (weight N*snr, unwhitened).  Each
    capacity pairs its own kernel with the covariance the mode selects for
    that kernel, so r1 = C1 and r2 = C4 always, and r1 <= C3 by the
    determinant inequality for K_z^{-1} with eigenvalues <= 1.
    """
    snr = snr_of(policy.p2, cfg)
    w1 = policy.mu * cfg.N * snr
    w2 = cfg.N * snr
    kzi = kz.k_z_inv
    bw = cfg.B

    k1_busy = _covariance_for(h, w1, kzi, covariance_mode)
    k2_busy = _covariance_for(h, w2, kzi, covariance_mode)
    k1_idle = _covariance_for(h, w1, None, covariance_mode)
    k2_idle = _covariance_for(h, w2, None, covariance_mode)

    c1 = log_det_rate(h, k1_busy, w1, kzi, bw)
    c2 = log_det_rate(h, k2_busy, w2, kzi, bw)
    c3 = log_det_rate(h, k1_idle, w1, None, bw)
    c4 = log_det_rate(h, k2_idle, w2, None, bw)
    return ScenarioRates(r1=c1, r2=c4, c=(c1, c2, c3, c4))


# --- vectorized ensemble path ------------------------------------------


@dataclass(frozen=True)
class GainEnsemble:
    """Per-sample Gram eigenvalues, descending along the last axis.

    busy: eigenvalues of H^H K_z^{-1} H, shape (count, min(M, N))
    idle: eigenvalues of H^H H, same shape
    m_tx: transmit antenna count (uniform allocation divides by it)
    """

    busy: np.ndarray
    idle: np.ndarray
    m_tx: int

    @property
    def count(self) -> int:
        return self.busy.shape[0]


def _gram_eigvals(mats: np.ndarray) -> np.ndarray:
    """Nonzero-candidate eigenvalues of stacked H H^H, descending."""
    count, n, m = mats.shape
    if m <= n:
        g = np.einsum("sij,sik->sjk", mats.conj(), mats)
    else:
        g = np.einsum("sij,skj->sik", mats, mats.conj())
    ev = np.linalg.eigvalsh(g)
    return np.maximum(ev[:, ::-1], 0.0)


def precompute_gains(
    samples: np.ndarray,
    kz: NoiseCovariance,
    chunk: int = 200_000,
) -> GainEnsemble:
    """Eigenvalue precomputation for a channel ensemble, chunked for memory."""
    samples = np.asarray(samples)
    count, n, m = samples.shape
    k = min(m, n)
    busy = np.empty((count, k))
    idle = np.empty((count, k))
    for lo in range(0, count, chunk):
        hi = min(lo + chunk, count)
        block = samples[lo:hi]
        idle[lo:hi] = _gram_eigvals(block)
        busy[lo:hi] = _gram_eigvals(np.matmul(kz.k_z_inv_sqrt, block))
    return GainEnsemble(busy=busy, idle=idle, m_tx=m)


def _uniform_rates(ev, weight, m_tx, bandwidth):
    if weight <= 0:
        return np.zeros(ev.shape[0])
    return bandwidth * np.sum(np.log1p((weight / m_tx) * ev), axis=1) / LN2


def _beamform_rates(ev, weight, bandwidth):
    if weight <= 0:
        return np.zeros(ev.shape[0])
    top = ev[:, 0]
    mult = np.sum(ev >= top[:, None] * (1.0 - TIE_REL_TOL), axis=1)
    return bandwidth * mult * np.log1p(weight * top / mult) / LN2


def _waterfill_rates(ev, weight, bandwidth):
    if weight <= 0:
        return np.zeros(ev.shape[0])
    g = weight * ev
    pos = g > 0
    inv = np.where(pos, 1.0 / np.where(pos, g, 1.0), 0.0)
    npos = pos.sum(axis=1)
    cum_inv = np.cumsum(inv, axis=1)
    j = np.arange(1, g.shape[1] + 1)
    nu = (1.0 + cum_inv) / j
    feasible = (nu * np.where(pos, g, np.inf) >= 1.0) & pos
    jstar = np.maximum(feasible.sum(axis=1), 1)
    rows = np.arange(g.shape[0])
    nu_star = nu[rows, jstar - 1]
    # active modes share the water level: 1 + p_i g_i = nu * g_i
    cum_log = np.cumsum(np.where(pos, np.log(np.where(pos, g, 1.0)), 0.0), axis=1)
    logsum = jstar * np.log(nu_star) + cum_log[rows, jstar - 1]
    return np.where(npos > 0, bandwidth * logsum / LN2, 0.0)


def ensemble_rates(
    gains: GainEnsemble,
    weight_busy: float,
    weight_idle: float,
    bandwidth: float,
    covariance_mode: str = "uniform",
) -> tuple[np.ndarray, np.ndarray]:
    """Per-sample (r1, r2) in bits/s for every sample of the ensemble."""
    if covariance_mode == "uniform":
        r1 = _uniform_rates(gains.busy, weight_busy, gains.m_tx, bandwidth)
        r2 = _uniform_rates(gains.idle, weight_idle, gains.m_tx, bandwidth)
    elif covariance_mode == "beamform":
        r1 = _beamform_rates(gains.busy, weight_busy, bandwidth)
        r2 = _beamform_rates(gains.idle, weight_idle, bandwidth)
    elif covariance_mode == "waterfill":
        r1 = _waterfill_rates(gains.busy, weight_busy, bandwidth)
        r2 = _waterfill_rates(gains.idle, weight_idle, bandwidth)
    else:
        raise ValueError(f"unknown covariance mode {covariance_mode!r}")
    return r1, r2
