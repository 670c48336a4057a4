# Exact effective rate for i.i.d. Rayleigh fading with uniform power
# allocation.
#
# The moment generating function E[exp(-theta*T*rate)] of the log-det rate
# is a ratio of a Hankel determinant to a product of Gamma factors.  Each
# Hankel entry is a smooth integral against the exp(-z) weight, evaluated
# by Gauss-Laguerre quadrature with order doubling until two successive
# orders agree.

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .config import ActivityModel, PowerPolicy, SensingModel, SystemConfig, snr_of

LN2 = math.log(2.0)
GL_MIN_ORDER = 32
GL_MAX_ORDER = 4096
GL_REL_TOL = 1e-10


@dataclass(frozen=True)
class HankelSpec:
    """Shape and integrand parameters of the rate-MGF Hankel matrix.

    k:        matrix size, min(M, N)
    d:        antenna-count gap, max(M, N) - min(M, N)
    exponent: theta*T*B*log2(e), the power applied to the SNR kernel
    snr_arg:  scalar SNR argument fed to the kernel (pre-scaled for the
              busy-sensed branch)
    ratio:    N/M factor inside the kernel (1 + ratio*snr_arg*z)
    """

    k: int
    d: int
    exponent: float
    snr_arg: float
    ratio: float = 1.0

    def __post_init__(self):
        if self.k < 1 or self.d < 0:
            raise ValueError(f"need k >= 1 and d >= 0, got k={self.k}, d={self.d}")
        if self.exponent < 0 or self.snr_arg < 0 or self.ratio <= 0:
            raise ValueError("exponent and snr_arg must be >= 0, ratio > 0")


@lru_cache(maxsize=None)
def _gl_nodes(order: int):
    # Golub-Welsch for the exp(-z) weight on [0, inf): the symmetric
    # tridiagonal recurrence matrix has diagonal 2i+1 and off-diagonal i.
    # Stable at every order used here, unlike the polynomial-recurrence
    # node solvers which overflow beyond a few hundred points.
    diag = 2.0 * np.arange(order) + 1.0
    off = np.arange(1.0, float(order))
    x, v = eigh_tridiagonal(diag, off)
    return x, v[0] ** 2


def _integer_gamma(n: int) -> float:
    """Gamma at a positive integer argument, exact up to 170!."""
    if n < 1 or n > 171:
        raise ValueError(f"integer gamma argument out of range: {n}")
    return float(math.factorial(n - 1))


def hankel_entry(spec: HankelSpec, m: int, n: int) -> float:
    """Entry (m, n) of the Hankel matrix, 1-based indices.

    Integral of (1 + ratio*snr_arg*z)^(-exponent) * z^(m+n+d-2) * exp(-z)
    over z >= 0.  Quadrature order doubles from 32 until two successive
    orders agree to 1e-10 relative; non-convergence raises rather than
    silently truncating.
    """
    if not (1 <= m <= spec.k and 1 <= n <= spec.k):
        raise ValueError(f"indices must be in 1..{spec.k}, got ({m}, {n})")
    p = m + n + spec.d - 2
    q = spec.ratio * spec.snr_arg
    if q == 0.0 or spec.exponent == 0.0:
        return _integer_gamma(p + 1)
    prev = None
    order = GL_MIN_ORDER
    while order <= GL_MAX_ORDER:
        x, w = _gl_nodes(order)
        val = float(np.sum(w * np.exp(-spec.exponent * np.log1p(q * x) + p * np.log(x))))
        if prev is not None and abs(val - prev) <= GL_REL_TOL * max(abs(val), 1e-300):
            return val
        prev = val
        order *= 2
    raise RuntimeError(
        f"Gauss-Laguerre did not converge by order {GL_MAX_ORDER} "
        f"(p={p}, exponent={spec.exponent}, snr_arg={spec.snr_arg})"
    )


def rate_mgf(spec: HankelSpec) -> float:
    """det G / prod_i Gamma(d+i)Gamma(i): the value E[exp(-theta*T*rate)].

    The Gamma product is folded into the determinant as row and column
    scalings (row m by Gamma(d+m), column n by Gamma(n)) so the scaled
    entries stay O(1) and the small LU factorization is well conditioned.
    Always in (0, 1] for exponent >= 0.
    """
    k = spec.k
    g = np.empty((k, k))
    for m in range(1, k + 1):
        for n in range(1, k + 1):
            g[m - 1, n - 1] = hankel_entry(spec, m, n) / (
                _integer_gamma(spec.d + m) * _integer_gamma(n)
            )
    return float(np.linalg.det(g))


def closed_form_effective_rate(
    cfg: SystemConfig,
    sensing: SensingModel,
    activity: ActivityModel,
    policy: PowerPolicy,
) -> float:
    """Exact effective rate in bits/s/Hz for i.i.d. Rayleigh fading,
    uniform power allocation, and memoryless activity (a + b = 1).

    The busy-sensed branch reuses the idle kernel with the SNR argument
    substituted by mu*sigma_n2*snr/(sigma_s2 + sigma_n2), which is the
    whitened effective SNR when the interference covariance is white.
    """
    if abs(activity.a + activity.b - 1.0) > 1e-12:
        raise ValueError(
            "closed-form effective rate requires a + b = 1, "
            f"got a+b={activity.a + activity.b}"
        )
    if cfg.theta <= 0:
        raise ValueError("closed-form effective rate requires theta > 0")
    k, d = min(cfg.M, cfg.N), abs(cfg.M - cfg.N)
    exponent = cfg.theta * cfg.T * cfg.B / LN2
    ratio = cfg.N / cfg.M
    snr = snr_of(policy.p2, cfg)
    busy_arg = policy.mu * cfg.sigma_n2 * snr / (cfg.sigma_s2 + cfg.sigma_n2)
    mgf_busy = rate_mgf(HankelSpec(k=k, d=d, exponent=exponent, snr_arg=busy_arg, ratio=ratio))
    mgf_idle = rate_mgf(HankelSpec(k=k, d=d, exponent=exponent, snr_arg=snr, ratio=ratio))
    a, b = activity.a, activity.b
    ell1 = b * sensing.p_d + a * sensing.p_f
    ell2 = a * (1.0 - sensing.p_f)
    off = b * (1.0 - sensing.p_d)
    return -math.log(ell1 * mgf_busy + ell2 * mgf_idle + off) / (cfg.theta * cfg.T * cfg.B)
