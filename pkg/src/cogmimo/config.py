# System parameters and the power/interference constraint algebra.
#
# All powers are linear watts; dB conversion happens only at the CLI
# boundary.  Every type validates eagerly because each downstream formula
# assumes these ranges.

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class SystemConfig:
    """Scalar link parameters shared by every analysis.

    T:        frame duration over which the fading stays constant [s]
    B:        bandwidth [Hz]
    sigma_n2: noise variance per receive dimension
    sigma_s2: interference variance per receive dimension (0 = no
              primary-user interference)
    M, N:     transmit / receive antenna counts
    theta:    QoS exponent, the target decay rate of the queue-length
              tail [1/bits]; theta = 0 means no queueing constraint
    """

    T: float
    B: float
    sigma_n2: float
    sigma_s2: float
    M: int
    N: int
    theta: float

    def __post_init__(self):
        if self.T <= 0:
            raise ValueError(f"frame duration T must be > 0, got {self.T}")
        if self.B <= 0:
            raise ValueError(f"bandwidth B must be > 0, got {self.B}")
        if self.sigma_n2 <= 0:
            raise ValueError(f"noise variance sigma_n2 must be > 0, got {self.sigma_n2}")
        if self.sigma_s2 < 0:
            raise ValueError(f"interference variance sigma_s2 must be >= 0, got {self.sigma_s2}")
        if self.M < 1 or self.N < 1:
            raise ValueError(f"antenna counts must be >= 1, got M={self.M}, N={self.N}")
        if self.theta < 0:
            raise ValueError(f"QoS exponent theta must be >= 0, got {self.theta}")


@dataclass(frozen=True)
class SensingModel:
    """Channel-sensing quality: detection and false-alarm probabilities."""

    p_d: float
    p_f: float

    def __post_init__(self):
        if not 0.0 <= self.p_d <= 1.0:
            raise ValueError(f"detection probability p_d must be in [0,1], got {self.p_d}")
        if not 0.0 <= self.p_f <= 1.0:
            raise ValueError(f"false-alarm probability p_f must be in [0,1], got {self.p_f}")


@dataclass(frozen=True)
class ActivityModel:
    """Two-state Markov chain for the primary-user occupancy.

    a: probability of transitioning busy -> idle
    b: probability of transitioning idle -> busy
    a + b > 0 so that a stationary distribution exists.
    """

    a: float
    b: float

    def __post_init__(self):
        if not 0.0 <= self.a <= 1.0:
            raise ValueError(f"busy->idle probability a must be in [0,1], got {self.a}")
        if not 0.0 <= self.b <= 1.0:
            raise ValueError(f"idle->busy probability b must be in [0,1], got {self.b}")
        if self.a + self.b <= 0.0:
            raise ValueError("a + b must be > 0 for a stationary distribution")

    @property
    def p_busy(self) -> float:
        """Stationary probability that the channel is busy."""
        return self.b / (self.a + self.b)

    @property
    def p_idle(self) -> float:
        return self.a / (self.a + self.b)


@dataclass(frozen=True)
class PowerPolicy:
    """Transmit-power policy of the secondary link.

    p_max: peak average power [W]
    p_int: average-interference budget [W], already normalized by the
           fading power and path loss of the secondary-to-primary channel
    mu:    busy/idle power ratio in [0,1]; busy-sensed power is mu * p2
    p2:    idle-sensed transmit power [W]

    The interference bound p2 <= p_int / (p_d*mu + 1 - p_d) couples to the
    sensing model and is checked by `check_policy`, not here.
    """

    p_max: float
    p_int: float
    mu: float
    p2: float

    def __post_init__(self):
        if self.p_max < 0 or self.p_int < 0:
            raise ValueError("p_max and p_int must be >= 0")
        if not 0.0 <= self.mu <= 1.0:
            raise ValueError(f"power ratio mu must be in [0,1], got {self.mu}")
        if self.p2 < 0:
            raise ValueError(f"idle-sensed power p2 must be >= 0, got {self.p2}")
        if self.p2 > self.p_max * (1 + 1e-12):
            raise ValueError(f"p2={self.p2} exceeds p_max={self.p_max}")

    @property
    def p1(self) -> float:
        """Busy-sensed transmit power mu * p2; never exceeds p2."""
        return self.mu * self.p2


def p2_cap(p_max: float, p_int: float, p_d: float, mu: float) -> float:
    """Largest feasible idle-sensed power for a given power ratio.

    Returns min{p_max, p_int / (p_d*mu + 1 - p_d)}.  The denominator is
    the fraction of time the transmission lands in an occupied band,
    weighted by the power ratio.  It vanishes only for p_d = 1, mu = 0,
    where the busy channel is never transmitted into and the peak
    constraint alone applies.
    """
    denom = p_d * mu + (1.0 - p_d)
    if denom <= 0.0:
        return p_max
    return min(p_max, p_int / denom)


def mu_cap(p2: float, p_int: float, p_d: float) -> float:
    """Largest feasible busy/idle power ratio for a given idle power.

    Returns min{max{(p_int - p2*(1-p_d)) / (p2*p_d), 0}, 1}.  Clamps to 1
    when the budget is loose and to 0 once p2*(1-p_d) >= p_int, i.e. the
    missed-detection leakage alone exhausts the budget.
    """
    if p2 <= 0:
        raise ValueError(f"mu_cap requires p2 > 0, got {p2}")
    leak = p2 * (1.0 - p_d)
    denom = p2 * p_d
    if denom == 0.0:
        # ratio formula degenerates; the budget binds through leakage only
        return 1.0 if leak <= p_int else 0.0
    ratio = (p_int - leak) / denom
    return min(max(ratio, 0.0), 1.0)


def snr_of(p2: float, cfg: SystemConfig) -> float:
    """Signal-to-noise ratio p2 / (N * B * sigma_n2) for idle-sensed frames.

    Busy-sensed frames see mu times this value.
    """
    if p2 < 0:
        raise ValueError(f"p2 must be >= 0, got {p2}")
    return p2 / (cfg.N * cfg.B * cfg.sigma_n2)


def check_policy(policy: PowerPolicy, sensing: SensingModel, tol: float = 1e-9) -> None:
    """Raise if the policy violates the average-interference budget."""
    cap = p2_cap(policy.p_max, policy.p_int, sensing.p_d, policy.mu)
    if policy.p2 > cap * (1 + tol):
        raise ValueError(
            f"p2={policy.p2} exceeds feasible cap {cap} "
            f"(p_int={policy.p_int}, p_d={sensing.p_d}, mu={policy.mu})"
        )


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    if x <= 0:
        return -math.inf
    return 10.0 * math.log10(x)
