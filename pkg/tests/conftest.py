import numpy as np
import pytest

from cogmimo import (
    ActivityModel,
    SensingModel,
    SystemConfig,
    build_kz,
    identity_interference,
    precompute_gains,
    sample_rayleigh,
)

# Baseline fixture set used across the suite: 3x3 link, unit noise and
# interference variances, detection 0.92 / false alarm 0.21, memoryless
# activity a = b = 0.5.


@pytest.fixture(scope="session")
def cfg_default():
    return SystemConfig(T=0.1, B=100.0, sigma_n2=1.0, sigma_s2=1.0, M=3, N=3, theta=0.1)


@pytest.fixture(scope="session")
def sensing_default():
    return SensingModel(p_d=0.92, p_f=0.21)


@pytest.fixture(scope="session")
def activity_default():
    return ActivityModel(a=0.5, b=0.5)


@pytest.fixture(scope="session")
def kz3():
    return build_kz(identity_interference(3), 1.0, 1.0)


@pytest.fixture(scope="session")
def ens3(kz3):
    """10k-sample 3x3 ensemble with precomputed gains."""
    samples = sample_rayleigh(3, 3, 10_000, seed=101)
    return samples, precompute_gains(samples, kz3)
