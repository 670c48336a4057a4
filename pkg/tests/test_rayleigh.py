import math

import numpy as np
import pytest
import scipy.special as sps

from cogmimo import (
    ActivityModel,
    HankelSpec,
    PowerPolicy,
    SensingModel,
    SystemConfig,
    closed_form_effective_rate,
    effective_rate_mc_stderr,
    ergodic_capacity,
    hankel_entry,
    rate_mgf,
    build_kz,
    identity_interference,
    precompute_gains,
    sample_rayleigh,
)


def hyperu_oracle(p, e, q):
    """Independent closed form for the kernel integral via Tricomi's U."""
    return q ** (-p - 1) * sps.gamma(p + 1) * sps.hyperu(p + 1, p + 2 - e, 1.0 / q)


def test_hankel_entry_gamma_reduction():
    # Gamma(m+n+d-1) when either reduction applies
    spec = HankelSpec(k=2, d=1, exponent=0.0, snr_arg=5.0)
    assert hankel_entry(spec, 1, 2) == pytest.approx(math.factorial(2))
    spec0 = HankelSpec(k=2, d=1, exponent=3.0, snr_arg=0.0)
    assert hankel_entry(spec0, 2, 2) == pytest.approx(math.factorial(3))


def test_hankel_entry_exponential_integral_identity():
    spec = HankelSpec(k=1, d=0, exponent=1.0, snr_arg=1.0)
    expected = math.e * sps.exp1(1.0)
    assert hankel_entry(spec, 1, 1) == pytest.approx(expected, rel=1e-10)
    assert expected == pytest.approx(0.59634736232, rel=1e-9)


@pytest.mark.parametrize("e", [0.1443, 1.4427, 14.427])
@pytest.mark.parametrize("q", [0.05, 0.5, 5.0, 10.0])
def test_hankel_entry_against_hyperu(e, q):
    spec = HankelSpec(k=3, d=0, exponent=e, snr_arg=q)
    for m, n in [(1, 1), (2, 3), (3, 3)]:
        got = hankel_entry(spec, m, n)
        ref = hyperu_oracle(m + n - 2, e, q)
        assert got == pytest.approx(ref, rel=1e-8)


def test_hankel_entry_index_validation():
    spec = HankelSpec(k=2, d=0, exponent=1.0, snr_arg=1.0)
    with pytest.raises(ValueError):
        hankel_entry(spec, 0, 1)
    with pytest.raises(ValueError):
        hankel_entry(spec, 1, 3)


def test_hankel_structure():
    # entries depend on m+n only
    spec = HankelSpec(k=3, d=1, exponent=2.2, snr_arg=0.7)
    assert hankel_entry(spec, 1, 3) == pytest.approx(hankel_entry(spec, 2, 2), rel=1e-12)
    assert hankel_entry(spec, 2, 3) == pytest.approx(hankel_entry(spec, 3, 2), rel=1e-12)


def test_hankel_entry_nonconvergence_reported():
    # a branch point at -1e-8 defeats any practical quadrature order
    spec = HankelSpec(k=1, d=0, exponent=0.3, snr_arg=1e8)
    with pytest.raises(RuntimeError):
        hankel_entry(spec, 1, 1)


@pytest.mark.parametrize("mn,d", [(1, 0), (2, 0), (3, 0), (2, 1)])
def test_rate_mgf_range_and_zero_snr(mn, d):
    spec = HankelSpec(k=mn, d=d, exponent=1.4427, snr_arg=0.0)
    assert rate_mgf(spec) == pytest.approx(1.0, rel=1e-12)
    for snr in (0.1, 1.0, 10.0):
        val = rate_mgf(HankelSpec(k=mn, d=d, exponent=1.4427, snr_arg=snr, ratio=1.0))
        assert 0.0 < val <= 1.0


def _defaults(theta=0.1, mn=3):
    cfg = SystemConfig(T=0.1, B=100.0, sigma_n2=1.0, sigma_s2=1.0, M=mn, N=mn, theta=theta)
    return cfg, SensingModel(p_d=0.92, p_f=0.21), ActivityModel(a=0.5, b=0.5)


def test_closed_form_zero_power():
    cfg, sen, act = _defaults()
    pol = PowerPolicy(p_max=10.0, p_int=10.0, mu=1.0, p2=0.0)
    assert closed_form_effective_rate(cfg, sen, act, pol) == pytest.approx(0.0, abs=1e-12)


def test_closed_form_requires_memoryless_and_positive_theta():
    cfg, sen, _ = _defaults()
    pol = PowerPolicy(p_max=10.0, p_int=10.0, mu=1.0, p2=10.0)
    with pytest.raises(ValueError):
        closed_form_effective_rate(cfg, sen, ActivityModel(a=0.3, b=0.3), pol)
    cfg0 = SystemConfig(T=0.1, B=100.0, sigma_n2=1.0, sigma_s2=1.0, M=3, N=3, theta=0.0)
    with pytest.raises(ValueError):
        closed_form_effective_rate(cfg0, sen, ActivityModel(a=0.5, b=0.5), pol)


def test_closed_form_ergodic_limit():
    # theta -> 0: the bracket tends to 1 and the rate to the ergodic value;
    # the Monte Carlo reference carries its own sampling error, so the gate
    # is 1e-3 relative plus three standard errors
    cfg, sen, act = _defaults(theta=1e-8)
    pol = PowerPolicy(p_max=10.0, p_int=10.0, mu=1.0, p2=10.0)
    closed = closed_form_effective_rate(cfg, sen, act, pol)
    kz = build_kz(identity_interference(3), 1.0, 1.0)
    from cogmimo import ensemble_rates

    gains = precompute_gains(sample_rayleigh(3, 3, 200_000, seed=90), kz)
    erg = ergodic_capacity(gains, kz, pol, cfg, sen, act)
    snr = 10.0 / 300.0
    r1, r2 = ensemble_rates(gains, 3 * snr, 3 * snr, cfg.B)
    per_sample = (0.565 * r1 + 0.395 * r2) / cfg.B
    se = per_sample.std(ddof=1) / math.sqrt(len(per_sample))
    assert abs(closed - erg) <= 1e-3 * erg + 3 * se


def test_closed_form_matches_monte_carlo_spot():
    cfg, sen, act = _defaults(theta=0.1)
    pol = PowerPolicy(p_max=10.0, p_int=10.0, mu=1.0, p2=10.0)
    closed = closed_form_effective_rate(cfg, sen, act, pol)
    kz = build_kz(identity_interference(3), 1.0, 1.0)
    gains = precompute_gains(sample_rayleigh(3, 3, 50_000, seed=91), kz)
    mc, se = effective_rate_mc_stderr(gains, kz, pol, cfg, sen, act)
    assert abs(closed - mc) < 3 * se


def test_closed_form_rectangular_antennas():
    cfg = SystemConfig(T=0.1, B=100.0, sigma_n2=1.0, sigma_s2=1.0, M=2, N=3, theta=0.1)
    sen, act = SensingModel(p_d=0.92, p_f=0.21), ActivityModel(a=0.5, b=0.5)
    pol = PowerPolicy(p_max=10.0, p_int=10.0, mu=0.5, p2=10.0)
    closed = closed_form_effective_rate(cfg, sen, act, pol)
    kz = build_kz(identity_interference(3), 1.0, 1.0)
    gains = precompute_gains(sample_rayleigh(2, 3, 50_000, seed=92), kz)
    mc, se = effective_rate_mc_stderr(gains, kz, pol, cfg, sen, act)
    assert abs(closed - mc) < 3 * se
