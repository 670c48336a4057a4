import math

import numpy as np
import pytest

from cogmimo import (
    ActivityModel,
    GainEnsemble,
    PowerPolicy,
    SensingModel,
    SystemConfig,
    build_kz,
    effective_rate,
    first_derivative,
    identity_interference,
    log_det_rate,
    lowsnr_expansion,
    lowsnr_report,
    min_energy_per_bit,
    precompute_gains,
    sample_rayleigh,
    second_derivative_sym,
    top_eigen_stats,
    transition_probs,
    uniform_closed_forms,
    wideband_slope,
)

LN2 = math.log(2.0)


def _cfg(mn, theta=0.1):
    return SystemConfig(T=0.1, B=100.0, sigma_n2=1.0, sigma_s2=1.0, M=mn, N=mn, theta=theta)


def _beamform_effective_rate(samples, kz, cfg, sensing, activity, snr):
    """Per-dimension effective rate at the given snr under beamforming."""
    gains = precompute_gains(samples, kz)
    tm = transition_probs(activity, sensing)
    if snr == 0.0:
        return 0.0
    p2 = snr * cfg.N * cfg.B * cfg.sigma_n2
    pol = PowerPolicy(p_max=max(10.0, p2), p_int=max(10.0, p2), mu=1.0, p2=p2)
    return effective_rate(gains, kz, pol, cfg, tm, covariance_mode="beamform",
                          normalization="per_dimension")


def test_first_derivative_scalar_value(sensing_default, activity_default):
    samples = sample_rayleigh(1, 1, 20_000, seed=51)
    kz = build_kz(identity_interference(1), 1.0, 1.0)
    mean_h2 = float(np.mean(np.abs(samples) ** 2))
    expected = (0.565 * 0.5 * mean_h2 + 0.395 * mean_h2) / LN2
    got = first_derivative(samples, kz, sensing_default, activity_default)
    assert got == pytest.approx(expected, rel=1e-12)
    # population value (0.565*0.5 + 0.395)/ln2 within Monte Carlo error
    assert got == pytest.approx(0.9775, abs=0.02)


def test_first_derivative_idle_only():
    samples = sample_rayleigh(2, 2, 5_000, seed=52)
    kz = build_kz(identity_interference(2), 1.0, 1.0)
    sen, act = SensingModel(p_d=1.0, p_f=0.0), ActivityModel(a=1.0, b=0.0)
    lam_idle = np.linalg.eigvalsh(
        np.einsum("sij,skj->sik", samples, samples.conj())
    )[:, -1]
    assert first_derivative(samples, kz, sen, act) == pytest.approx(
        lam_idle.mean() / LN2, rel=1e-12
    )


@pytest.mark.parametrize("mn", [1, 2, 3])
def test_first_derivative_finite_difference(mn, sensing_default, activity_default):
    samples = sample_rayleigh(mn, mn, 10_000, seed=60 + mn)
    kz = build_kz(identity_interference(mn), 1.0, 1.0)
    cfg = _cfg(mn)
    c_dot = first_derivative(samples, kz, sensing_default, activity_default)
    h = 1e-4
    fd = _beamform_effective_rate(samples, kz, cfg, sensing_default, activity_default, h) / h
    assert fd == pytest.approx(c_dot, rel=0.01)


def test_min_energy_per_bit_reciprocal(ens3, kz3, sensing_default, activity_default):
    samples, _ = ens3
    c_dot = first_derivative(samples, kz3, sensing_default, activity_default)
    lin, db = min_energy_per_bit(samples, kz3, sensing_default, activity_default)
    assert lin == pytest.approx(1.0 / c_dot, rel=1e-12)
    assert db == pytest.approx(10 * math.log10(lin), rel=1e-12)


def test_min_energy_per_bit_improves_with_sensing(ens3, kz3, activity_default):
    samples, _ = ens3
    vals_pd = [
        min_energy_per_bit(samples, kz3, SensingModel(p_d=pd, p_f=0.21), activity_default)[0]
        for pd in (0.5, 0.7, 0.9, 1.0)
    ]
    assert all(b < a for a, b in zip(vals_pd, vals_pd[1:]))
    vals_pf = [
        min_energy_per_bit(samples, kz3, SensingModel(p_d=0.92, p_f=pf), activity_default)[0]
        for pf in (0.3, 0.2, 0.1, 0.0)
    ]
    assert all(b < a for a, b in zip(vals_pf, vals_pf[1:]))


def test_min_energy_rejects_zero_channel(kz3, sensing_default, activity_default):
    zero = np.zeros((10, 3, 3), dtype=complex)
    with pytest.raises(ValueError):
        min_energy_per_bit(zero, kz3, sensing_default, activity_default)


def test_theta_independence_of_first_order(ens3, kz3, sensing_default, activity_default):
    samples, _ = ens3
    reps = [
        lowsnr_report(samples, kz3, sensing_default, activity_default, _cfg(3, theta))
        for theta in (0.01, 1.0)
    ]
    assert abs(reps[0].c_dot - reps[1].c_dot) < 1e-12
    assert abs(reps[0].ebn0_min - reps[1].ebn0_min) < 1e-12


def test_second_derivative_theta_zero_collapse(ens3, kz3, sensing_default, activity_default):
    samples, _ = ens3
    lam_b, m_b, lam_i, m_i = top_eigen_stats(samples, kz3)
    w = np.mean(0.565 * lam_b**2 / m_b + 0.395 * lam_i**2 / m_i)
    cfg0 = SystemConfig(T=0.1, B=100.0, sigma_n2=1.0, sigma_s2=1.0, M=3, N=3, theta=0.0)
    got = second_derivative_sym(samples, kz3, sensing_default, activity_default, cfg0)
    assert got == pytest.approx(-3 * w / LN2, rel=1e-12)


def test_second_derivative_requires_memoryless(ens3, kz3, sensing_default):
    samples, _ = ens3
    with pytest.raises(ValueError):
        second_derivative_sym(samples, kz3, sensing_default, ActivityModel(a=0.4, b=0.4),
                              _cfg(3))


def test_second_derivative_magnitude_grows_with_theta(ens3, kz3, sensing_default,
                                                      activity_default):
    samples, _ = ens3
    vals = [
        abs(second_derivative_sym(samples, kz3, sensing_default, activity_default,
                                  _cfg(3, theta)))
        for theta in (0.01, 0.1, 1.0)
    ]
    assert vals[0] < vals[1] < vals[2]


@pytest.mark.parametrize("mn", [1, 2])
def test_second_derivative_finite_difference(mn, sensing_default, activity_default):
    samples = sample_rayleigh(mn, mn, 10_000, seed=70 + mn)
    kz = build_kz(identity_interference(mn), 1.0, 1.0)
    cfg = _cfg(mn)
    c_ddot = second_derivative_sym(samples, kz, sensing_default, activity_default, cfg)
    h = 1e-3
    c1 = _beamform_effective_rate(samples, kz, cfg, sensing_default, activity_default, h)
    c2 = _beamform_effective_rate(samples, kz, cfg, sensing_default, activity_default, 2 * h)
    fd = (c2 - 2 * c1) / h**2
    assert fd == pytest.approx(c_ddot, rel=0.05)


def test_wideband_slope_identity(ens3, kz3, sensing_default, activity_default):
    samples, _ = ens3
    cfg = _cfg(3)
    s0 = wideband_slope(samples, kz3, sensing_default, activity_default, cfg)
    c_dot = first_derivative(samples, kz3, sensing_default, activity_default)
    c_ddot = second_derivative_sym(samples, kz3, sensing_default, activity_default, cfg)
    assert s0 == pytest.approx(2 * c_dot**2 * LN2 / (-c_ddot), abs=1e-10)


def test_wideband_slope_decreasing_in_theta(ens3, kz3, sensing_default, activity_default):
    samples, _ = ens3
    vals = [
        wideband_slope(samples, kz3, sensing_default, activity_default, _cfg(3, theta))
        for theta in (1e-12, 0.1, 1.0)
    ]
    assert vals[0] > vals[1] > vals[2]


def test_uniform_closed_forms_fixture(sensing_default, activity_default):
    cfg = _cfg(3)
    ebn0, s0 = uniform_closed_forms(cfg, sensing_default, activity_default)
    assert ebn0 == pytest.approx(LN2 / (0.96 * 9), rel=1e-12)
    assert ebn0 == pytest.approx(0.08023, abs=5e-6)  # 4 significant digits
    assert round(10 * math.log10(ebn0), 2) == -10.96
    assert s0 is not None and s0 > 0


def test_uniform_closed_forms_slope_needs_memoryless(sensing_default):
    ebn0, s0 = uniform_closed_forms(_cfg(3), sensing_default, ActivityModel(a=0.4, b=0.4))
    assert ebn0 > 0
    assert s0 is None


def test_uniform_closed_form_moment_plug_compatibility(sensing_default, activity_default):
    # substituting Monte Carlo estimates of the Gaussian trace moments into
    # the closed-form skeleton reproduces the exact-moment value
    cfg = _cfg(3, theta=0.1)
    h = sample_rayleigh(3, 3, 100_000, seed=81)
    gram = np.einsum("sij,skj->sik", h, h.conj())
    tr = np.einsum("sii->s", gram).real
    tr2 = tr**2
    trsq = np.einsum("sij,sji->s", gram, gram).real
    ell1, ell2 = 0.565, 0.395
    l2w = ell1 / 1.0 + ell2
    l4w = ell1 / 1.0 + ell2
    ebn0_mc = LN2 / (l2w * tr.mean())
    denom_mc = cfg.theta * cfg.T * cfg.B * 3 * (l4w * tr2.mean() - l2w**2 * tr.mean()**2) \
        + 3 * l4w * trsq.mean() * LN2
    s0_mc = 2 * l2w**2 * tr.mean()**2 / denom_mc
    ebn0, s0 = uniform_closed_forms(cfg, sensing_default, activity_default)
    assert ebn0_mc == pytest.approx(ebn0, rel=0.01)
    assert s0_mc == pytest.approx(s0, rel=0.03)


def test_lowsnr_expansion_accuracy(sensing_default, activity_default):
    samples = sample_rayleigh(2, 2, 10_000, seed=83)
    kz = build_kz(identity_interference(2), 1.0, 1.0)
    cfg = _cfg(2)
    rep = lowsnr_report(samples, kz, sensing_default, activity_default, cfg)
    assert lowsnr_expansion(rep, 0.0) == 0.0
    for snr in (1e-3, 3e-3, 1e-2):
        exact = _beamform_effective_rate(samples, kz, cfg, sensing_default,
                                         activity_default, snr)
        approx = lowsnr_expansion(rep, snr)
        assert approx == pytest.approx(exact, rel=0.02)


def test_report_fields(ens3, kz3, sensing_default, activity_default):
    samples, _ = ens3
    rep = lowsnr_report(samples, kz3, sensing_default, activity_default, _cfg(3))
    assert rep.ell1 == pytest.approx(0.565)
    assert rep.ell2 == pytest.approx(0.395)
    assert rep.m1 == 1 and rep.m2 == 1  # continuous fading: no ties
    assert rep.c_ddot is not None and rep.c_ddot < 0
    assert rep.ebn0_min == pytest.approx(1.0 / rep.c_dot, rel=1e-12)
    rep2 = lowsnr_report(samples, kz3, sensing_default, ActivityModel(a=0.4, b=0.4), _cfg(3))
    assert rep2.c_ddot is None and rep2.s0 is None


def test_multiplicity_detection_structured_channel(kz3, sensing_default, activity_default):
    eye = np.broadcast_to(np.eye(3, dtype=complex), (4, 3, 3)).copy()
    lam_b, m_b, lam_i, m_i = top_eigen_stats(eye, kz3)
    assert (m_i == 3).all()
    assert (m_b == 3).all()
    assert np.allclose(lam_i, 1.0)


def test_beamforming_first_order_dominance(kz3):
    # the top-eigenvalue covariance beats random trace-1 covariances at
    # vanishing weight, sample by sample
    rng = np.random.default_rng(84)
    samples = sample_rayleigh(3, 3, 20, seed=85)
    w = 1e-5
    for h in samples:
        lam_max = np.linalg.eigvalsh(h.conj().T @ h)[-1]
        base = math.log1p(w * lam_max)
        for _ in range(100):
            a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            kx = a @ a.conj().T
            kx /= np.trace(kx).real
            assert log_det_rate(h, kx, w, bandwidth=1.0) <= base / LN2 * (1 + 1e-9)


def test_quadratic_term_lower_bound(ens3, kz3):
    # E[tr(Phi^H Phi)] >= E[lambda_max^2] / m for the beamforming family
    samples, _ = ens3
    lam_b, m_b, lam_i, m_i = top_eigen_stats(samples[:2000], kz3)
    h = samples[:2000]
    kzi = kz3.k_z_inv
    tr_busy = np.empty(len(h))
    tr_idle = np.empty(len(h))
    for i, hh in enumerate(h):
        gb = hh.conj().T @ kzi @ hh
        wb, vb = np.linalg.eigh(gb)
        u = vb[:, -1:]
        phi1 = hh @ (u @ u.conj().T) @ hh.conj().T @ kzi
        tr_busy[i] = np.trace(phi1.conj().T @ phi1).real
        gi = hh.conj().T @ hh
        wi, vi = np.linalg.eigh(gi)
        u2 = vi[:, -1:]
        phi2 = hh @ (u2 @ u2.conj().T) @ hh.conj().T
        tr_idle[i] = np.trace(phi2.conj().T @ phi2).real
    assert tr_busy.mean() >= np.mean(lam_b**2 / m_b) * (1 - 1e-9)
    assert tr_idle.mean() >= np.mean(lam_i**2 / m_i) * (1 - 1e-9)
