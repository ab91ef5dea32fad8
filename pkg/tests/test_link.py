import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from raqr.exceptions import EstimationFailureError, UnidentifiableError
from raqr.link import (
    ArrayGeometry,
    ChannelConfig,
    MLDOAEstimator,
    TrialResult,
    ber_at_snr,
    doa_crb,
    doa_estimate,
    doa_mse,
    draw_channel,
    high_snr_gap,
    pathloss,
    rayleigh_ber,
    simulate_mimo_rate,
    simulate_siso,
    steering_vector,
)
from raqr.link.channel import free_space_reference_gain
from raqr.link.doa import array_snapshots
from raqr.link.siso import demodulate, modulate, received_power_chain
from raqr.receiver import BasebandModel, conventional_baseline


def _pair(ratio_db=21.6):
    conv = conventional_baseline()
    raqr = BasebandModel(3.0, np.pi, conv.noise_psd * 9.0 / 10 ** (ratio_db / 10), 1e-10, conv.bandwidth)
    return raqr, conv


# ---- channel -----------------------------------------------------------------------

def test_pathloss_values():
    assert pathloss(1.0, 3.8, 0.25) == 0.25
    assert pathloss(400.0, 3.8) / pathloss(200.0, 3.8) == pytest.approx(2**-3.8, rel=1e-12)
    assert pathloss(200.0, 3.8, 1e-5) == pytest.approx(200.0**-3.8 * 1e-5, rel=1e-12)
    with pytest.raises(ValueError):
        pathloss(0.0, 3.0)


def test_reference_gain_default_free_space():
    ch = ChannelConfig()
    assert ch.reference == pytest.approx(free_space_reference_gain(6.9458e9))
    assert 10 * np.log10(ch.reference) == pytest.approx(-49.3, abs=0.1)


@pytest.mark.parametrize("kw", [{"distance": 0.0}, {"pathloss_exponent": 1.5}, {"pathloss_exponent": 7},
                                {"fading": "rician"}, {"tx_power_grid": ()}])
def test_channel_validation(kw):
    with pytest.raises(ValueError):
        ChannelConfig(**kw)


def test_default_power_grid():
    g = ChannelConfig().tx_power_grid
    assert g[0] == -10.0 and g[-1] == 40.0 and np.allclose(np.diff(g), 2.0)


def test_draw_channel_statistics():
    ch = ChannelConfig()
    h = draw_channel(ch, np.random.default_rng(3), size=100_000)
    assert np.mean(np.abs(h) ** 2) == pytest.approx(1.0, abs=0.02)
    assert abs(np.mean(h)) < 0.01
    assert abs(np.mean(h * h)) < 0.01  # circular symmetry
    assert draw_channel(ChannelConfig(fading="none"), 0) == 1.0


def test_draw_channel_deterministic():
    a = draw_channel(ChannelConfig(), np.random.default_rng(5), size=64)
    b = draw_channel(ChannelConfig(), np.random.default_rng(5), size=64)
    np.testing.assert_array_equal(a, b)
    with pytest.raises(ValueError):
        draw_channel(ChannelConfig(), None)


# ---- modulation and BER ----------------------------------------------------------------

@given(st.sampled_from(["BPSK", "QPSK", "16QAM"]), st.integers(0, 2**31))
def test_modulation_roundtrip(mod, seed):
    k = {"BPSK": 1, "QPSK": 2, "16QAM": 4}[mod]
    bits = np.random.default_rng(seed).integers(0, 2, 64 * k)
    x = modulate(bits, mod)
    np.testing.assert_array_equal(demodulate(x, mod), bits)


@pytest.mark.parametrize("mod", ["BPSK", "QPSK", "16QAM"])
def test_unit_energy(mod):
    k = {"BPSK": 1, "QPSK": 2, "16QAM": 4}[mod]
    import itertools

    allbits = np.array(list(itertools.product([0, 1], repeat=k))).ravel()
    assert np.mean(np.abs(modulate(allbits, mod)) ** 2) == pytest.approx(1.0)


def test_16qam_gray_neighbours():
    # adjacent amplitude levels differ in exactly one bit
    import itertools

    pts = {}
    for b in itertools.product([0, 1], repeat=4):
        pts[b] = modulate(np.array(b), "16QAM")[0] * np.sqrt(10)
    for a, pa in pts.items():
        for b, pb in pts.items():
            if abs(abs(pa - pb) - 2) < 1e-9:
                assert sum(x != y for x, y in zip(a, b)) == 1


def test_unsupported_modulation():
    with pytest.raises(ValueError):
        simulate_siso(ChannelConfig(), conventional_baseline(), "8PSK", 1000)


def test_rayleigh_formula_value():
    # 10 dB per bit on QPSK: symbol SNR is twice that
    assert rayleigh_ber("QPSK", 20.0) == pytest.approx(0.5 * (1 - np.sqrt(10 / 11)), rel=1e-12)
    assert rayleigh_ber("QPSK", 20.0) == pytest.approx(0.0233, abs=5e-5)


@pytest.mark.parametrize("mod,snr", [("BPSK", 10.0), ("QPSK", 20.0), ("QPSK", 3.0)])
def test_ber_matches_rayleigh_theory(mod, snr):
    errs, sent = ber_at_snr(mod, snr, 400_000, np.random.default_rng(11))
    p = rayleigh_ber(mod, snr)
    se = np.sqrt(p * (1 - p) / sent)
    assert abs(errs / sent - p) < 3 * se


def test_noise_free_zero_ber():
    model = BasebandModel(1.0, 0.3, 0.0, 0.0)
    res = simulate_siso(ChannelConfig(tx_power_grid=(0.0, 10.0)), model, "16QAM", 20_000)
    assert all(r["ber"] == 0.0 for r in res)


def test_raqr_below_conventional_and_monotone():
    raqr, conv = _pair()
    ch = ChannelConfig(tx_power_grid=tuple(np.arange(-10, 41, 5.0)), seed=4)
    r = simulate_siso(ch, raqr, "QPSK", 100_000)
    c = simulate_siso(ch, conv, "QPSK", 100_000)
    for a, b in zip(r, c):
        if a["ber"] > 0 and b["ber"] > 0:
            assert a["ber"] < b["ber"]
    for curve in (r, c):
        for a, b in zip(curve, curve[1:]):
            assert b["ber"] <= a["ber"] + 3 * np.hypot(a["stderr"], b["stderr"])


def test_siso_deterministic_and_thread_independent():
    ch = ChannelConfig(tx_power_grid=(0.0, 10.0, 20.0), seed=9)
    a = simulate_siso(ch, conventional_baseline(), "QPSK", 20_000, threads=1)
    b = simulate_siso(ch, conventional_baseline(), "QPSK", 20_000, threads=3)
    assert a == b


def test_energy_bookkeeping():
    raqr, _ = _pair()
    noiseless = raqr.with_noise_psd(0.0)
    ch = ChannelConfig()
    p = received_power_chain(ch, noiseless, 20.0, 200_000, np.random.default_rng(2))
    expected = 10 ** ((20.0 - 30) / 10) * ch.gain * raqr.rho**2
    assert p == pytest.approx(expected, rel=0.01)


def test_trial_result_invariants():
    with pytest.raises(ValueError):
        TrialResult(snr=float("inf"))
    with pytest.raises(ValueError):
        TrialResult(snr=1.0, bits_sent=10, bits_errored=11)
    assert TrialResult(snr=1.0, bits_sent=10, bits_errored=2).ber == 0.2


# ---- arrays and rate ----------------------------------------------------------------

def test_steering_vector_basics():
    g = ArrayGeometry(5)
    np.testing.assert_array_equal(steering_vector(g, 0.0), np.ones(5))
    with pytest.raises(ValueError):
        steering_vector(g, np.pi / 2)
    with pytest.raises(ValueError):
        ArrayGeometry(0)


@given(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5), st.integers(1, 12), st.floats(0.1, 2.0))
def test_steering_norm_and_dirichlet(t1, t2, M, d):
    g = ArrayGeometry(M, d)
    a1, a2 = steering_vector(g, t1), steering_vector(g, t2)
    assert np.vdot(a1, a1).real == pytest.approx(M)
    psi = 2 * np.pi * d * (np.sin(t2) - np.sin(t1))
    s = np.sin(psi / 2)
    dirichlet = 1.0 if abs(s) < 1e-9 else abs(np.sin(M * psi / 2) / (M * s))
    assert abs(np.vdot(a1, a2)) / M == pytest.approx(dirichlet, abs=1e-7)


def test_mimo_identical_models_zero_gap():
    conv = conventional_baseline()
    res = simulate_mimo_rate(ChannelConfig(), ArrayGeometry(5), conv, conv, draws=2000)
    assert all(r["gap"] == 0.0 for r in res)


def test_mimo_gap_closed_form():
    conv = conventional_baseline()
    raqr = conv.with_noise_psd(conv.noise_psd / 2**2.5)
    ch = ChannelConfig(tx_power_grid=tuple(np.arange(20, 61, 2.0)))
    res = simulate_mimo_rate(ch, ArrayGeometry(5), raqr, conv, draws=10_000)
    gap, spread = high_snr_gap(res)
    assert gap == pytest.approx(2.5, abs=0.1)
    assert spread < 0.1


@given(st.floats(0.5, 40.0))
def test_rate_offset_property(ratio_db):
    conv = conventional_baseline()
    other = conv.with_noise_psd(conv.noise_psd / 10 ** (ratio_db / 10))
    ch = ChannelConfig(tx_power_grid=tuple(np.arange(60, 81, 5.0)))
    res = simulate_mimo_rate(ch, ArrayGeometry(4), other, conv, draws=10_000)
    gap, _ = high_snr_gap(res)
    assert gap == pytest.approx(ratio_db / 10 * np.log2(10), abs=0.1)


# ---- DOA ------------------------------------------------------------------------------

def _fd_fisher_crb(geom, theta, s, sigma2, h=1e-5):
    M, T = geom.elements, len(s)
    m = np.arange(M)

    def mu(th, sig):
        return np.outer(np.exp(2j * np.pi * geom.spacing * m * np.sin(th)), sig).ravel()

    cols = [(mu(theta + h, s) - mu(theta - h, s)) / (2 * h)]
    for t in range(T):
        for unit in (1.0, 1j):
            e = np.zeros(T, dtype=complex)
            e[t] = unit
            cols.append((mu(theta, s + h * e) - mu(theta, s - h * e)) / (2 * h))
    Dm = np.array(cols).T
    J = 2.0 / sigma2 * np.real(Dm.conj().T @ Dm)
    return np.linalg.inv(J)[0, 0]


@pytest.mark.parametrize("M,theta", [(2, 0.0), (5, 0.3), (8, -0.9)])
def test_crb_matches_finite_difference_fisher(M, theta):
    geom = ArrayGeometry(M)
    rng = np.random.default_rng(M)
    T = 16
    s = 1.7 * np.exp(2j * np.pi * rng.random(T))
    sigma2 = 0.4
    snr = np.mean(np.abs(s) ** 2) / sigma2
    assert doa_crb(geom, snr, T, theta) == pytest.approx(_fd_fisher_crb(geom, theta, s, sigma2), rel=1e-6)


def test_crb_scaling_and_guard():
    g = ArrayGeometry(5)
    assert doa_crb(g, 20.0, 64, 0.3) == pytest.approx(doa_crb(g, 10.0, 64, 0.3) / 2)
    assert doa_crb(g, 10.0, 64, 0.3) / doa_crb(g, 1000.0, 64, 0.3) == pytest.approx(100.0)
    with pytest.raises(UnidentifiableError):
        doa_crb(ArrayGeometry(1), 10.0, 64, 0.0)


def test_ml_noise_free():
    g = ArrayGeometry(5)
    X = array_snapshots(g, 0.3, np.ones(16))
    assert doa_estimate(X, g) == pytest.approx(0.3, abs=1e-3)


def test_ml_estimator_api_and_failures():
    est = MLDOAEstimator(grid_step=2e-3)
    assert est.get_params() == {"grid_step": 2e-3, "spacing": 0.5, "xtol": 1e-10}
    with pytest.raises(EstimationFailureError):
        est.fit(np.zeros((5, 10), dtype=complex))
    with pytest.raises(ValueError):
        est.fit(np.ones((5, 3), dtype=complex))
    with pytest.raises(EstimationFailureError):
        est.fit(np.full((5, 10), np.nan + 0j))


def test_ml_mse_not_below_bound():
    g = ArrayGeometry(5)
    for snr_db in (10.0, 20.0):
        trials = 300
        mse, crb, _ = doa_mse(g, 0.3, 10 ** (snr_db / 10), 64, trials, seed=1)
        assert mse >= crb * (1 - 3 * np.sqrt(2 / trials))


def test_doa_deterministic():
    g = ArrayGeometry(5)
    a = doa_mse(g, 0.2, 10.0, 32, 20, seed=3)[0]
    b = doa_mse(g, 0.2, 10.0, 32, 20, seed=3)[0]
    assert a == b
