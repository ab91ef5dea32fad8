"""Monte Carlo single-antenna BER over the equivalent baseband model."""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .. import units
from .channel import EXPERIMENT_SISO, draw_channel, model_snr, trial_rng

MODULATIONS = {"BPSK": 1, "QPSK": 2, "16QAM": 4}
CHUNK_SYMBOLS = 1 << 18

# Gray-coded 4-PAM levels indexed by the bit pair (b0 b1)
_PAM4 = np.array([-3.0, -1.0, 3.0, 1.0])


@dataclass(frozen=True)
class TrialResult:
    """One Monte Carlo record: a BER point or a single DOA trial."""

    snr: float  # dB
    channel_draw: complex | np.ndarray | None = None
    bits_sent: int = 0
    bits_errored: int = 0
    theta_true: float | None = None
    theta_hat: float | None = None

    def __post_init__(self):
        if not np.isfinite(self.snr):
            raise ValueError("snr must be finite")
        if not 0 <= self.bits_errored <= self.bits_sent:
            raise ValueError("error count must not exceed sent count")

    @property
    def ber(self):
        return self.bits_errored / self.bits_sent if self.bits_sent else float("nan")

    @property
    def stderr(self):
        if not self.bits_sent:
            return float("nan")
        p = self.ber
        return float(np.sqrt(p * (1 - p) / self.bits_sent))


def bits_per_symbol(modulation):
    if modulation not in MODULATIONS:
        raise ValueError(f"unsupported modulation {modulation!r}; choose from {sorted(MODULATIONS)}")
    return MODULATIONS[modulation]


def modulate(bits, modulation):
    """Unit-energy Gray-mapped symbols."""
    k = bits_per_symbol(modulation)
    b = np.asarray(bits, dtype=np.int8).reshape(-1, k)
    if modulation == "BPSK":
        return (1.0 - 2.0 * b[:, 0]).astype(complex)
    if modulation == "QPSK":
        return ((1.0 - 2.0 * b[:, 0]) + 1j * (1.0 - 2.0 * b[:, 1])) / np.sqrt(2.0)
    i = _PAM4[2 * b[:, 0] + b[:, 1]]
    q = _PAM4[2 * b[:, 2] + b[:, 3]]
    return (i + 1j * q) / np.sqrt(10.0)


def _pam4_bits(x):
    # decision regions of the Gray 4-PAM levels
    b0 = (x > 0).astype(np.int8)
    b1 = (np.abs(x) < 2.0).astype(np.int8)
    return b0, b1


def demodulate(symbols, modulation):
    """Hard-decision Gray demapping of equalized symbols."""
    k = bits_per_symbol(modulation)
    s = np.asarray(symbols)
    if modulation == "BPSK":
        out = (s.real < 0).astype(np.int8)[:, None]
    elif modulation == "QPSK":
        out = np.stack([(s.real < 0), (s.imag < 0)], axis=1).astype(np.int8)
    else:
        z = s * np.sqrt(10.0)
        i0, i1 = _pam4_bits(z.real)
        q0, q1 = _pam4_bits(z.imag)
        out = np.stack([i0, i1, q0, q1], axis=1)
    return out.reshape(-1)


def rayleigh_ber(modulation, snr):
    """Closed-form average BER over Rayleigh fading; ``snr`` is mean Es/N0 (linear).

    Exact for BPSK/QPSK; nearest-neighbour Gray approximation for 16QAM.
    """
    g = np.asarray(snr, dtype=float)
    k = bits_per_symbol(modulation)
    if modulation == "16QAM":
        # nearest-neighbour term: Q(sqrt(Es/5)) per axis, 3/4 of bits affected
        gb = g / 10.0
        return 0.75 * 0.5 * (1.0 - np.sqrt(gb / (1.0 + gb)))
    gb = g / k
    return 0.5 * (1.0 - np.sqrt(gb / (1.0 + gb)))


def ber_at_snr(modulation, snr, n_bits, rng, fading="rayleigh"):
    """Bit errors for ``n_bits`` at mean symbol SNR ``snr`` (linear): (errors, sent)."""
    k = bits_per_symbol(modulation)
    n_sym = -(-int(n_bits) // k)
    errors = 0
    done = 0
    while done < n_sym:
        m = min(CHUNK_SYMBOLS, n_sym - done)
        bits = rng.integers(0, 2, size=m * k, dtype=np.int8)
        x = modulate(bits, modulation)
        if fading == "rayleigh":
            h = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / np.sqrt(2.0)
        else:
            h = np.ones(m, dtype=complex)
        w = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / np.sqrt(2.0)
        if np.isinf(snr):
            y = h * x
        else:
            y = np.sqrt(snr) * h * x + w
        # coherent detection with genie channel knowledge
        with np.errstate(divide="ignore", invalid="ignore"):
            z = y / (np.sqrt(snr) * h) if np.isfinite(snr) else y / h
        errors += int(np.count_nonzero(demodulate(z, modulation) != bits))
        done += m
    return errors, n_sym * k


def _resolve_threads(threads):
    if threads is None or threads == 0:
        return os.cpu_count() or 1
    if threads < 0:
        raise ValueError("threads must be >= 0")
    return int(threads)


def simulate_siso(channel, model, modulation="QPSK", bits_per_point=200_000, threads=1):
    """BER versus transmit power for one receiver model.

    Seeds depend only on (channel.seed, power index), so two models evaluated
    on the same channel see identical bits, fades and normalized noise.
    Returns a list of dicts with tx_power_dbm, snr_db, ber, stderr, errors, bits.
    """
    bits_per_symbol(modulation)
    if bits_per_point < 1:
        raise ValueError("bits_per_point must be >= 1")
    snrs = model_snr(model, channel)

    def point(idx):
        rng = trial_rng(channel.seed, EXPERIMENT_SISO, idx)
        errs, sent = ber_at_snr(modulation, float(snrs[idx]), bits_per_point, rng, channel.fading)
        snr_db = 10 * np.log10(snrs[idx]) if np.isfinite(snrs[idx]) else 999.0
        r = TrialResult(snr=float(snr_db), bits_sent=sent, bits_errored=errs)
        return {"tx_power_dbm": channel.tx_power_grid[idx], "snr_db": r.snr, "ber": r.ber,
                "stderr": r.stderr, "errors": errs, "bits": sent}

    idxs = range(len(channel.tx_power_grid))
    n = _resolve_threads(threads)
    if n == 1:
        return [point(i) for i in idxs]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(point, idxs))


def received_power_chain(channel, model, tx_power_dbm, n_symbols, rng):
    """Noise-free mean received power through y = rho e^{j Phi} h sqrt(P g) x."""
    p = units.dbm_to_watt(tx_power_dbm) * channel.gain
    x = modulate(rng.integers(0, 2, size=2 * n_symbols), "QPSK")
    h = draw_channel(channel, rng, size=n_symbols)
    y = model.apply(x, h=h, amplitude=np.sqrt(p))
    return float(np.mean(np.abs(y) ** 2))
