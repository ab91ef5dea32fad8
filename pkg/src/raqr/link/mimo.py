"""Single-user receive-array rate with maximum-ratio combining."""

from dataclasses import dataclass

import numpy as np

from .channel import EXPERIMENT_MIMO, model_snr, trial_rng

LAYOUTS = ("ULA",)


@dataclass(frozen=True)
class ArrayGeometry:
    elements: int = 5
    spacing: float = 0.5  # carrier wavelengths
    layout: str = "ULA"

    def __post_init__(self):
        if int(self.elements) != self.elements or self.elements < 1:
            raise ValueError("elements must be an integer >= 1")
        if not self.spacing > 0:
            raise ValueError("spacing must be > 0")
        if self.layout not in LAYOUTS:
            raise ValueError(f"layout must be one of {LAYOUTS}")


def steering_vector(geometry, theta):
    """a_m = exp(j 2 pi spacing m sin theta), m = 0..M-1."""
    theta = float(theta)
    if not abs(theta) < np.pi / 2:
        raise ValueError("|theta| must be < pi/2")
    m = np.arange(geometry.elements)
    return np.exp(2j * np.pi * geometry.spacing * m * np.sin(theta))


def simulate_mimo_rate(channel, geometry, model_raqr, model_conv, draws=20_000):
    """Ergodic rate E[log2(1 + SNR ||h||^2)] for both models on common fading draws.

    Returns a list of dicts with tx_power_dbm, rate_raqr, rate_conv, gap and
    the Monte Carlo standard errors.
    """
    if draws < 1:
        raise ValueError("draws must be >= 1")
    rng = trial_rng(channel.seed, EXPERIMENT_MIMO, 0)
    m = geometry.elements
    if channel.fading == "none":
        gains = np.full(draws, float(m))
    else:
        h = (rng.standard_normal((draws, m)) + 1j * rng.standard_normal((draws, m))) / np.sqrt(2.0)
        gains = np.sum(np.abs(h) ** 2, axis=1)
    snr_r = model_snr(model_raqr, channel)
    snr_c = model_snr(model_conv, channel)
    out = []
    for p, sr, sc in zip(channel.tx_power_grid, snr_r, snr_c):
        rr = np.log2(1.0 + sr * gains)
        rc = np.log2(1.0 + sc * gains)
        out.append({
            "tx_power_dbm": p,
            "rate_raqr": float(rr.mean()),
            "rate_conv": float(rc.mean()),
            "gap": float((rr - rc).mean()),
            "stderr_raqr": float(rr.std(ddof=1) / np.sqrt(draws)) if draws > 1 else 0.0,
            "stderr_conv": float(rc.std(ddof=1) / np.sqrt(draws)) if draws > 1 else 0.0,
        })
    return out


def high_snr_gap(results, top_fraction_db=10.0):
    """Mean rate gap over the top decade of the power grid, and its spread."""
    p = np.array([r["tx_power_dbm"] for r in results])
    sel = p >= p.max() - top_fraction_db
    gaps = np.array([r["gap"] for r in results])[sel]
    return float(gaps.mean()), float(gaps.max() - gaps.min())
