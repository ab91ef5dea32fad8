"""Channel configuration, path loss and fading draws."""

from dataclasses import dataclass, field

import numpy as np

from .. import units
from .._validation import check_rng

FADING_MODELS = ("rayleigh", "none")
REFERENCE_DISTANCE = 1.0  # m

# experiment ids used as the first spawn-key entry of per-trial seeds
EXPERIMENT_SISO = 1
EXPERIMENT_MIMO = 2
EXPERIMENT_DOA = 3


def free_space_reference_gain(carrier):
    """Friis gain (lambda / 4 pi d0)^2 at the reference distance."""
    lam = units.C_LIGHT / carrier
    return float((lam / (4.0 * np.pi * REFERENCE_DISTANCE)) ** 2)


@dataclass(frozen=True)
class ChannelConfig:
    distance: float = 200.0  # m
    pathloss_exponent: float = 3.8
    fading: str = "rayleigh"
    carrier: float = 6.9458e9  # Hz
    tx_power_grid: tuple = field(default_factory=lambda: tuple(np.arange(-10.0, 40.0 + 1e-9, 2.0)))  # dBm
    seed: int = 0
    reference_gain: float | None = None  # linear gain at d0; None -> free space

    def __post_init__(self):
        if not self.distance > 0:
            raise ValueError("distance must be > 0")
        if not 2.0 <= self.pathloss_exponent <= 6.0:
            raise ValueError("pathloss_exponent must lie in [2, 6]")
        if self.fading not in FADING_MODELS:
            raise ValueError(f"fading must be one of {FADING_MODELS}")
        if not self.carrier > 0:
            raise ValueError("carrier must be > 0")
        if self.reference_gain is not None and not self.reference_gain > 0:
            raise ValueError("reference_gain must be > 0")
        object.__setattr__(self, "tx_power_grid", tuple(float(p) for p in self.tx_power_grid))
        if not self.tx_power_grid:
            raise ValueError("tx_power_grid is empty")

    @property
    def reference(self):
        if self.reference_gain is None:
            return free_space_reference_gain(self.carrier)
        return self.reference_gain

    @property
    def gain(self):
        return pathloss(self.distance, self.pathloss_exponent, self.reference)

    def tx_power_watts(self):
        return units.dbm_to_watt(np.asarray(self.tx_power_grid))


def pathloss(distance, exponent, reference_gain=1.0):
    """Power gain reference_gain * (d / d0)^(-exponent), d0 = 1 m."""
    d = np.asarray(distance, dtype=float)
    if np.any(d <= 0):
        raise ValueError("distance must be > 0")
    g = reference_gain * (d / REFERENCE_DISTANCE) ** (-exponent)
    return float(g) if g.ndim == 0 else g


def draw_channel(config, rng, size=None):
    """Unit-variance circular complex Gaussian draws (or ones without fading)."""
    rng = check_rng(rng)
    shape = () if size is None else size
    if config.fading == "none":
        return np.ones(shape, dtype=complex) if shape != () else 1.0 + 0.0j
    h = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    return h


def trial_rng(seed, experiment, index):
    """Generator for one work unit, keyed by (experiment id, trial index)."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(experiment), int(index))))


def model_snr(model, config):
    """Mean received SNR per power point: rho^2 P g / (N0 W)."""
    return model.snr(config.tx_power_watts() * config.gain)
