"""Noise budget and the equivalent baseband model y = rho e^{j Phi} h x + w."""

from dataclasses import dataclass

import numpy as np

from .. import units
from .superhet import current_slope, detector_current, effective_aperture, superhet_gain

# quoted sensitivity of a conventional metal-antenna receiver, V/cm/sqrt(Hz)
CONVENTIONAL_REFERENCE_SENSITIVITY = 1.5e-9
CONVENTIONAL_REFERENCE_TEMPERATURE = 290.0
CONVENTIONAL_REFERENCE_CARRIER = 6.9458e9


@dataclass(frozen=True)
class NoiseBudget:
    """Field-equivalent noise densities, V/cm/sqrt(Hz)."""

    sql: float
    photon_shot: float
    pd_electrical: float

    @property
    def total(self):
        return float(np.sqrt(self.sql**2 + self.photon_shot**2 + self.pd_electrical**2))

    def as_dict(self):
        return {"sql": self.sql, "photon_shot": self.photon_shot, "pd_electrical": self.pd_electrical,
                "total": self.total}


@dataclass(frozen=True)
class BasebandModel:
    rho: float
    phi: float
    noise_psd: float  # per Hz, in units of rho^2 * W
    sensitivity: float  # V/cm/sqrt(Hz)
    bandwidth: float = 100e3  # Hz

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError("rho must be > 0")
        if not self.noise_psd >= 0:
            raise ValueError("noise_psd must be >= 0")

    @property
    def gain(self):
        return self.rho * np.exp(1j * self.phi)

    def snr(self, received_power):
        """Linear SNR for a received power (W) over the model bandwidth."""
        p = np.asarray(received_power, dtype=float)
        if self.noise_psd == 0:
            return np.full(p.shape, np.inf)
        return self.rho**2 * p / (self.noise_psd * self.bandwidth)

    def apply(self, x, h=1.0, amplitude=1.0, rng=None):
        """Received samples rho e^{j Phi} h sqrt(P) x + w; noise only with ``rng``."""
        y = self.gain * np.asarray(h) * amplitude * np.asarray(x)
        if rng is not None and self.noise_psd > 0:
            var = self.noise_psd * self.bandwidth
            y = y + np.sqrt(var / 2) * (rng.standard_normal(y.shape) + 1j * rng.standard_normal(y.shape))
        return y

    def with_noise_psd(self, noise_psd):
        return BasebandModel(self.rho, self.phi, noise_psd, self.sensitivity, self.bandwidth)


def sql_sensitivity(N, T_r, T_i, calibration_const):
    """Standard-quantum-limit field density C / sqrt(N T_r T_i), V/cm/sqrt(Hz)."""
    for name, v in (("N", N), ("T_r", T_r), ("T_i", T_i), ("calibration_const", calibration_const)):
        if not v > 0:
            raise ValueError(f"{name} must be > 0")
    return calibration_const / np.sqrt(N * T_r * T_i)


def default_sql_calibration(scheme):
    """hbar / d_RF expressed in V/cm * s."""
    return units.HBAR / (scheme.rf_dipole * units.EA0) / 100.0


def noise_budget(config):
    slope = abs(current_slope(config))  # A per V/cm
    R = config.pd_responsivity
    if config.photodetect_mode == "DIOD":
        dc = float(detector_current(config, [config.lo_field])[0])
    else:
        # both branches together carry probe + optical LO power
        t = abs(detector_current(config.replace(photodetect_mode="DIOD"), [config.lo_field])[0])
        dc = t + R * config.bcod_lo_power
    shot = np.sqrt(2.0 * units.E_CHARGE * dc) / slope
    electrical = config.pd_noise_current / slope
    cal = config.sql_calibration if config.sql_calibration is not None else default_sql_calibration(config.scheme)
    sql = sql_sensitivity(config.atom_number, config.coherence_time, config.integration_time, cal)
    return NoiseBudget(float(sql), float(shot), float(electrical))


def baseband_model(config):
    """Gain/phase from the superhet operating point and noise from the budget."""
    rho, phi = superhet_gain(config)
    budget = noise_budget(config)
    # refer the field-equivalent noise through the same gain as the signal
    sens_si = budget.total * 100.0
    noise_psd = (sens_si * rho) ** 2 * effective_aperture(config.f_c) / units.Z0
    return BasebandModel(rho, phi, float(noise_psd), budget.total, config.if_bandwidth)


def _thermal_sensitivity(temperature, noise_figure, carrier):
    psd = units.K_BOLTZMANN * temperature * noise_figure
    return float(np.sqrt(psd * units.Z0 / effective_aperture(carrier)) / 100.0)


def reference_noise_figure_db():
    """Noise figure that puts the reference thermal receiver at the quoted sensitivity."""
    base = _thermal_sensitivity(CONVENTIONAL_REFERENCE_TEMPERATURE, 1.0, CONVENTIONAL_REFERENCE_CARRIER)
    return float(20.0 * np.log10(CONVENTIONAL_REFERENCE_SENSITIVITY / base))


def conventional_baseline(temperature=CONVENTIONAL_REFERENCE_TEMPERATURE, noise_figure_db=None,
                          bandwidth=100e3, carrier=CONVENTIONAL_REFERENCE_CARRIER):
    """Thermal-noise-limited receiver: rho = 1, Phi = 0, noise k T F per Hz."""
    nf_db = reference_noise_figure_db() if noise_figure_db is None else noise_figure_db
    F = 10.0 ** (nf_db / 10.0)
    psd = units.K_BOLTZMANN * temperature * F
    return BasebandModel(1.0, 0.0, float(psd), _thermal_sensitivity(temperature, F, carrier), bandwidth)
