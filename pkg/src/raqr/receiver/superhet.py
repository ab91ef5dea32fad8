"""Superheterodyne operating point: small-signal gain and phase of the atomic mixer."""

from dataclasses import dataclass, field, replace

import numpy as np

from .. import units
from ..eit.scheme import LadderScheme
from ..eit.spectrum import doppler_average, susceptibility_grid
from ..exceptions import ZeroGainBiasError
from .dsp import PHOTODETECT_MODES


@dataclass(frozen=True)
class SuperhetConfig:
    """One superheterodyne receiver; the LO is the RF drive of ``scheme``.

    Photodetector and noise constants are repo defaults, not measured values.
    """

    scheme: LadderScheme = field(default_factory=LadderScheme)
    f_c: float = 6.94515e9 + 150e3  # Hz
    f_l: float = 6.94515e9  # Hz
    lo_field: float = 1e-3  # V/cm
    probe_power: float = 29.8e-6  # W
    photodetect_mode: str = "DIOD"
    pd_responsivity: float = 0.5  # A/W
    pd_noise_current: float = 1e-12  # A/sqrt(Hz)
    bcod_lo_power: float = 1e-3  # W
    if_bandwidth: float = 100e3  # Hz
    instantaneous_bandwidth: float = 10e6  # Hz
    doppler: bool = True
    atom_number: float = 1e8
    coherence_time: float = 1e-6  # s
    integration_time: float = 1.0  # s
    sql_calibration: float | None = None  # V/cm * s; None -> hbar / d_RF

    def __post_init__(self):
        if self.photodetect_mode not in PHOTODETECT_MODES:
            raise ValueError(f"photodetect_mode must be one of {PHOTODETECT_MODES}")
        if self.f_c <= 0 or self.f_l <= 0:
            raise ValueError("frequencies must be positive")
        if abs(self.f_c - self.f_l) > self.instantaneous_bandwidth:
            raise ValueError(
                f"|f_c - f_l| = {abs(self.f_c - self.f_l):.4g} Hz exceeds the instantaneous "
                f"bandwidth {self.instantaneous_bandwidth:.4g} Hz"
            )
        if self.lo_field < 0 or self.probe_power <= 0 or self.pd_responsivity <= 0:
            raise ValueError("lo_field >= 0, probe_power > 0 and pd_responsivity > 0 are required")
        if self.if_bandwidth <= 0:
            raise ValueError("if_bandwidth must be positive")

    @property
    def f_if(self):
        return abs(self.f_c - self.f_l)

    def replace(self, **changes):
        return replace(self, **changes)


def probe_field_transmission(scheme, rf_fields, doppler=True):
    """Complex probe field transmission exp(i k L chi / 2) versus RF amplitude (V/cm)."""
    fields = np.atleast_1d(np.asarray(rf_fields, dtype=float))
    chi = np.empty(fields.shape, dtype=complex)
    grid = np.array([scheme.detune_probe])
    for i, f in enumerate(fields):
        s = scheme.with_rf_field(f)
        if doppler and s.temperature > 0:
            chi[i] = doppler_average(s, grid).susceptibility[0]
        else:
            chi[i] = susceptibility_grid(s, grid)[0]
    return np.exp(0.5j * scheme.k_probe * scheme.cell_length * chi)


def detector_current(config, rf_fields):
    """Mean photocurrent (A) versus RF amplitude for the configured detection mode."""
    t = probe_field_transmission(config.scheme, rf_fields, config.doppler)
    R = config.pd_responsivity
    if config.photodetect_mode == "DIOD":
        return R * config.probe_power * np.abs(t) ** 2
    # balanced homodyne: optical LO phase locked to the probe at the bias point
    t0 = probe_field_transmission(config.scheme, [config.lo_field], config.doppler)[0]
    ref = np.exp(-1j * np.angle(t0))
    return 2.0 * R * np.sqrt(config.probe_power * config.bcod_lo_power) * np.real(t * ref)


def _field_scale(scheme):
    """RF amplitude (V/cm) at which the RF Rabi frequency equals gamma2."""
    return units.HBAR * scheme.gamma2 / (scheme.rf_dipole * units.EA0) / 100.0


def current_slope(config, rel_step=1e-3):
    """d(current)/d(field) at the LO bias, A per V/cm (central difference)."""
    e0 = config.lo_field
    h = rel_step * max(e0, _field_scale(config.scheme))
    lo = max(e0 - h, 0.0)
    i_lo, i_0, i_hi = detector_current(config, [lo, e0, e0 + h])
    slope = (i_hi - i_lo) / (e0 + h - lo)
    scale = config.pd_responsivity * config.probe_power / _field_scale(config.scheme)
    if abs(slope) < 1e-6 * scale or np.sign(i_hi - i_0) != np.sign(i_0 - i_lo):
        raise ZeroGainBiasError(f"LO field {e0} V/cm sits at a stationary point of the response")
    return float(slope)


def effective_aperture(carrier):
    """Isotropic effective area lambda^2 / 4 pi, m^2: converts received power to field."""
    lam = units.C_LIGHT / carrier
    return lam * lam / (4.0 * np.pi)


def superhet_gain(config):
    """Baseband gain rho (A per sqrt(W) of received power) and phase Phi (rad).

    rho = |dI/dE| * sqrt(Z0 / A_eff); Phi is 0 for a rising bias slope and pi
    for a falling one. A signal phase offset theta at the RF input appears as
    theta + Phi on the IF beat.
    """
    slope = current_slope(config) / 100.0  # A per V/m
    rho = abs(slope) * np.sqrt(units.Z0 / effective_aperture(config.f_c))
    phi = 0.0 if slope > 0 else np.pi
    return float(rho), float(phi)


def gain_curve(config, lo_fields):
    """|dI/dE| (A per V/cm) over a sweep of LO amplitudes; 0 where the slope vanishes."""
    out = []
    for e in lo_fields:
        try:
            out.append(abs(current_slope(config.replace(lo_field=float(e)))))
        except ZeroGainBiasError:
            out.append(0.0)
    return np.array(out)


def optimal_lo_field(config, lo_fields):
    """LO amplitude from ``lo_fields`` with the steepest response."""
    g = gain_curve(config, lo_fields)
    return float(np.asarray(lo_fields)[int(np.argmax(g))])




def beat_waveform(config, signal_field, signal_phase=0.0, fs=None, duration=None, table_points=257):
    """Quasi-static photocurrent for LO plus a weak signal (V/cm) with phase offset.

    The atoms follow the resultant RF envelope |E_LO + E_sig exp(i(2 pi f_if t + phase))|,
    which is valid while f_if is far inside the EIT response bandwidth.
    Returns (t, current, fs).
    """
    f_if = config.f_if
    if f_if <= 0:
        raise ValueError("f_c and f_l must differ for a beat")
    fs = 16.0 * f_if if fs is None else fs
    duration = 20.0 / f_if if duration is None else duration
    t = np.arange(int(round(duration * fs))) / fs
    env = np.abs(config.lo_field + signal_field * np.exp(1j * (2 * np.pi * f_if * t + signal_phase)))
    lo, hi = float(env.min()), float(env.max())
    if hi - lo < 1e-15:
        return t, np.full(t.shape, float(detector_current(config, [lo])[0])), fs
    table = np.linspace(lo, hi, table_points)
    cur = detector_current(config, table)
    return t, np.interp(env, table, cur), fs
