"""Four-level ladder |1> -> |2> -> |3> -> |4> driven by probe, coupling and RF."""

from dataclasses import dataclass, fields, replace

import numpy as np

from .. import units

TWO_PI = 2.0 * np.pi
_MAX_RATE = 1e11

_RATE_FIELDS = (
    "rabi_probe", "rabi_coupling", "rabi_rf", "gamma2", "gamma3", "gamma4", "dephasing_extra",
)
_DETUNING_FIELDS = ("detune_probe", "detune_coupling", "detune_rf")


@dataclass(frozen=True)
class LadderScheme:
    """Rabi frequencies, detunings and rates in rad/s; cell in SI units.

    Defaults are repo defaults for a Cs 6S1/2 -> 6P3/2 -> 47D5/2 -> 48P3/2
    ladder, not measured values.
    """

    rabi_probe: float = TWO_PI * 1.0e6
    rabi_coupling: float = TWO_PI * 3.0e6
    rabi_rf: float = 0.0
    detune_probe: float = 0.0
    detune_coupling: float = 0.0
    detune_rf: float = 0.0
    gamma2: float = TWO_PI * 5.2e6
    gamma3: float = TWO_PI * 10e3
    gamma4: float = TWO_PI * 10e3
    dephasing_extra: float = 0.0
    rf_dipole: float = 1443.4  # e*a0, Cs 47D5/2 -> 48P3/2, m_j = 1/2, pi
    probe_dipole: float = 3.18  # e*a0
    atom_density: float = 5e14  # m^-3
    cell_length: float = 0.01  # m
    temperature: float = 300.0  # K
    probe_wavelength: float = 852.347e-9  # m
    coupling_wavelength: float = 509.5e-9  # m
    atomic_mass: float = 132.905451931 * units.AMU  # kg

    def __post_init__(self):
        for name in _RATE_FIELDS:
            v = getattr(self, name)
            if not np.isfinite(v) or not 0 <= v <= _MAX_RATE:
                raise ValueError(f"{name}={v!r} outside [0, 1e11] rad/s")
        for name in _DETUNING_FIELDS:
            v = getattr(self, name)
            if not np.isfinite(v) or abs(v) > _MAX_RATE:
                raise ValueError(f"{name}={v!r} outside [-1e11, 1e11] rad/s")
        for name in ("atom_density", "cell_length", "probe_wavelength", "coupling_wavelength", "atomic_mass"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")

    @property
    def rf_field(self):
        """RF amplitude in V/cm implied by rabi_rf and rf_dipole."""
        return float(units.HBAR * self.rabi_rf / (self.rf_dipole * units.EA0) / 100.0)

    def with_rf_field(self, field_v_per_cm):
        """Copy with rabi_rf = d34 * E / hbar."""
        if field_v_per_cm < 0:
            raise ValueError("field amplitude must be >= 0")
        omega = self.rf_dipole * units.EA0 * field_v_per_cm * 100.0 / units.HBAR
        return replace(self, rabi_rf=float(omega))

    def replace(self, **changes):
        return replace(self, **changes)

    @property
    def k_probe(self):
        return TWO_PI / self.probe_wavelength

    @property
    def k_coupling(self):
        return TWO_PI / self.coupling_wavelength

    def thermal_velocity(self):
        """1-D Maxwell-Boltzmann standard deviation, m/s."""
        return float(np.sqrt(units.K_BOLTZMANN * self.temperature / self.atomic_mass))

    def to_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


def scheme_from_config(cfg):
    """Build a scheme from an ``eit``-style config mapping (frequencies as f = omega / 2pi in Hz)."""
    s = LadderScheme(
        rabi_probe=TWO_PI * cfg["rabi_probe_hz"],
        rabi_coupling=TWO_PI * cfg["rabi_coupling_hz"],
        rabi_rf=TWO_PI * cfg["rabi_rf_hz"],
        detune_probe=TWO_PI * cfg.get("detune_probe_hz", 0.0),
        detune_coupling=TWO_PI * cfg["detune_coupling_hz"],
        detune_rf=TWO_PI * cfg["detune_rf_hz"],
        gamma2=TWO_PI * cfg["gamma2_hz"],
        gamma3=TWO_PI * cfg["gamma3_hz"],
        gamma4=TWO_PI * cfg["gamma4_hz"],
        dephasing_extra=TWO_PI * cfg["dephasing_extra_hz"],
        rf_dipole=cfg["rf_dipole_ea0"],
        probe_dipole=cfg["probe_dipole_ea0"],
        atom_density=cfg["cell"]["density_m3"],
        cell_length=cfg["cell"]["length_m"],
        temperature=cfg["cell"]["temperature_k"],
        probe_wavelength=cfg["probe_wavelength_m"],
        coupling_wavelength=cfg["coupling_wavelength_m"],
        atomic_mass=cfg["atomic_mass_u"] * units.AMU,
    )
    return s


SCENARIOS = ("i", "ii", "iii")


def scenario_scheme(scheme, scenario, rabi_rf=None):
    """Drive configuration for the three standard readout cases.

    i: probe only; ii: probe and coupling; iii: probe, coupling and RF.
    """
    if scenario not in SCENARIOS:
        raise ValueError(f"scenario must be one of {SCENARIOS}")
    if scenario == "i":
        return replace(scheme, rabi_coupling=0.0, rabi_rf=0.0)
    if scenario == "ii":
        return replace(scheme, rabi_rf=0.0)
    return replace(scheme, rabi_rf=scheme.rabi_rf if rabi_rf is None else rabi_rf)
