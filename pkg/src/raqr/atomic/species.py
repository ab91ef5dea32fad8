"""Alkali species data: quantum defects, D2-line data and scaling constants."""

from dataclasses import dataclass, field, replace
from fractions import Fraction
from importlib import resources
from pathlib import Path
from types import MappingProxyType

import yaml

from .. import units
from ..exceptions import MissingDataError

SPECIES_NAMES = ("Cs133", "Rb87", "Rb85")


@dataclass(frozen=True)
class AtomSpecies:
    name: str
    atomic_mass: float  # kg
    ionization_energy: float  # THz
    quantum_defect_coeffs: MappingProxyType  # (l, Fraction j) -> (d0, d2, d4)
    d2_wavelengths: tuple  # (probe_nm, coupling_nm)
    d2_linewidth_hz: float
    d2_dipole_ea0: float
    core_radius_a0: float = 0.0
    scaling_constants: MappingProxyType = field(default_factory=lambda: MappingProxyType({}))

    def __post_init__(self):
        if not self.ionization_energy > 0:
            raise ValueError("ionization_energy must be positive")

    @property
    def rydberg_constant_mass_corrected(self):
        """Reduced-mass Rydberg constant in THz."""
        core_mass = self.atomic_mass - units.M_ELECTRON
        return units.RYDBERG_INF_HZ / (1.0 + units.M_ELECTRON / core_mass) * 1e-12

    @property
    def is_hydrogenic(self):
        return all(c == (0.0, 0.0, 0.0) for c in self.quantum_defect_coeffs.values())

    def quantum_defect(self, n, l, j):
        """Rydberg-Ritz defect for (n, l, j); zero for l >= 4."""
        key = (int(l), Fraction(j))
        coeffs = self.quantum_defect_coeffs.get(key)
        if coeffs is None:
            if l >= 4:
                return 0.0
            # j-averaged fallback when only one fine-structure series exists
            same_l = [c for (ll, _), c in self.quantum_defect_coeffs.items() if ll == l]
            if not same_l:
                raise MissingDataError(f"{self.name}: no quantum-defect series for l={l}, j={j}")
            coeffs = tuple(sum(c[i] for c in same_l) / len(same_l) for i in range(3))
        d0, d2, d4 = coeffs
        m = n - d0
        return d0 + d2 / m**2 + d4 / m**4

    def without_defects(self):
        """Copy of this species with every quantum defect set to zero."""
        zeroed = {k: (0.0, 0.0, 0.0) for k in self.quantum_defect_coeffs}
        return replace(
            self,
            name=f"{self.name}-hydrogenic",
            quantum_defect_coeffs=MappingProxyType(zeroed),
            core_radius_a0=0.0,
        )


def _parse(data):
    defects = {}
    for key, coeffs in data["quantum_defects"].items():
        l_str, j_str = str(key).split(",")
        c = tuple(float(x) for x in coeffs) + (0.0,) * (3 - len(coeffs))
        defects[(int(l_str), Fraction(j_str))] = c
    d2 = data["d2_line"]
    return AtomSpecies(
        name=data["name"],
        atomic_mass=float(data["atomic_mass_u"]) * units.AMU,
        ionization_energy=float(units.wavenumber_cm_to_hz(data["ionization_energy_cm"])) * 1e-12,
        quantum_defect_coeffs=MappingProxyType(defects),
        d2_wavelengths=(float(d2["probe_wavelength_nm"]), float(d2["coupling_wavelength_nm"])),
        d2_linewidth_hz=float(d2["natural_linewidth_hz"]),
        d2_dipole_ea0=float(d2["effective_dipole_ea0"]),
        core_radius_a0=float(data.get("core_radius_a0", 0.0)),
        scaling_constants=MappingProxyType(dict(data.get("scaling", {}))),
    )


def load_species(name_or_path):
    """Load a bundled species by name (``"Cs133"``) or a species file by path."""
    path = Path(str(name_or_path))
    if path.suffix in (".yaml", ".yml") and path.exists():
        text = path.read_text()
    elif name_or_path in SPECIES_NAMES:
        text = resources.files("raqr.data.species").joinpath(f"{name_or_path}.yaml").read_text()
    else:
        raise ValueError(f"unknown species {name_or_path!r}; expected one of {SPECIES_NAMES}")
    return _parse(yaml.safe_load(text))
