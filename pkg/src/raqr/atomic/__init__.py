"""Alkali Rydberg structure: energies, wavefunctions, dipoles and Stark maps."""

from .angular import angular_z, clebsch_gordan, wigner_3j, wigner_6j
from .energies import effective_n, level_energy, scaling_property, transition_frequency
from .species import AtomSpecies, load_species
from .stark import StarkMap, find_anticrossings, polarizability, quadratic_fit, stark_basis, stark_map
from .states import RydbergState, allowed_transition
from .wavefunctions import (
    GridSpec,
    WavefunctionTrace,
    electron_density,
    radial_matrix_element,
    radial_wavefunction,
)

__all__ = [
    "AtomSpecies", "GridSpec", "RydbergState", "StarkMap", "WavefunctionTrace",
    "allowed_transition", "angular_z", "clebsch_gordan", "effective_n", "electron_density",
    "find_anticrossings", "level_energy", "load_species", "polarizability", "quadratic_fit",
    "radial_matrix_element", "radial_wavefunction", "scaling_property", "stark_basis",
    "stark_map", "transition_frequency", "wigner_3j", "wigner_6j",
]
