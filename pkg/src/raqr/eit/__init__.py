"""Four-level ladder master equation, EIT/ATS spectra and RF readout."""

from .lindblad import DensityMatrix4, ground_state, liouvillian, propagate, steady_state, steady_state_residual
from .scheme import LadderScheme, scenario_scheme, scheme_from_config
from .spectrum import (
    SpectralTrace,
    ats_peaks,
    ats_splitting,
    count_peaks,
    doppler_average,
    eit_linewidth,
    field_from_splitting,
    probe_susceptibility,
    transmission_spectrum,
)

__all__ = [
    "DensityMatrix4", "LadderScheme", "SpectralTrace", "ats_peaks", "ats_splitting", "count_peaks",
    "doppler_average", "eit_linewidth", "field_from_splitting", "ground_state", "liouvillian",
    "probe_susceptibility", "propagate", "scenario_scheme", "scheme_from_config", "steady_state",
    "steady_state_residual", "transmission_spectrum",
]
