"""Reception blocks: atomic mixer, photodetection, down-conversion, sampling and noise."""

from .dsp import IQDownconverter, Sampler, bcod_branches, downconvert, photodetect, sample
from .noise import (
    BasebandModel,
    NoiseBudget,
    baseband_model,
    conventional_baseline,
    noise_budget,
    sql_sensitivity,
)
from .superhet import SuperhetConfig, gain_curve, optimal_lo_field, probe_field_transmission, superhet_gain

__all__ = [
    "BasebandModel", "IQDownconverter", "NoiseBudget", "Sampler", "SuperhetConfig", "baseband_model",
    "bcod_branches", "conventional_baseline", "downconvert", "gain_curve", "noise_budget",
    "optimal_lo_field", "photodetect", "probe_field_transmission", "sample", "sql_sensitivity",
    "superhet_gain",
]
