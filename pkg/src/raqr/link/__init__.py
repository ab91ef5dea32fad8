"""Link-level experiments: SISO BER, receive-array rate and direction finding."""

from .channel import ChannelConfig, draw_channel, pathloss
from .doa import MLDOAEstimator, doa_crb, doa_estimate, doa_mse
from .mimo import ArrayGeometry, high_snr_gap, simulate_mimo_rate, steering_vector
from .siso import TrialResult, ber_at_snr, rayleigh_ber, simulate_siso

__all__ = [
    "ArrayGeometry", "ChannelConfig", "MLDOAEstimator", "TrialResult", "ber_at_snr", "doa_crb",
    "doa_estimate", "doa_mse", "draw_channel", "high_snr_gap", "pathloss", "rayleigh_ber",
    "simulate_mimo_rate", "simulate_siso", "steering_vector",
]
