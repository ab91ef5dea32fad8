"""Photodetection, IQ down-conversion and sampling (blocks B2-B4)."""

from fractions import Fraction

import numpy as np
from scipy import signal
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .. import units
from .._validation import check_positive, check_rng, check_series
from ..exceptions import AliasingConfigError, ImageOverlapError

PHOTODETECT_MODES = ("DIOD", "BCOD")


def photodetect(optical_power, mode="DIOD", responsivity=0.5, bandwidth=None, rng=None):
    """Photocurrent from optical power samples.

    DIOD takes a 1-D power series. BCOD takes a (2, N) array of branch
    powers and returns their difference current. Shot noise with variance
    2 q R <P> bandwidth per branch is added when ``rng`` is given.
    """
    if mode not in PHOTODETECT_MODES:
        raise ValueError(f"mode must be one of {PHOTODETECT_MODES}")
    P = np.asarray(optical_power, dtype=float)
    if np.any(P < 0):
        raise ValueError("optical power samples must be non-negative")
    if mode == "DIOD" and P.ndim != 1:
        raise ValueError("DIOD expects a 1-D power series")
    if mode == "BCOD" and (P.ndim != 2 or P.shape[0] != 2):
        raise ValueError("BCOD expects a (2, N) array of branch powers")
    current = responsivity * P
    if rng is not None:
        if bandwidth is None:
            raise ValueError("bandwidth is required for shot noise")
        rng = check_rng(rng)
        mean = current.mean(axis=-1, keepdims=True)
        current = current + rng.standard_normal(current.shape) * np.sqrt(2 * units.E_CHARGE * mean * bandwidth)
    return current if mode == "DIOD" else current[0] - current[1]


def bcod_branches(signal_power, lo_power, phase=0.0, common_noise=None):
    """Branch powers of a balanced 50/50 homodyne of a probe against an optical LO."""
    ps = np.asarray(signal_power, dtype=float)
    pl = np.broadcast_to(np.asarray(lo_power, dtype=float), ps.shape)
    beat = 2.0 * np.sqrt(ps * pl) * np.cos(phase)
    common = 0.5 * (ps + pl)
    if common_noise is not None:
        common = common * (1.0 + np.asarray(common_noise))
    return np.stack([common + 0.5 * beat, common - 0.5 * beat])


def design_lowpass(fs, bandwidth, ripple_db=70.0):
    """Linear-phase Kaiser FIR: flat to ``bandwidth``, >= ripple_db down from 1.5 * bandwidth."""
    nyq = fs / 2.0
    width = 0.5 * bandwidth
    numtaps, beta = signal.kaiserord(ripple_db, width / nyq)
    numtaps |= 1  # odd length: integer group delay
    return signal.firwin(numtaps, 1.25 * bandwidth, window=("kaiser", beta), fs=fs)


class IQDownconverter(TransformerMixin, BaseEstimator):
    """Mix a real IF series to complex baseband and lowpass it to ``bandwidth``.

    The FIR group delay is removed, so a tone A cos(2 pi f_if t + phi) maps to
    the constant (A / 2) exp(j phi).
    """

    def __init__(self, f_if=1e6, bandwidth=100e3, fs=8e6, ripple_db=70.0):
        self.f_if = f_if
        self.bandwidth = bandwidth
        self.fs = fs
        self.ripple_db = ripple_db

    def fit(self, X=None, y=None):
        check_positive(self.f_if, "f_if")
        check_positive(self.bandwidth, "bandwidth")
        check_positive(self.fs, "fs")
        if self.f_if <= self.bandwidth:
            raise ImageOverlapError(f"f_if={self.f_if} must exceed the bandwidth {self.bandwidth}")
        if self.fs < 4 * self.f_if:
            raise ValueError(f"fs={self.fs} must be >= 4 * f_if")
        self.taps_ = design_lowpass(self.fs, self.bandwidth, self.ripple_db)
        return self

    def transform(self, X):
        check_is_fitted(self, "taps_")
        x = check_series(X, "photocurrent", complex_ok=False)
        t = np.arange(len(x)) / self.fs
        mixed = x * np.exp(-2j * np.pi * self.f_if * t)
        return np.convolve(mixed, self.taps_, mode="same")


def downconvert(photocurrent, f_if, bandwidth, fs, ripple_db=70.0):
    return IQDownconverter(f_if, bandwidth, fs, ripple_db).fit().transform(photocurrent)


class Sampler(TransformerMixin, BaseEstimator):
    """Resample a dense complex baseband stream at ``rate`` (ADC model)."""

    def __init__(self, rate=200e3, bandwidth=100e3, fs_in=8e6):
        self.rate = rate
        self.bandwidth = bandwidth
        self.fs_in = fs_in

    def fit(self, X=None, y=None):
        check_positive(self.rate, "rate")
        check_positive(self.fs_in, "fs_in")
        if self.rate < 2 * self.bandwidth:
            raise AliasingConfigError(f"rate {self.rate} Hz below Nyquist 2W = {2 * self.bandwidth} Hz")
        ratio = Fraction(self.rate / self.fs_in).limit_denominator(1000)
        if ratio > 1:
            raise ValueError("sampling rate exceeds the input stream rate")
        self.up_, self.down_ = ratio.numerator, ratio.denominator
        return self

    def transform(self, X):
        check_is_fitted(self, "up_")
        x = check_series(X, "baseband")
        if self.up_ == 1:
            return x[:: self.down_].copy()
        return signal.resample_poly(x, self.up_, self.down_)


def sample(baseband, rate, bandwidth, fs_in):
    return Sampler(rate, bandwidth, fs_in).fit().transform(baseband)
