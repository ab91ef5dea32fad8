"""Probe susceptibility, transmission spectra, Doppler averaging and ATS readout."""

import csv
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks
from scipy.special import wofz

from .. import units
from .._validation import check_ascending
from ..exceptions import BelowATSThresholdError
from .lindblad import GEN_COUPLING, GEN_PROBE, _augmented, liouvillian, rate_scale, solve_steady_vectors

_RHO21 = 1  # column-stacked index of rho[1, 0]


@dataclass(frozen=True)
class SpectralTrace:
    detuning_grid: np.ndarray  # rad/s, strictly ascending
    transmission: np.ndarray  # in [0, 1]
    susceptibility: np.ndarray  # complex

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["detuning_Hz", "transmission", "re_chi", "im_chi"])
            for d, t, chi in zip(self.detuning_grid, self.transmission, self.susceptibility):
                w.writerow([repr(float(d / (2 * np.pi))), repr(float(t)), repr(float(chi.real)), repr(float(chi.imag))])


def chi_prefactor(scheme):
    if scheme.rabi_probe <= 0:
        raise ValueError("probe Rabi frequency must be > 0 to define a susceptibility")
    d = scheme.probe_dipole * units.EA0
    return 2.0 * scheme.atom_density * d * d / (units.EPSILON_0 * units.HBAR * scheme.rabi_probe)


def probe_susceptibility(scheme, rho):
    """Linear probe susceptibility from the steady-state coherence rho_21."""
    return complex(-chi_prefactor(scheme) * np.asarray(rho)[1, 0])


def transmission_from_chi(scheme, chi):
    return np.exp(-scheme.k_probe * np.imag(chi) * scheme.cell_length)


def _rho21_grid(scheme, detune_probe, detune_coupling=None):
    s = rate_scale(scheme)
    L = liouvillian(scheme, detune_probe, detune_coupling) / s
    return solve_steady_vectors(L)[..., _RHO21]


def susceptibility_grid(scheme, probe_detuning_grid):
    """Doppler-free chi at each probe detuning (one steady-state solve per point)."""
    return -chi_prefactor(scheme) * _rho21_grid(scheme, np.asarray(probe_detuning_grid, dtype=float))


def _gaussian_resolvent_mean(mu, sigma):
    """<1 / (1 + v mu)> for v ~ N(0, sigma^2), via the Faddeeva function."""
    mu = np.asarray(mu, dtype=complex)
    out = np.ones_like(mu)
    x = mu * sigma
    small = np.abs(x) < 1e-4
    out[small] = 1.0 + x[small] ** 2 + 3.0 * x[small] ** 4
    big = ~small
    zeta = (-1.0 / mu[big]) / (np.sqrt(2.0) * sigma)
    upper = zeta.imag > 0
    mean = np.empty_like(zeta)
    mean[upper] = 1j * np.sqrt(np.pi) * wofz(zeta[upper])
    mean[~upper] = -1j * np.sqrt(np.pi) * np.conj(wofz(np.conj(zeta[~upper])))
    out[big] = mean / (np.sqrt(2.0) * sigma) / mu[big]
    return out


def _doppler_exact(scheme, grid):
    """Exact Gaussian velocity average of rho_21.

    A(v) = A0 + v B is affine in v, so A(v)^-1 b = W diag(1/(1 + v mu)) W^-1 x0
    with (mu, W) the eigensystem of A0^-1 B; each resolvent averages in closed
    form over the Maxwell-Boltzmann distribution.
    """
    s = rate_scale(scheme)
    A0 = _augmented(liouvillian(scheme, grid) / s)
    B = (-scheme.k_probe * GEN_PROBE + scheme.k_coupling * GEN_COUPLING) / s
    B = np.array(B, copy=True)
    B[0, :] = 0.0
    b = np.zeros(A0.shape[:-1], dtype=complex)
    b[..., 0] = 1.0
    x0 = np.linalg.solve(A0, b[..., None])[..., 0]
    M = np.linalg.solve(A0, np.broadcast_to(B, A0.shape))
    mu, W = np.linalg.eig(M)
    c = np.linalg.solve(W, x0[..., None])[..., 0]
    f = _gaussian_resolvent_mean(mu, scheme.thermal_velocity())
    return np.sum(W[..., _RHO21, :] * f * c, axis=-1)


def _doppler_quadrature(scheme, grid, velocity_classes, method):
    sigma = scheme.thermal_velocity()
    if method == "gauss-hermite":
        nodes, weights = np.polynomial.hermite_e.hermegauss(velocity_classes)
        weights = weights / np.sqrt(2.0 * np.pi)
    else:
        nodes = np.linspace(-6.0, 6.0, velocity_classes)
        weights = np.exp(-0.5 * nodes**2)
        weights /= weights.sum()
    v = sigma * nodes
    dp = grid[:, None] - scheme.k_probe * v[None, :]
    dc = scheme.detune_coupling + scheme.k_coupling * v[None, :]
    rho21 = np.empty(dp.shape, dtype=complex)
    chunk = max(1, 200_000 // len(v))
    for i in range(0, len(grid), chunk):
        rho21[i:i + chunk] = _rho21_grid(scheme, dp[i:i + chunk], np.broadcast_to(dc, dp[i:i + chunk].shape))
    return rho21 @ weights


def doppler_average(scheme, probe_detuning_grid, velocity_classes=61, method="exact"):
    """Doppler-broadened spectrum for counter-propagating probe and coupling.

    Velocity class v sees detunings (dp - k_p v, dc + k_c v). ``method`` is
    ``"exact"`` (closed-form Gaussian average), ``"gauss-hermite"`` or
    ``"uniform"`` (trapezoid over +-6 sigma); the quadratures use
    ``velocity_classes`` nodes.
    """
    if velocity_classes < 31:
        raise ValueError("velocity_classes must be >= 31")
    grid = check_ascending(probe_detuning_grid, "probe_detuning_grid")
    if scheme.temperature == 0:
        rho21 = _rho21_grid(scheme, grid)
    elif method == "exact":
        rho21 = _doppler_exact(scheme, grid)
    elif method in ("gauss-hermite", "uniform"):
        rho21 = _doppler_quadrature(scheme, grid, velocity_classes, method)
    else:
        raise ValueError(f"unknown Doppler method {method!r}")
    chi = -chi_prefactor(scheme) * rho21
    return SpectralTrace(grid, np.clip(transmission_from_chi(scheme, chi), 0.0, 1.0), chi)


def transmission_spectrum(scheme, probe_detuning_grid, doppler=False, **doppler_kw):
    """Probe transmission exp(-k Im(chi) L) over a probe-detuning scan (rad/s)."""
    grid = check_ascending(probe_detuning_grid, "probe_detuning_grid")
    if grid[0] > -5 * scheme.gamma2 or grid[-1] < 5 * scheme.gamma2:
        raise ValueError("detuning grid must span at least +-5 gamma2")
    if doppler:
        return doppler_average(scheme, grid, **doppler_kw)
    chi = susceptibility_grid(scheme, grid)
    return SpectralTrace(grid, np.clip(transmission_from_chi(scheme, chi), 0.0, 1.0), chi)


def count_peaks(trace, prominence=0.1):
    T = trace.transmission
    dyn = float(T.max() - T.min())
    if dyn <= 0:
        return 0
    peaks, _ = find_peaks(T, prominence=prominence * dyn)
    return len(peaks)


def _parabolic_vertex(x, y, i):
    denom = y[i - 1] - 2.0 * y[i] + y[i + 1]
    if denom == 0:
        return x[i]
    delta = 0.5 * (y[i - 1] - y[i + 1]) / denom
    step = x[i + 1] - x[i] if delta >= 0 else x[i] - x[i - 1]
    return x[i] + delta * step


def ats_peaks(trace, prominence=0.1):
    """Detunings (rad/s) of the two most prominent transmission maxima, ascending."""
    T = trace.transmission
    dyn = float(T.max() - T.min())
    peaks, props = (find_peaks(T, prominence=prominence * dyn) if dyn > 0 else (np.array([], int), {}))
    if len(peaks) < 2:
        raise BelowATSThresholdError(f"found {len(peaks)} transmission peak(s); ATS needs two")
    top = peaks[np.argsort(props["prominences"], kind="stable")[::-1][:2]]
    return np.sort([_parabolic_vertex(trace.detuning_grid, T, i) for i in top])


def ats_splitting(trace, prominence=0.1):
    """Frequency separation of the two ATS peaks, in Hz."""
    lo, hi = ats_peaks(trace, prominence)
    return float((hi - lo) / (2.0 * np.pi))


def field_from_splitting(splitting, d34):
    """RF amplitude in V/cm from an ATS splitting (Hz) and dipole d34 (e*a0)."""
    if d34 == 0:
        raise ValueError("d34 must be non-zero")
    if splitting <= 0:
        raise ValueError("splitting must be > 0")
    return float(units.H_PLANCK * splitting / (abs(d34) * units.EA0) / 100.0)


def eit_linewidth(with_coupling, without_coupling):
    """FWHM (rad/s) of the transparency feature Im(chi_off) - Im(chi_on)."""
    x = with_coupling.detuning_grid
    feature = np.imag(without_coupling.susceptibility) - np.imag(with_coupling.susceptibility)
    i = int(np.argmax(feature))
    half = 0.5 * feature[i]
    lo = i
    while lo > 0 and feature[lo] > half:
        lo -= 1
    hi = i
    while hi < len(x) - 1 and feature[hi] > half:
        hi += 1
    if feature[lo] > half or feature[hi] > half:
        raise ValueError("transparency feature not resolved inside the grid")
    left = np.interp(half, [feature[lo], feature[lo + 1]], [x[lo], x[lo + 1]])
    right = np.interp(half, [feature[hi], feature[hi - 1]], [x[hi], x[hi - 1]])
    return float(right - left)
