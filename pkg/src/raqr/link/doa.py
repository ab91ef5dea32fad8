"""Single-source direction finding on a uniform linear array: bound and ML estimate."""

import numpy as np
from scipy.optimize import minimize_scalar
from sklearn.base import BaseEstimator

from ..exceptions import EstimationFailureError, UnidentifiableError
from .channel import EXPERIMENT_DOA, trial_rng
from .mimo import steering_vector
from .siso import TrialResult


def doa_crb(geometry, snr, samples, theta):
    """Deterministic single-source CRB (rad^2) for a ULA.

    6 / (snr T (2 pi d cos theta)^2 M (M^2 - 1)), snr per element and snapshot.
    """
    M = geometry.elements
    if M < 2:
        raise UnidentifiableError("a single element cannot resolve direction")
    if not snr > 0 or samples < 1:
        raise ValueError("snr must be > 0 and samples >= 1")
    k = 2.0 * np.pi * geometry.spacing * np.cos(theta)
    return 6.0 / (snr * samples * k * k * M * (M * M - 1))


def array_snapshots(geometry, theta, signal, noise_std=0.0, rng=None):
    """X = a(theta) s^T + noise, shape (M, T)."""
    a = steering_vector(geometry, theta)
    X = np.outer(a, np.asarray(signal))
    if noise_std > 0:
        if rng is None:
            raise ValueError("rng required for noisy snapshots")
        X = X + noise_std / np.sqrt(2) * (rng.standard_normal(X.shape) + 1j * rng.standard_normal(X.shape))
    return X


class MLDOAEstimator(BaseEstimator):
    """Maximum-likelihood bearing from a (M, T) snapshot matrix.

    Coarse grid over (-pi/2, pi/2) then golden-section refinement of
    a(theta)^H R a(theta) around the best grid point.
    """

    def __init__(self, spacing=0.5, grid_step=1e-3, xtol=1e-10):
        self.spacing = spacing
        self.grid_step = grid_step
        self.xtol = xtol

    def _objective(self, R, theta):
        m = np.arange(R.shape[0])
        a = np.exp(2j * np.pi * self.spacing * m * np.sin(theta))
        return float(np.real(np.conj(a) @ R @ a))

    def fit(self, X, y=None):
        X = np.asarray(X)
        if X.ndim != 2:
            raise ValueError("X must be an (M, T) snapshot matrix")
        M, T = X.shape
        if M < 2:
            raise UnidentifiableError("a single element cannot resolve direction")
        if T < M:
            raise ValueError(f"need T >= M snapshots, got T={T}, M={M}")
        if not np.all(np.isfinite(X)):
            raise EstimationFailureError("non-finite snapshots")
        R = X @ X.conj().T / T
        scale = np.real(np.trace(R))
        if not scale > 0 or np.linalg.matrix_rank(R, tol=1e-12 * scale) == 0:
            raise EstimationFailureError("degenerate sample covariance")
        R = R / scale
        lim = np.pi / 2 - self.grid_step
        grid = np.arange(-lim, lim + 0.5 * self.grid_step, self.grid_step)
        m = np.arange(M)
        A = np.exp(2j * np.pi * self.spacing * np.outer(np.sin(grid), m))
        power = np.real(np.einsum("gi,ij,gj->g", A.conj(), R, A))
        i = int(np.argmax(power))
        lo = grid[max(i - 1, 0)]
        hi = grid[min(i + 1, len(grid) - 1)]
        res = minimize_scalar(lambda t: -self._objective(R, t), bracket=None, bounds=(lo, hi),
                              method="bounded", options={"xatol": self.xtol})
        theta = float(res.x) if -res.fun >= power[i] else float(grid[i])
        self.theta_ = theta
        self.spectrum_ = power
        self.grid_ = grid
        return self

    def predict(self, X=None):
        return self.theta_


def doa_estimate(samples, geometry, grid_step=1e-3):
    if geometry.elements != np.asarray(samples).shape[0]:
        raise ValueError("sample rows must match the number of array elements")
    return MLDOAEstimator(spacing=geometry.spacing, grid_step=grid_step).fit(samples).theta_


def doa_mse(geometry, theta, snr, samples=64, trials=500, seed=0, grid_step=1e-3):
    """Monte Carlo MSE of the ML estimate for a unit-modulus random-phase source.

    Returns (mse, crb, list of TrialResult).
    """
    records = []
    for k in range(trials):
        rng = trial_rng(seed, EXPERIMENT_DOA, k)
        s = np.exp(2j * np.pi * rng.random(samples))
        X = array_snapshots(geometry, theta, s, noise_std=1.0 / np.sqrt(snr), rng=rng)
        th = doa_estimate(X, geometry, grid_step)
        records.append(TrialResult(snr=float(10 * np.log10(snr)), theta_true=theta, theta_hat=th))
    err = np.array([r.theta_hat - theta for r in records])
    return float(np.mean(err**2)), doa_crb(geometry, snr, samples, theta), records
