"""Lindblad generator and steady state of the four-level ladder.

Vectorization is column-stacking: vec(A rho B) = (B^T kron A) vec(rho),
so rho_ij sits at index i + 4 j.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from ..exceptions import IllPosedError

DIM = 4
_I = np.eye(DIM)
TRACE_ROW = np.eye(DIM).reshape(-1, order="F")


def _ket_bra(i, j):
    m = np.zeros((DIM, DIM), dtype=complex)
    m[i, j] = 1.0
    return m


def _comm(H):
    return -1j * (np.kron(_I, H) - np.kron(H.T, _I))


def _dissipator(c):
    cdc = c.conj().T @ c
    return np.kron(c.conj(), c) - 0.5 * np.kron(_I, cdc) - 0.5 * np.kron(cdc.T, _I)


# generators of the detuning part: H_det = -dp P2 - (dp+dc) P3 - (dp+dc+drf) P4
_P = [_ket_bra(k, k) for k in range(DIM)]
GEN_PROBE = _comm(-(_P[1] + _P[2] + _P[3]))
GEN_COUPLING = _comm(-(_P[2] + _P[3]))
GEN_RF = _comm(-_P[3])


def _static_part(scheme):
    H = np.zeros((DIM, DIM), dtype=complex)
    for (i, j), omega in (((0, 1), scheme.rabi_probe), ((1, 2), scheme.rabi_coupling), ((2, 3), scheme.rabi_rf)):
        H[i, j] = H[j, i] = omega / 2.0
    L = _comm(H)
    for (lo, hi), gamma in (((0, 1), scheme.gamma2), ((1, 2), scheme.gamma3), ((2, 3), scheme.gamma4)):
        if gamma > 0:
            L = L + _dissipator(np.sqrt(gamma) * _ket_bra(lo, hi))
    if scheme.dephasing_extra > 0:
        # Rydberg-ground and Rydberg-intermediate coherences decay at dephasing_extra
        for k in (2, 3):
            L = L + _dissipator(np.sqrt(2.0 * scheme.dephasing_extra) * _P[k])
    return L


def liouvillian(scheme, detune_probe=None, detune_coupling=None):
    """16x16 generator with d vec(rho)/dt = L vec(rho).

    ``detune_probe``/``detune_coupling`` may be arrays; the result then has
    shape ``broadcast_shape + (16, 16)``.
    """
    dp = scheme.detune_probe if detune_probe is None else np.asarray(detune_probe, dtype=float)
    dc = scheme.detune_coupling if detune_coupling is None else np.asarray(detune_coupling, dtype=float)
    dp, dc = np.broadcast_arrays(dp, dc)
    base = _static_part(scheme) + scheme.detune_rf * GEN_RF
    return base + dp[..., None, None] * GEN_PROBE + dc[..., None, None] * GEN_COUPLING


def rate_scale(scheme):
    """Largest rate in the scheme; generators are normalized by it before solving."""
    vals = [abs(getattr(scheme, k)) for k in (
        "rabi_probe", "rabi_coupling", "rabi_rf", "detune_probe", "detune_coupling",
        "detune_rf", "gamma2", "gamma3", "gamma4", "dephasing_extra")]
    return max(max(vals), 1.0)


@dataclass(frozen=True)
class DensityMatrix4:
    rho: np.ndarray

    def __array__(self, dtype=None, copy=None):
        return self.rho if dtype is None else self.rho.astype(dtype)

    def __getitem__(self, idx):
        return self.rho[idx]

    @property
    def vec(self):
        return self.rho.reshape(-1, order="F")

    def hermiticity_error(self):
        return float(np.max(np.abs(self.rho - self.rho.conj().T)))

    def trace_error(self):
        return float(abs(np.trace(self.rho) - 1.0))

    def min_eigenvalue(self):
        return float(np.min(np.linalg.eigvalsh(0.5 * (self.rho + self.rho.conj().T))))

    def check(self, herm_tol=1e-12, trace_tol=1e-10, pos_tol=1e-9):
        return (
            self.hermiticity_error() <= herm_tol
            and self.trace_error() <= trace_tol
            and self.min_eigenvalue() >= -pos_tol
        )


def _augmented(L):
    A = np.array(L, dtype=complex, copy=True)
    A[..., 0, :] = TRACE_ROW
    return A


def solve_steady_vectors(L):
    """Null vectors with unit trace for a stack of (scaled) generators."""
    A = _augmented(L)
    b = np.zeros(A.shape[:-1], dtype=complex)
    b[..., 0] = 1.0
    return np.linalg.solve(A, b[..., None])[..., 0]


def unvec(vec):
    """Inverse of column-stacking for a stack of 16-vectors."""
    return np.swapaxes(vec.reshape(vec.shape[:-1] + (DIM, DIM)), -1, -2)


def steady_state(scheme):
    """Unique steady state of the master equation."""
    if scheme.gamma2 == 0 and scheme.gamma3 == 0 and scheme.gamma4 == 0:
        raise IllPosedError("all decay rates are zero: steady state is not unique")
    L = liouvillian(scheme) / rate_scale(scheme)
    A = _augmented(L)
    if np.linalg.cond(A) > 1e13:
        raise IllPosedError("generator kernel is degenerate")
    vec = solve_steady_vectors(L)
    return DensityMatrix4(unvec(vec))


def steady_state_residual(scheme, rho):
    """||L rho|| in units of the scheme's largest rate."""
    L = liouvillian(scheme) / rate_scale(scheme)
    return float(np.linalg.norm(L @ DensityMatrix4(np.asarray(rho)).vec))


def propagate(scheme, rho0, duration):
    """rho(t) = exp(L t) rho0 by dense matrix exponential."""
    L = liouvillian(scheme)
    vec = expm(L * duration) @ np.asarray(rho0, dtype=complex).reshape(-1, order="F")
    return DensityMatrix4(unvec(vec))


def ground_state():
    rho = np.zeros((DIM, DIM), dtype=complex)
    rho[0, 0] = 1.0
    return DensityMatrix4(rho)
