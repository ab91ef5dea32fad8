"""DC Stark maps by direct diagonalization in a fixed-m_j basis."""

import csv
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linear_sum_assignment

from .. import units
from ..exceptions import LinearStarkError
from .angular import angular_z
from .energies import level_energy
from .states import RydbergState
from .wavefunctions import GridSpec, overlap_integral, radial_wavefunction


@dataclass(frozen=True)
class StarkMap:
    field_grid: np.ndarray  # V/cm, ascending
    basis: tuple  # RydbergState, in zero-field energy order
    eigen_traces: np.ndarray  # GHz relative to the center state, shape (n_fields, n_basis)
    center: RydbergState
    energy_window: float  # GHz, half-width
    max_delta_n: int

    @property
    def center_index(self):
        return self.basis.index(self.center)

    def center_trace(self):
        return self.eigen_traces[:, self.center_index]

    def max_step(self):
        """Largest field-step jump of any trace, GHz."""
        return float(np.max(np.abs(np.diff(self.eigen_traces, axis=0)))) if len(self.field_grid) > 1 else 0.0

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            fh.write(
                f"# center={self.center.label} m_j={self.center.m} "
                f"energy_window_GHz={self.energy_window!r} max_delta_n={self.max_delta_n}\n"
            )
            w = csv.writer(fh)
            w.writerow(["field_V_per_cm"] + [s.label for s in self.basis])
            for f, row in zip(self.field_grid, self.eigen_traces):
                w.writerow([repr(float(f))] + [repr(float(v)) for v in row])


def stark_basis(species, center, energy_window, max_delta_n=4):
    """All |n l j m_j=center.m> within the energy window and |dn| <= max_delta_n."""
    e_c = level_energy(species, center) * 1e3
    m = center.m
    states = []
    for n in range(max(1, center.n - max_delta_n), center.n + max_delta_n + 1):
        for l in range(n):
            for j in (l - Fraction(1, 2), l + Fraction(1, 2)):
                if j < 0 or abs(m) > j:
                    continue
                s = RydbergState(n, l, j, m)
                if abs(level_energy(species, s) * 1e3 - e_c) <= energy_window:
                    states.append(s)
    states.sort(key=lambda s: (level_energy(species, s), s))
    return states


def stark_matrices(species, basis, grid_spec=None):
    """Unperturbed energies (GHz) and dipole coupling D (GHz per V/cm)."""
    grid = grid_spec or GridSpec()
    energies = np.array([level_energy(species, s) * 1e3 for s in basis])
    traces = [radial_wavefunction(species, s, grid) for s in basis]
    size = len(basis)
    D = np.zeros((size, size))
    for i in range(size):
        for k in range(i + 1, size):
            a, b = basis[i], basis[k]
            if abs(a.l - b.l) != 1:
                continue
            ang = angular_z(a.l, a.j, a.m, b.l, b.j, b.m)
            if ang == 0.0:
                continue
            D[i, k] = overlap_integral(traces[i], traces[k]) * ang * units.EA0_VCM_HZ * 1e-9
            D[k, i] = D[i, k]
    return energies, D


def stark_map(species, center, energy_window, field_grid, max_delta_n=4, grid_spec=None):
    """Diagonalize H0 + F*D at each field and follow traces by maximum overlap."""
    fields = np.asarray(field_grid, dtype=float)
    if fields.ndim != 1 or len(fields) == 0 or fields[0] != 0 or np.any(np.diff(fields) <= 0):
        raise ValueError("field_grid must ascend strictly from 0")
    basis = stark_basis(species, center, energy_window, max_delta_n)
    if not basis:
        raise ValueError("empty basis in energy window")
    if center not in basis:
        raise ValueError(f"center {center} not inside its own window")
    e0, D = stark_matrices(species, basis, grid_spec)
    e_c = e0[basis.index(center)]
    size = len(basis)
    traces = np.empty((len(fields), size))
    traces[0] = e0 - e_c
    vec_prev = np.eye(size)
    for i, f in enumerate(fields[1:], start=1):
        H = np.diag(e0 - e_c) + f * D
        vals, vecs = np.linalg.eigh(H)
        overlap = np.abs(vec_prev.T @ vecs) ** 2
        rows, cols = linear_sum_assignment(-overlap)
        order = cols[np.argsort(rows)]
        traces[i] = vals[order]
        vec_prev = vecs[:, order]
    return StarkMap(fields, tuple(basis), traces, center, float(energy_window), int(max_delta_n))


def stark_hamiltonian(species, basis, field, grid_spec=None):
    e0, D = stark_matrices(species, basis, grid_spec)
    return np.diag(e0) + field * D


def quadratic_fit(fields, shifts):
    """Least-squares ``shift = a * F**2``; returns (a, R^2)."""
    f2 = np.asarray(fields) ** 2
    y = np.asarray(shifts)
    a = float(f2 @ y / (f2 @ f2))
    ss_res = float(np.sum((y - a * f2) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    return a, (1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0)


def find_anticrossings(smap, rel_depth=0.5, atol=1e-6):
    """Avoided crossings between energy-adjacent eigenvalues.

    Returns (lower_rank, field, gap_GHz) for every interior local minimum of
    an adjacent-level gap that dips below ``rel_depth`` times the gap's
    range maximum. Eigenvalues are sorted per field, so a single fixed-m
    block never crosses. Gaps below ``atol`` GHz are spin-degenerate pairs
    (l >= 4, where j = l +- 1/2 share one energy) and are skipped.
    """
    levels = np.sort(smap.eigen_traces, axis=1)
    gaps = np.diff(levels, axis=1)
    found = []
    for k in range(gaps.shape[1]):
        g = gaps[:, k]
        for i in range(1, len(g) - 1):
            if g[i] > atol and g[i] < g[i - 1] and g[i] <= g[i + 1] and g[i] < rel_depth * g.max():
                found.append((k, float(smap.field_grid[i]), float(g[i])))
    return found


def polarizability(species, state, method="perturbation", energy_window=None, max_delta_n=4,
                   grid_spec=None, n_fields=41):
    """Scalar DC polarizability in MHz/(V/cm)^2, with shift = alpha F^2 / 2.

    ``method="perturbation"`` sums |D|^2 / (E_c - E_k) over the basis;
    ``method="fit"`` diagonalizes over a perturbative field range and fits a
    pure quadratic.
    """
    if state.l > 3:
        raise LinearStarkError(f"{state.label} lies in a degenerate manifold (linear Stark shift)")
    if energy_window is None:
        energy_window = 2.5 * 2 * species.rydberg_constant_mass_corrected * 1e3 / state.n**3
    basis = stark_basis(species, state, energy_window, max_delta_n)
    e0, D = stark_matrices(species, basis, grid_spec)
    c = basis.index(state)
    de = e0[c] - e0
    coupled = (D[c] != 0) & (np.abs(de) > 0)
    alpha_pt = 2.0 * float(np.sum(D[c, coupled] ** 2 / de[coupled]))
    if method == "perturbation":
        return alpha_pt * 1e3
    if method != "fit":
        raise ValueError(f"unknown method {method!r}")
    # keep the largest coupling to 5% of its energy gap
    f_max = 0.05 * float(np.min(np.abs(de[coupled]) / np.abs(D[c, coupled])))
    fields = np.linspace(0.0, f_max, n_fields)
    smap = stark_map(species, state, energy_window, fields, max_delta_n, grid_spec)
    a, _ = quadratic_fit(fields, smap.center_trace())
    return 2.0 * a * 1e3
