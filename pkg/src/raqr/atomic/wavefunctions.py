"""Coulomb-approximation radial wavefunctions and radial dipole integrals.

The radial equation is integrated inward with Numerov's method on a
uniform lattice in x = sqrt(r) (atomic units), where the local de Broglie
wavelength is nearly constant. With R(r) = x**-1.5 * X(x) the equation
becomes X'' = g(x) X with

    g(x) = (2l + 1/2)(2l + 3/2) / x**2 + 8 x**2 (V(r) - E),   V = -1/r.

Sign convention: every wavefunction is positive at large r.
"""

import csv
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import sph_harm_y

from ..exceptions import NumericalFailureError
from .angular import clebsch_gordan
from .energies import effective_n

_RESCALE = 1e100


@dataclass(frozen=True)
class GridSpec:
    """Lattice in x = sqrt(r / a0): step ``step`` and optional radial limits in a0."""

    step: float = 0.01
    r_max: float | None = None
    r_min: float | None = None

    def __post_init__(self):
        # >= 20 points per local oscillation: the x-wavelength is >= 2*pi/sqrt(8)
        if not 0 < self.step <= 2 * np.pi / np.sqrt(8) / 20:
            raise ValueError(f"step {self.step} too coarse for 20 points per oscillation")


@dataclass(frozen=True)
class WavefunctionTrace:
    radial_grid: np.ndarray  # a0, strictly increasing
    values: np.ndarray  # R_nl in a0**-1.5
    n_star: float = field(default=np.nan)
    l: int = field(default=0)
    step: float = field(default=0.01)

    @property
    def u(self):
        """Reduced radial function r * R(r)."""
        return self.radial_grid * self.values

    def norm(self):
        return float(np.trapezoid(self.u**2, self.radial_grid))

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["r_bohr", "R_nl"])
            for r, v in zip(self.radial_grid, self.values):
                w.writerow([repr(float(r)), repr(float(v))])


def _numerov_inward(g, h, k_barrier=0):
    """Integrate X'' = g X from the last lattice point towards the first.

    Below index ``k_barrier`` (inside the centrifugal barrier) the regular
    solution shrinks inward; integration stops once |X| starts growing, which
    marks the irregular solution taking over. Returns (X, first valid index).
    """
    n = len(g)
    f = 1.0 - (h * h / 12.0) * g
    X = [0.0] * n
    X[-1] = 0.0
    X[-2] = 1e-10
    fl = f.tolist()
    start = 0
    for k in range(n - 2, 0, -1):
        X[k - 1] = ((12.0 - 10.0 * fl[k]) * X[k] - fl[k + 1] * X[k + 1]) / fl[k - 1]
        if k - 1 < k_barrier and abs(X[k - 1]) > abs(X[k]):
            start = k
            break
        if abs(X[k - 1]) > _RESCALE:
            for i in range(k - 1, n):
                X[i] /= _RESCALE
    return np.array(X[start:]), start


def inner_turning_point(n_star, l):
    if l == 0:
        return 0.0
    disc = 1.0 - l * (l + 1) / n_star**2
    return n_star**2 * (1.0 - np.sqrt(max(disc, 0.0)))


@lru_cache(maxsize=4096)
def _coulomb_trace(n_star, l, hydrogenic, core_radius, grid):
    h = grid.step
    energy = -0.5 / n_star**2
    r_out = grid.r_max if grid.r_max is not None else 2.0 * n_star * (n_star + 15.0)
    if hydrogenic:
        r_in = h * h
    else:
        r_in = max(inner_turning_point(n_star, l), core_radius, h * h)
    if grid.r_min is not None:
        r_in = max(r_in, grid.r_min)
    k_in = max(1, int(np.ceil(np.sqrt(r_in) / h)))
    k_out = int(np.floor(np.sqrt(r_out) / h))
    if k_out - k_in < 10:
        raise NumericalFailureError("radial lattice too short")
    x = h * np.arange(k_in, k_out + 1)
    r = x * x
    g = (2 * l + 0.5) * (2 * l + 1.5) / r + 8.0 * r * (-1.0 / r - energy)
    k_barrier = int(np.searchsorted(r, inner_turning_point(n_star, l))) if l > 0 else 0
    X, start = _numerov_inward(g, h, k_barrier)
    x, r = x[start:], r[start:]
    R = X / x**1.5
    u = r * R
    norm = np.trapezoid(u * u, r)
    if not np.isfinite(norm) or norm <= 0:
        raise NumericalFailureError(f"normalization failed for n*={n_star}, l={l}")
    R = R / np.sqrt(norm)
    r.setflags(write=False)
    R.setflags(write=False)
    return WavefunctionTrace(r, R, n_star, l, h)


def radial_wavefunction(species, state, grid_spec=None):
    """Normalized radial wavefunction R_nl of ``state`` on a sqrt-scaled grid."""
    if state.n > 200:
        raise ValueError("n > 200 is outside the supported numerical range")
    grid = grid_spec or GridSpec()
    n_star = effective_n(species, state)
    hydrogenic = abs(n_star - round(n_star)) < 1e-12
    core = 0.0 if hydrogenic else species.core_radius_a0
    return _coulomb_trace(float(n_star), state.l, hydrogenic, float(core), grid)


def overlap_integral(a, b, power=1):
    """Integral of u_a u_b r**power dr over the common radial range."""
    lo = max(a.radial_grid[0], b.radial_grid[0])
    hi = min(a.radial_grid[-1], b.radial_grid[-1])
    if hi <= lo:
        raise NumericalFailureError("wavefunction grids do not overlap")
    if a.step == b.step:
        # both grids are sub-lattices of x = k * step; intersect exactly
        ka = np.rint(np.sqrt(a.radial_grid) / a.step).astype(np.int64)
        kb = np.rint(np.sqrt(b.radial_grid) / b.step).astype(np.int64)
        common, ia, ib = np.intersect1d(ka, kb, assume_unique=True, return_indices=True)
        if len(common) < 2:
            raise NumericalFailureError("wavefunction grids do not overlap")
        r = a.radial_grid[ia]
        ua, ub = a.u[ia], b.u[ib]
    else:
        if max(a.step, b.step) / min(a.step, b.step) > 4:
            raise NumericalFailureError("grid steps differ beyond interpolation tolerance")
        fine, coarse = (a, b) if a.step < b.step else (b, a)
        mask = (fine.radial_grid >= lo) & (fine.radial_grid <= hi)
        r = fine.radial_grid[mask]
        ua = fine.u[mask]
        ub = np.interp(r, coarse.radial_grid, coarse.u)
    return float(np.trapezoid(ua * ub * r**power, r))


def radial_matrix_element(species, a, b, grid_spec=None):
    """Radial dipole <a| r |b> in e*a0."""
    if abs(a.l - b.l) != 1:
        raise ValueError(f"radial dipole needs dl = +-1, got {a.label} -> {b.label}")
    ta = radial_wavefunction(species, a, grid_spec)
    tb = radial_wavefunction(species, b, grid_spec)
    return overlap_integral(ta, tb, power=1)


def electron_density(state, point, species=None, trace=None, grid_spec=None):
    """|psi|^2 at spherical ``point`` = (r [a0], theta, phi), in a0**-3.

    Half-integer m is read as m_j and the density is summed over spin.
    """
    r, theta, phi = point
    if trace is None:
        if species is None:
            raise ValueError("either species or trace is required")
        trace = radial_wavefunction(species, state, grid_spec)
    grid = trace.radial_grid
    if np.any(np.asarray(r) < grid[0]) or np.any(np.asarray(r) > grid[-1]):
        raise ValueError(f"r outside wavefunction grid [{grid[0]:.3g}, {grid[-1]:.3g}] a0")
    radial = np.interp(r, grid, trace.values) ** 2
    if state.m.denominator == 1:
        ang = np.abs(sph_harm_y(state.l, int(state.m), theta, phi)) ** 2
    else:
        ang = 0.0
        for ms in (-0.5, 0.5):
            ml = state.m - ms
            if abs(ml) > state.l:
                continue
            cg = clebsch_gordan(state.l, ml, 0.5, ms, state.j, state.m)
            ang = ang + cg**2 * np.abs(sph_harm_y(state.l, int(ml), theta, phi)) ** 2
    return radial * ang
