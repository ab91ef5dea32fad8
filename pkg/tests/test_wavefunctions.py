from fractions import Fraction
from math import factorial

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import genlaguerre

from raqr.atomic import GridSpec, RydbergState, electron_density, radial_matrix_element, radial_wavefunction
from raqr.atomic.wavefunctions import WavefunctionTrace, overlap_integral
from raqr.exceptions import NumericalFailureError

HALF = Fraction(1, 2)


def hydrogen_R(n, l, r):
    rho = 2.0 * r / n
    c = np.sqrt((2.0 / n) ** 3 * factorial(n - l - 1) / (2 * n * factorial(n + l)))
    return c * np.exp(-rho / 2) * rho**l * genlaguerre(n - l - 1, 2 * l + 1)(rho)


def sign_changes(y, r):
    # ignore the numerically-zero tail
    keep = np.abs(y * r) > 1e-6 * np.max(np.abs(y * r))
    s = np.sign(y[keep])
    return int(np.count_nonzero(s[1:] != s[:-1]))


@pytest.mark.parametrize("n", range(1, 11))
def test_hydrogen_closed_form(hydrogen, n):
    for l in range(n):
        tr = radial_wavefunction(hydrogen, RydbergState(n, l, l + HALF))
        exact = hydrogen_R(n, l, tr.radial_grid)
        # positive-at-large-r convention
        exact *= np.sign(exact[np.argmax(np.abs(exact * tr.radial_grid**1.5) * (tr.radial_grid > n * n))])
        rms = np.sqrt(np.mean((tr.values - exact) ** 2))
        assert rms < 1e-3
        assert sign_changes(tr.values, tr.radial_grid) == n - l - 1


@pytest.mark.parametrize("state", ["47D5/2", "48P3/2", "30S1/2", "60F7/2", "35D3/2"])
def test_normalization(cs, state):
    tr = radial_wavefunction(cs, RydbergState.parse(state))
    assert abs(tr.norm() - 1.0) < 1e-4


def test_hydrogen_dipole_1s_2p(hydrogen):
    # <1s| r |2p> = 2^7 sqrt(6) / 3^5
    val = radial_matrix_element(hydrogen, RydbergState(1, 0, HALF), RydbergState(2, 1, HALF))
    assert abs(val) == pytest.approx(2**7 * np.sqrt(6) / 3**5, rel=1e-3)


def test_hydrogen_dipole_sum_rule(hydrogen):
    # <r> for 3d by direct quadrature vs n^2 (3/2 - l(l+1)/(2n^2)) closed form
    tr = radial_wavefunction(hydrogen, RydbergState(3, 2, Fraction(5, 2)))
    assert overlap_integral(tr, tr, power=1) == pytest.approx(9 * (1.5 - 6 / 18), rel=1e-4)


def test_cs_dipole_magnitude_and_scaling(cs):
    d47 = radial_matrix_element(cs, RydbergState(47, 2, Fraction(5, 2)), RydbergState(48, 1, Fraction(3, 2)))
    d34 = radial_matrix_element(cs, RydbergState(34, 2, Fraction(5, 2)), RydbergState(35, 1, Fraction(3, 2)))
    assert 2500 < abs(d47) < 3500
    ratio_nstar = ((47 - 2.4663) / (34 - 2.4663)) ** 2
    assert abs(d47 / d34) == pytest.approx(ratio_nstar, rel=0.02)


def test_dipole_requires_dl(cs):
    with pytest.raises(ValueError):
        radial_matrix_element(cs, RydbergState(47, 2, Fraction(5, 2)), RydbergState(48, 2, Fraction(5, 2)))


def test_grid_refinement_stable(cs):
    a, b = RydbergState(40, 2, Fraction(5, 2)), RydbergState(41, 1, Fraction(3, 2))
    coarse = radial_matrix_element(cs, a, b, GridSpec(step=0.01))
    fine = radial_matrix_element(cs, a, b, GridSpec(step=0.005))
    assert fine == pytest.approx(coarse, rel=1e-3)


def test_gridspec_validation():
    with pytest.raises(ValueError):
        GridSpec(step=0.2)


def test_overlap_grids_disjoint():
    a = WavefunctionTrace(np.linspace(1, 2, 50) ** 2, np.ones(50), 5.0, 0, 0.01)
    b = WavefunctionTrace(np.linspace(3, 4, 50) ** 2, np.ones(50), 5.0, 0, 0.01)
    with pytest.raises(NumericalFailureError):
        overlap_integral(a, b)


def test_n_above_200(cs):
    with pytest.raises(ValueError):
        radial_wavefunction(cs, RydbergState(201, 0, HALF))


def test_csv_export(cs, tmp_path):
    tr = radial_wavefunction(cs, RydbergState(20, 0, HALF))
    p = tmp_path / "wf.csv"
    tr.to_csv(p)
    data = np.loadtxt(p, delimiter=",", skiprows=1)
    assert p.read_text().startswith("r_bohr,R_nl")
    np.testing.assert_array_equal(data[:, 1], tr.values)


def test_density_integrates_to_one(hydrogen):
    # spin-summed density of a coupled state, integrated over a sphere-shell grid
    state = RydbergState(3, 1, Fraction(3, 2), HALF)
    tr = radial_wavefunction(hydrogen, state)
    th = np.linspace(0, np.pi, 181)
    ph = np.linspace(0, 2 * np.pi, 9)
    T, P = np.meshgrid(th, ph, indexing="ij")
    ang = np.array([[electron_density(state, (tr.radial_grid[200], t, p), trace=tr) for p in ph] for t in th])
    ang = ang / tr.values[200] ** 2
    total = np.trapezoid(np.trapezoid(ang * np.sin(T), ph, axis=1), th)
    assert total == pytest.approx(1.0, rel=1e-3)


def test_density_requires_grid_range(hydrogen):
    state = RydbergState(2, 0, HALF)
    with pytest.raises(ValueError):
        electron_density(state, (1e6, 0.0, 0.0), species=hydrogen)


def test_density_integer_m(hydrogen):
    state = RydbergState(2, 1, HALF, 1)
    v = electron_density(state, (4.0, np.pi / 2, 0.0), species=hydrogen)
    r = 4.0
    expected = hydrogen_R(2, 1, r) ** 2 * 3 / (8 * np.pi)
    assert v == pytest.approx(expected, rel=5e-3)


@given(st.integers(12, 80), st.integers(0, 3))
def test_normalized_property(n, l):
    from raqr.atomic import load_species

    cs = load_species("Cs133")
    tr = radial_wavefunction(cs, RydbergState(n, l, l + HALF))
    assert abs(tr.norm() - 1) < 1e-4
    assert tr.values[-1] * tr.radial_grid[-1] >= 0
