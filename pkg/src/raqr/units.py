"""Physical constants and unit conversions (CODATA values via scipy)."""

import numpy as np
from scipy import constants as _c

E_CHARGE = _c.e
HBAR = _c.hbar
H_PLANCK = _c.h
C_LIGHT = _c.c
K_BOLTZMANN = _c.k
EPSILON_0 = _c.epsilon_0
M_ELECTRON = _c.m_e
AMU = _c.atomic_mass
A0 = _c.physical_constants["Bohr radius"][0]
Z0 = _c.physical_constants["characteristic impedance of vacuum"][0]
HARTREE_HZ = _c.physical_constants["hartree-hertz relationship"][0]
RYDBERG_INF_HZ = _c.Rydberg * _c.c
ATOMIC_UNIT_FIELD_V_PER_M = _c.physical_constants["atomic unit of electric field"][0]

EA0 = E_CHARGE * A0
# energy of a 1 e*a0 dipole in a 1 V/cm field, in Hz
EA0_VCM_HZ = EA0 * 100.0 / H_PLANCK


def v_per_cm_to_v_per_m(x):
    return np.asarray(x) * 100.0


def v_per_m_to_v_per_cm(x):
    return np.asarray(x) / 100.0


def wavenumber_cm_to_hz(x):
    return np.asarray(x) * 100.0 * C_LIGHT


def db_to_linear(x):
    return 10.0 ** (np.asarray(x, dtype=float) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(np.asarray(x, dtype=float))


def dbm_to_watt(x):
    return 1e-3 * db_to_linear(x)
