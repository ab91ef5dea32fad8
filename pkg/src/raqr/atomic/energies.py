"""Level energies, transition frequencies and n*-scaling laws."""

from .. import units

# exponent of n* for each scaling property
SCALING_POWERS = {
    "orbital_radius": 2,
    "binding_energy": -2,
    "level_spacing": -3,
    "lifetime": 3,
    "polarizability": 7,
    "dipole_moment": 2,
}


def effective_n(species, state):
    n_star = state.n - species.quantum_defect(state.n, state.l, state.j)
    if n_star <= 0:
        raise ValueError(f"non-positive effective quantum number for {state}")
    return n_star


def level_energy(species, state):
    """Binding energy in THz (negative, relative to the ionization limit)."""
    return -species.rydberg_constant_mass_corrected / effective_n(species, state) ** 2


def transition_frequency(species, a, b):
    """|E_a - E_b| in GHz."""
    return abs(level_energy(species, a) - level_energy(species, b)) * 1e3


def scaling_property(species, n, prop, l=None, j=None):
    """Rydberg scaling law ``C * n*^p``.

    With ``l`` omitted, ``n`` is used directly as the effective quantum number.
    Returns ``(value, unit)``.
    """
    if prop not in SCALING_POWERS:
        raise ValueError(f"unknown property {prop!r}; expected one of {sorted(SCALING_POWERS)}")
    if n < 10:
        raise ValueError("scaling laws are only meaningful for n >= 10")
    n_star = float(n)
    if l is not None:
        j = l + 0.5 if j is None else j
        n_star = n - species.quantum_defect(n, l, j)
    p = SCALING_POWERS[prop]
    sc = species.scaling_constants
    ry_ghz = species.rydberg_constant_mass_corrected * 1e3
    if prop == "orbital_radius":
        # metres, from <r> ~ 1.5 n*^2 a0
        return sc.get("orbital_radius_a0", 1.5) * n_star**p * units.A0, "m"
    if prop == "binding_energy":
        return ry_ghz * n_star**p, "GHz"
    if prop == "level_spacing":
        return 2.0 * ry_ghz * n_star**p, "GHz"
    if prop == "lifetime":
        return sc.get("lifetime_ns", 1.0) * 1e-9 * n_star**p, "s"
    if prop == "polarizability":
        return sc.get("polarizability_mhz_cm2_per_v2", 2.2e-9) * n_star**p, "MHz/(V/cm)^2"
    return sc.get("dipole_moment_ea0", 1.5) * n_star**p, "e*a0"
