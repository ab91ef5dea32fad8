"""Input validation helpers used by the public estimators and functions."""

import numbers

import numpy as np


def check_positive(value, name, allow_zero=False):
    if not isinstance(value, numbers.Real) or not np.isfinite(value):
        raise ValueError(f"{name} must be a finite real number, got {value!r}")
    if value < 0 or (value == 0 and not allow_zero):
        bound = ">= 0" if allow_zero else "> 0"
        raise ValueError(f"{name} must be {bound}, got {value!r}")
    return float(value)


def check_series(x, name="x", complex_ok=True, ndim=1, min_length=1):
    """Coerce ``x`` to a finite float/complex ndarray of the given rank."""
    arr = np.asarray(x)
    if arr.dtype.kind == "c":
        if not complex_ok:
            raise ValueError(f"{name} must be real-valued")
        arr = arr.astype(complex)
    elif arr.dtype.kind in "biuf":
        arr = arr.astype(float)
    else:
        raise ValueError(f"{name} must be numeric, got dtype {arr.dtype}")
    if arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-D, got shape {arr.shape}")
    if arr.shape[-1] < min_length:
        raise ValueError(f"{name} needs at least {min_length} samples along its last axis")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_ascending(grid, name="grid", strict=True):
    arr = check_series(grid, name, complex_ok=False)
    d = np.diff(arr)
    if (strict and np.any(d <= 0)) or (not strict and np.any(d < 0)):
        raise ValueError(f"{name} must be {'strictly ' if strict else ''}ascending")
    return arr


def check_rng(rng):
    """Accept a Generator or a seed; never fall back to global state."""
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None:
        raise ValueError("an explicit seed or numpy Generator is required")
    return np.random.default_rng(rng)
