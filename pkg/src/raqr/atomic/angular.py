"""Wigner 3j/6j symbols and Clebsch-Gordan coefficients.

Racah's closed forms evaluated with exact rationals; only the final square
root is taken in floating point.
"""

from fractions import Fraction
from functools import lru_cache
from math import factorial, sqrt


def _f(x):
    return Fraction(x).limit_denominator(2)


def _fact(x):
    if x.denominator != 1 or x < 0:
        raise ValueError(f"factorial of {x}")
    return factorial(int(x))


def _triangle(a, b, c):
    return (a + b - c) >= 0 and (a - b + c) >= 0 and (-a + b + c) >= 0 and (a + b + c).denominator == 1


def _delta(a, b, c):
    return Fraction(_fact(a + b - c) * _fact(a - b + c) * _fact(-a + b + c), _fact(a + b + c + 1))


def _signed_sqrt(sign, square):
    return sign * sqrt(square) if square else 0.0


@lru_cache(maxsize=65536)
def _w3j(j1, j2, j3, m1, m2, m3):
    if m1 + m2 + m3 != 0 or not _triangle(j1, j2, j3):
        return 0.0
    if abs(m1) > j1 or abs(m2) > j2 or abs(m3) > j3:
        return 0.0
    if any((j + m).denominator != 1 for j, m in ((j1, m1), (j2, m2), (j3, m3))):
        return 0.0
    pref2 = _delta(j1, j2, j3) * (
        _fact(j1 + m1) * _fact(j1 - m1) * _fact(j2 + m2) * _fact(j2 - m2) * _fact(j3 + m3) * _fact(j3 - m3)
    )
    kmin = max(0, -(j3 - j2 + m1), -(j3 - j1 - m2))
    kmax = min(j1 + j2 - j3, j1 - m1, j2 + m2)
    total = Fraction(0)
    k = Fraction(kmin)
    while k <= kmax:
        den = (
            _fact(k) * _fact(j3 - j2 + k + m1) * _fact(j3 - j1 + k - m2)
            * _fact(j1 + j2 - j3 - k) * _fact(j1 - k - m1) * _fact(j2 - k + m2)
        )
        total += Fraction((-1) ** int(k), den)
        k += 1
    phase = (-1) ** int(j1 - j2 - m3)
    sign = phase * (1 if total >= 0 else -1)
    return _signed_sqrt(sign, float(pref2 * total * total))


def wigner_3j(j1, j2, j3, m1, m2, m3):
    return _w3j(*(_f(x) for x in (j1, j2, j3, m1, m2, m3)))


@lru_cache(maxsize=65536)
def _w6j(j1, j2, j3, j4, j5, j6):
    triads = ((j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3))
    if not all(_triangle(*t) for t in triads):
        return 0.0
    pref2 = Fraction(1)
    for t in triads:
        pref2 *= _delta(*t)
    sums = [sum(t) for t in triads]
    pairs = (j1 + j2 + j4 + j5, j2 + j3 + j5 + j6, j3 + j1 + j6 + j4)
    total = Fraction(0)
    t = max(sums)
    while t <= min(pairs):
        den = _fact(t - sums[0]) * _fact(t - sums[1]) * _fact(t - sums[2]) * _fact(t - sums[3])
        den *= _fact(pairs[0] - t) * _fact(pairs[1] - t) * _fact(pairs[2] - t)
        total += Fraction((-1) ** int(t) * _fact(t + 1), den)
        t += 1
    sign = 1 if total >= 0 else -1
    return _signed_sqrt(sign, float(pref2 * total * total))


def wigner_6j(j1, j2, j3, j4, j5, j6):
    return _w6j(*(_f(x) for x in (j1, j2, j3, j4, j5, j6)))


def clebsch_gordan(j1, m1, j2, m2, j, m):
    """<j1 m1; j2 m2 | j m>."""
    j1, m1, j2, m2, j, m = (_f(x) for x in (j1, m1, j2, m2, j, m))
    return (-1) ** int(j1 - j2 + m) * sqrt(2 * j + 1) * _w3j(j1, j2, j, m1, m2, -m)


def angular_z(l1, j1, m1, l2, j2, m2, s=Fraction(1, 2)):
    """Angular part of <l1 s j1 m1| cos(theta) |l2 s j2 m2>."""
    if m1 != m2:
        return 0.0
    l1, j1, m1, l2, j2 = (_f(x) for x in (l1, j1, m1, l2, j2))
    reduced_l = (-1) ** int(l1) * sqrt((2 * l1 + 1) * (2 * l2 + 1)) * _w3j(l1, Fraction(1), l2, Fraction(0), Fraction(0), Fraction(0))
    if reduced_l == 0.0:
        return 0.0
    reduced_j = (
        (-1) ** int(l1 + s + j2 + 1) * sqrt((2 * j1 + 1) * (2 * j2 + 1))
        * _w6j(l1, j1, s, j2, l2, Fraction(1)) * reduced_l
    )
    return (-1) ** int(j1 - m1) * _w3j(j1, Fraction(1), j2, -m1, Fraction(0), m1) * reduced_j
