"""Fine-structure state labels and dipole selection rules."""

from dataclasses import dataclass
from fractions import Fraction

L_LETTERS = "SPDFGHIKLMNOQRTUVWXYZ"


@dataclass(frozen=True, order=True)
class RydbergState:
    """Level |n, l, j, m>.

    ``m`` is read as m_j when half-integer and as m_l when integer, so that
    orbital-only states (e.g. for electron densities) can be expressed too.
    """

    n: int
    l: int
    j: Fraction
    m: Fraction = Fraction(1, 2)

    def __init__(self, n, l, j, m=Fraction(1, 2)):
        j = Fraction(j).limit_denominator(2)
        m = Fraction(m).limit_denominator(2)
        if int(n) != n or n < 1:
            raise ValueError(f"n must be a positive integer, got {n}")
        if int(l) != l or not 0 <= l <= n - 1:
            raise ValueError(f"l must satisfy 0 <= l <= n-1, got l={l} for n={n}")
        if j.denominator != 2 or not abs(l - Fraction(1, 2)) <= j <= l + Fraction(1, 2):
            raise ValueError(f"j={j} incompatible with l={l}")
        if m.denominator == 2:
            if abs(m) > j:
                raise ValueError(f"|m_j|={abs(m)} exceeds j={j}")
        elif abs(m) > l:
            raise ValueError(f"|m_l|={abs(m)} exceeds l={l}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "l", int(l))
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "m", m)

    @property
    def label(self):
        letter = L_LETTERS[self.l] if self.l < len(L_LETTERS) else f"[l={self.l}]"
        return f"{self.n}{letter}{self.j}"

    def __str__(self):
        return f"{self.label} m={self.m}"

    def with_m(self, m):
        return RydbergState(self.n, self.l, self.j, m)

    @classmethod
    def parse(cls, text, m=Fraction(1, 2)):
        """Parse labels such as ``"47D5/2"``."""
        text = text.strip()
        i = 0
        while i < len(text) and text[i].isdigit():
            i += 1
        n = int(text[:i])
        l = L_LETTERS.index(text[i].upper())
        return cls(n, l, Fraction(text[i + 1:]), m)


def allowed_transition(a, b):
    """Electric-dipole selection rules: dl = +-1 and dm in {0, +-1}."""
    return abs(a.l - b.l) == 1 and abs(a.m - b.m) <= 1
