"""Exact arithmetic over the Gaussian rationals Q(i).

``GaussianRational`` is a minimal field element type; ``exact_rank`` computes
the rank of a matrix over Q(i) by clearing denominators row by row and running
fraction-free (Bareiss) elimination over the Gaussian integers Z[i].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Iterable, Sequence


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Rational)):
            return cls(Fraction(value))
        if isinstance(value, str):
            return cls(Fraction(value))
        if isinstance(value, (tuple, list)) and len(value) == 2:
            return cls(Fraction(value[0]), Fraction(value[1]))
        raise TypeError(f"not a Gaussian rational: {value!r}")

    def __add__(self, other):
        if isinstance(other, (float, complex)):
            return complex(self) + other
        other = _lift(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, (float, complex)):
            return complex(self) - other
        other = _lift(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __radd__(self, other):
        return self + other

    def __rmul__(self, other):
        return self * other

    def __mul__(self, other):
        if isinstance(other, (float, complex)):
            return complex(self) * other
        other = _lift(other)
        if other is NotImplemented:
            return other
        return GaussianRational(
            self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re
        )

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        if isinstance(other, (float, complex)):
            return complex(self) / other
        other = _lift(other)
        if other is NotImplemented:
            return other
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conjugate()
        return GaussianRational(num.re / n, num.im / n)

    def __rtruediv__(self, other):
        if isinstance(other, (float, complex)):
            return other / complex(self)
        return _lift(other) / self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return False
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return f"({self.re})+({self.im})i"


ZERO = GaussianRational(Fraction(0))
ONE = GaussianRational(Fraction(1))


def _lift(value):
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Rational)):
        return GaussianRational(Fraction(value))
    return NotImplemented


def is_gaussian_rational(value) -> bool:
    return isinstance(value, (GaussianRational, int, Rational)) and not isinstance(value, bool)


def to_complex(value) -> complex:
    return complex(value)


# -- fraction-free elimination over Z[i] -------------------------------------
# Gaussian integers are (re, im) tuples of Python ints inside the elimination.


def _gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gsub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _gdiv_exact(a, b):
    n = b[0] * b[0] + b[1] * b[1]
    re = a[0] * b[0] + a[1] * b[1]
    im = a[1] * b[0] - a[0] * b[1]
    if re % n or im % n:
        raise ArithmeticError("inexact division in fraction-free elimination")
    return (re // n, im // n)


def _integral_rows(rows: Sequence[Sequence[GaussianRational]]):
    out = []
    for row in rows:
        row = [GaussianRational.coerce(v) for v in row]
        den = 1
        for v in row:
            den = lcm(den, v.re.denominator, v.im.denominator)
        out.append([(int(v.re * den), int(v.im * den)) for v in row])
    return out


@dataclass(frozen=True)
class EliminationCertificate:
    rank: int
    pivots: tuple  # (row, col) positions in the permuted echelon form
    pivot_values: tuple  # final Bareiss pivots as (re, im) integer pairs


def exact_rank(rows: Iterable[Sequence], ncols: int | None = None) -> EliminationCertificate:
    """Rank over Q(i) of the matrix with the given rows.

    Rows are scaled to Gaussian integers, then reduced with Bareiss updates
    ``m[i][j] <- (m[r][c] m[i][j] - m[i][c] m[r][j]) / prev_pivot`` whose
    divisions are exact in Z[i].  The returned pivots certify the rank.
    """
    m = _integral_rows(list(rows))
    nrows = len(m)
    if ncols is None:
        ncols = len(m[0]) if m else 0
    prev = (1, 0)
    r = 0
    pivots = []
    values = []
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c] != (0, 0)), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        for i in range(r + 1, nrows):
            lead = m[i][c]
            for j in range(c + 1, ncols):
                m[i][j] = _gdiv_exact(_gsub(_gmul(piv, m[i][j]), _gmul(lead, m[r][j])), prev)
            m[i][c] = (0, 0)
        pivots.append((r, c))
        values.append(piv)
        prev = piv
        r += 1
    return EliminationCertificate(rank=r, pivots=tuple(pivots), pivot_values=tuple(values))
