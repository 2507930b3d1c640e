"""Concrete curve models: hyperelliptic curves y^2 = p(x) and plane quartics.

Polynomial coefficients are stored in ascending order, ``coeffs[k]`` being the
coefficient of ``x**k``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
import numpy.polynomial.polynomial as npoly

from .errors import DegenerateCurve, GenusTooSmall, ValidationError


class CurveKind(enum.Enum):
    HYPERELLIPTIC = "hyperelliptic"
    PLANE_QUARTIC = "quartic"


@dataclass(frozen=True)
class CurveModel:
    kind: CurveKind
    genus: int
    hyp_coeffs: tuple = ()
    quartic_coeffs: tuple = ()  # ((i, j, c), ...) for the monomial x^i y^j
    branch_points: tuple = ()
    min_branch_gap: float = math.inf

    @property
    def degree(self) -> int:
        return len(self.hyp_coeffs) - 1

    @property
    def is_hyperelliptic(self) -> bool:
        return self.kind is CurveKind.HYPERELLIPTIC

    def p(self, x: complex) -> complex:
        acc = 0j
        for c in reversed(self.hyp_coeffs):
            acc = acc * x + c
        return acc

    def dp(self, x: complex) -> complex:
        acc = 0j
        d = self.degree
        for k in range(d, 0, -1):
            acc = acc * x + k * self.hyp_coeffs[k]
        return acc

    def dist_to_branch(self, x: complex) -> float:
        return min(abs(x - b) for b in self.branch_points)

    @property
    def leading(self) -> complex:
        return self.hyp_coeffs[-1]


def _polish(coeffs: np.ndarray, root: complex, iters: int = 60) -> complex:
    dcoeffs = npoly.polyder(coeffs)
    z = root
    for _ in range(iters):
        f = npoly.polyval(z, coeffs)
        df = npoly.polyval(z, dcoeffs)
        if df == 0:
            break
        step = f / df
        z -= step
        if abs(step) <= 1e-16 * max(1.0, abs(z)):
            break
    return complex(z)


def _root_order(z: complex):
    # counterclockwise from the positive real axis, ties by modulus
    a = math.atan2(z.imag, z.real) % (2 * math.pi)
    if a > 2 * math.pi - 1e-9:
        a = 0.0
    return (round(a, 9), abs(z))


def make_hyperelliptic(p_coeffs: Sequence) -> CurveModel:
    """Build the curve y^2 = p(x) from ascending coefficients of p.

    Roots come from companion-matrix eigenvalues followed by Newton polishing.
    Raises DegenerateCurve when two roots lie closer than
    ``1e-8 * max(1, max|root|)``.
    """
    coeffs = tuple(complex(c) for c in p_coeffs)
    d = len(coeffs) - 1
    if d < 3:
        raise ValidationError(f"degree of p must be at least 3, got {d}")
    if coeffs[-1] == 0:
        raise ValidationError("leading coefficient of p must be nonzero")
    arr = np.array(coeffs, dtype=complex)
    roots = [_polish(arr, complex(r)) for r in npoly.polyroots(arr)]
    scale = max(1.0, max(abs(r) for r in roots))
    gap = min(abs(a - b) for k, a in enumerate(roots) for b in roots[k + 1:])
    if gap < 1e-8 * scale:
        raise DegenerateCurve(f"p has a repeated root (closest pair {gap:.3g} apart)")
    roots.sort(key=_root_order)
    genus = (d + 1) // 2 - 1
    return CurveModel(
        kind=CurveKind.HYPERELLIPTIC,
        genus=genus,
        hyp_coeffs=coeffs,
        branch_points=tuple(roots),
        min_branch_gap=gap,
    )


def make_plane_quartic(terms: Mapping[tuple[int, int], complex]) -> CurveModel:
    """Plane quartic Q(x, y) = sum c_ij x^i y^j, assumed smooth (genus 3)."""
    items = tuple(sorted((int(i), int(j), complex(c)) for (i, j), c in terms.items() if c != 0))
    if not items:
        raise ValidationError("quartic has no terms")
    if max(i + j for i, j, _ in items) != 4:
        raise ValidationError("quartic must have total degree exactly 4")
    return CurveModel(kind=CurveKind.PLANE_QUARTIC, genus=3, quartic_coeffs=items)


def fermat_quartic() -> CurveModel:
    return make_plane_quartic({(4, 0): 1, (0, 4): 1, (0, 0): 1})


@dataclass(frozen=True)
class AbelianDifferential:
    """Holomorphic 1-form in the monomial basis of ``omega_basis``.

    Hyperelliptic: (c0 + c1 x + ... + c_{g-1} x^{g-1}) dx/y.
    Quartic: (c0 + c1 x + c2 y) dx/Q_y.
    Coefficients may be complex floats or exact GaussianRational values.
    """

    coeffs: tuple
    kind: CurveKind = CurveKind.HYPERELLIPTIC

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @classmethod
    def on(cls, curve: CurveModel, coeffs: Sequence) -> "AbelianDifferential":
        coeffs = tuple(coeffs)
        expected = curve.genus if curve.is_hyperelliptic else 3
        if len(coeffs) != expected:
            raise ValidationError(f"expected {expected} coefficients, got {len(coeffs)}")
        return cls(coeffs, curve.kind)

    @classmethod
    def zero(cls, curve: CurveModel) -> "AbelianDifferential":
        n = curve.genus if curve.is_hyperelliptic else 3
        return cls((0,) * n, curve.kind)

    def __len__(self):
        return len(self.coeffs)

    def __add__(self, other: "AbelianDifferential") -> "AbelianDifferential":
        return AbelianDifferential(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.kind)

    def __sub__(self, other):
        return AbelianDifferential(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.kind)

    def scale(self, s) -> "AbelianDifferential":
        return AbelianDifferential(tuple(s * a for a in self.coeffs), self.kind)

    def as_complex(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs], dtype=complex)

    def numerator(self, x: complex) -> complex:
        """Polynomial factor c(x) of a hyperelliptic form c(x) dx/y."""
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * x + complex(c)
        return acc


def omega_basis(curve: CurveModel) -> list[AbelianDifferential]:
    n = curve.genus if curve.is_hyperelliptic else 3
    return [AbelianDifferential(tuple(int(i == k) for i in range(n)), curve.kind) for k in range(n)]


@dataclass(frozen=True)
class QDDescriptor:
    """One element of the fixed quadratic differential basis.

    family ``"dx2/y2"``: x^power dx^2/y^2; ``"dx2/y"``: x^power dx^2/y;
    ``"quartic"``: x^power[0] y^power[1] (dx/Q_y)^2.
    """

    family: str
    power: object

    def __str__(self):
        if self.family == "dx2/y2":
            return f"x^{self.power} dx^2/y^2"
        if self.family == "dx2/y":
            return f"x^{self.power} dx^2/y"
        i, j = self.power
        return f"x^{i} y^{j} (dx/Q_y)^2"


QUARTIC_MONOMIALS = ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))


def qd_basis(curve: CurveModel) -> list[QDDescriptor]:
    g = curve.genus
    if g < 2:
        raise GenusTooSmall(f"quadratic differentials need genus >= 2, got {g}")
    if curve.is_hyperelliptic:
        return [QDDescriptor("dx2/y2", j) for j in range(2 * g - 1)] + [
            QDDescriptor("dx2/y", j) for j in range(g - 2)
        ]
    return [QDDescriptor("quartic", m) for m in QUARTIC_MONOMIALS]


@dataclass(frozen=True)
class QuadDifferential:
    coeffs: tuple

    @classmethod
    def on(cls, curve: CurveModel, coeffs: Sequence) -> "QuadDifferential":
        coeffs = tuple(coeffs)
        if len(coeffs) != 3 * curve.genus - 3:
            raise ValidationError(f"expected {3 * curve.genus - 3} coefficients")
        return cls(coeffs)
