"""Group cohomology with coefficients in Ad(rho), relative to a finite loop set.

A cocycle assigns to each loop label a traceless 2x2 matrix eta(gamma) with
eta(g1 g2) = eta(g1) + rho(g1) eta(g2) rho(g1)^{-1}; coboundaries are
gamma -> rho(gamma) T rho(gamma)^{-1} - T.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import MissingLoop, ValidationError

# basis of sl2: H, E, F
SL2_BASIS = (
    np.array([[1, 0], [0, -1]], dtype=complex),
    np.array([[0, 1], [0, 0]], dtype=complex),
    np.array([[0, 0], [1, 0]], dtype=complex),
)


@dataclass(frozen=True)
class Cocycle:
    values: Mapping[str, np.ndarray]
    rho: Mapping[str, np.ndarray]
    basepoint: complex = 0j
    sheet: int = 1
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        missing = set(self.values) - set(self.rho)
        if missing:
            raise MissingLoop(f"no representation matrix for loops {sorted(missing)}")

    @property
    def labels(self):
        return list(self.values)

    def norm(self) -> float:
        return float(np.sqrt(sum(np.linalg.norm(v) ** 2 for v in self.values.values())))

    def __sub__(self, other: "Cocycle") -> "Cocycle":
        _check_compatible(self, other)
        return Cocycle({k: self.values[k] - other.values[k] for k in self.values}, self.rho,
                       self.basepoint, self.sheet)

    def __add__(self, other: "Cocycle") -> "Cocycle":
        _check_compatible(self, other)
        return Cocycle({k: self.values[k] + other.values[k] for k in self.values}, self.rho,
                       self.basepoint, self.sheet)

    def scale(self, s: complex) -> "Cocycle":
        return Cocycle({k: s * v for k, v in self.values.items()}, self.rho, self.basepoint, self.sheet)

    def conjugate(self, h: np.ndarray) -> "Cocycle":
        """The cocycle h eta h^{-1} for the conjugated representation h rho h^{-1}."""
        hi = np.linalg.inv(h)
        return Cocycle({k: h @ v @ hi for k, v in self.values.items()},
                       {k: h @ r @ hi for k, r in self.rho.items()}, self.basepoint, self.sheet)


def _check_compatible(a: Cocycle, b: Cocycle, tol: float = 1e-9):
    if set(a.values) != set(b.values):
        raise ValidationError("cocycles are defined on different loop sets")
    for k in a.values:
        if np.linalg.norm(a.rho[k] - b.rho[k]) > tol * max(1.0, np.linalg.norm(a.rho[k])):
            raise ValidationError(f"cocycles have different representations on loop {k!r}")


def coboundary(rho: Mapping[str, np.ndarray], t: np.ndarray, basepoint=0j, sheet=1) -> Cocycle:
    vals = {k: r @ t @ np.linalg.inv(r) - t for k, r in rho.items()}
    return Cocycle(vals, dict(rho), basepoint, sheet)


def check_cocycle(eta: Cocycle, pairs: Iterable[Sequence[str]]) -> float:
    """Largest Frobenius defect of the cocycle identity over the given pairs.

    Each pair is (l1, l2) with the composite stored under ``"l1*l2"``, or an
    explicit triple (l1, l2, l12).
    """
    worst = 0.0
    for pair in pairs:
        l1, l2 = pair[0], pair[1]
        l12 = pair[2] if len(pair) > 2 else f"{l1}*{l2}"
        for lab in (l1, l2, l12):
            if lab not in eta.values:
                raise MissingLoop(f"cocycle has no value on loop {lab!r}")
        r1 = eta.rho[l1]
        pred = eta.values[l1] + r1 @ eta.values[l2] @ np.linalg.inv(r1)
        worst = max(worst, float(np.linalg.norm(eta.values[l12] - pred)))
    return worst


@dataclass(frozen=True)
class CoboundarySolve:
    T: np.ndarray
    residual: float
    degenerate: bool = False
    condition: float = 1.0


def _coboundary_operator(eta: Cocycle):
    labels = eta.labels
    cols = []
    for b in SL2_BASIS:
        cols.append(np.concatenate([(eta.rho[k] @ b @ np.linalg.inv(eta.rho[k]) - b).ravel()
                                    for k in labels]))
    rhs = np.concatenate([eta.values[k].ravel() for k in labels])
    return np.column_stack(cols), rhs


def solve_coboundary(eta: Cocycle) -> CoboundarySolve:
    """Least-squares T in sl2 minimising sum ||eta(g) - (rho T rho^{-1} - T)||^2.

    Normal equations on the three sl2 coordinates, with an SVD solve when the
    normal matrix is worse conditioned than 1e8.  ``degenerate`` flags a
    coboundary map with a kernel (reducible rho); T is then minimal-norm.
    """
    if not eta.values:
        return CoboundarySolve(np.zeros((2, 2), dtype=complex), 0.0)
    m, rhs = _coboundary_operator(eta)
    sv = np.linalg.svd(m, compute_uv=False)
    smax = sv[0] if sv[0] > 0 else 1.0
    degenerate = bool(sv[-1] <= 1e-8 * smax) or sv[0] == 0
    normal = m.conj().T @ m
    cond = float(np.linalg.cond(normal)) if not degenerate else np.inf
    if degenerate or cond > 1e8:
        coords = np.linalg.lstsq(m, rhs, rcond=1e-8)[0]
    else:
        coords = np.linalg.solve(normal, m.conj().T @ rhs)
    if degenerate:
        warnings.warn("coboundary map is degenerate (representation looks reducible)",
                      RuntimeWarning, stacklevel=2)
    t = sum(c * b for c, b in zip(coords, SL2_BASIS))
    residual = float(np.linalg.norm(m @ coords - rhs))
    return CoboundarySolve(t, residual, degenerate, cond)


def same_class(eta1: Cocycle, eta2: Cocycle, rel_tol: float = 1e-6):
    """Whether eta1 - eta2 is a coboundary; returns (verdict, residual)."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        sol = solve_coboundary(eta1 - eta2)
    threshold = rel_tol * max(1.0, eta1.norm() + eta2.norm())
    return sol.residual <= threshold, sol.residual
