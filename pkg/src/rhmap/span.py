"""Products of Abelian differentials inside the quadratic differentials.

The derivative of the monodromy map at A = [[a, b], [c, -a]] is injective
exactly when a*Omega + b*Omega + c*Omega is all of QD(X).  Everything here is
finite linear algebra in the fixed bases of ``curve.omega_basis`` and
``curve.qd_basis``; ranks are computed exactly over Q(i) or by SVD.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .curve import (
    QUARTIC_MONOMIALS,
    AbelianDifferential,
    CurveModel,
    make_hyperelliptic,
    omega_basis,
)
from .errors import DegenerateCurve, ExactModeUnavailable, GenusTooSmall, ValidationError
from .exact import ONE, ZERO, GaussianRational, exact_rank, is_gaussian_rational
from .rng import SplitMix64, derive_seed
from .transport import ConnectionForm

SVD_THRESHOLD = 1e-8


class RankMode(enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


@dataclass(frozen=True)
class SpanReport:
    rank_products: int
    dim_qd: int
    injective: bool
    mode: RankMode
    singular_values: tuple = ()
    pivots: tuple = ()
    matrix: object = field(default=None, repr=False, compare=False)

    def to_json(self, include_matrix: bool = True) -> dict:
        out = {
            "rank_products": self.rank_products,
            "dim_qd": self.dim_qd,
            "injective": self.injective,
            "mode": self.mode.value,
        }
        if self.mode is RankMode.FLOAT:
            out["singular_values"] = [float(s) for s in self.singular_values]
        else:
            out["pivots"] = [list(p) for p in self.pivots]
        if include_matrix and self.matrix is not None:
            out["matrix"] = [[_entry_json(v) for v in row] for row in self.matrix]
        return out


def _entry_json(v):
    if isinstance(v, GaussianRational):
        return [str(v.re), str(v.im)]
    v = complex(v)
    return [v.real, v.imag]


def _is_exact(forms: Sequence[AbelianDifferential]) -> bool:
    return all(is_gaussian_rational(c) for f in forms for c in f.coeffs)


def _product_row(curve: CurveModel, form: AbelianDifferential, k: int, exact: bool):
    """Coordinates of form * omega_k in the quadratic differential basis."""
    n = 3 * curve.genus - 3
    zero = ZERO if exact else 0j
    row = [zero] * n
    coeffs = [GaussianRational.coerce(c) if exact else complex(c) for c in form.coeffs]
    if curve.is_hyperelliptic:
        # (sum c_i x^i dx/y)(x^k dx/y) = sum c_i x^(i+k) dx^2/y^2
        for i, c in enumerate(coeffs):
            row[i + k] = row[i + k] + c
    else:
        shift = QUARTIC_MONOMIALS[k]
        for (i, j), c in zip(QUARTIC_MONOMIALS[:3], coeffs):
            idx = QUARTIC_MONOMIALS.index((i + shift[0], j + shift[1]))
            row[idx] = row[idx] + c
    return row


def product_rows(curve: CurveModel, forms: Sequence[AbelianDifferential], exact: bool | None = None):
    """Rows {f * omega_k} for f in ``forms`` and omega_k in the 1-form basis."""
    if curve.genus < 2:
        raise GenusTooSmall("quadratic differential spans need genus >= 2")
    if exact is None:
        exact = _is_exact(forms)
    elif exact and not _is_exact(forms):
        raise ExactModeUnavailable("exact mode needs Gaussian-rational coefficients")
    nbasis = len(omega_basis(curve))
    return [_product_row(curve, f, k, exact) for f in forms for k in range(nbasis)]


def product_matrix(curve: CurveModel, alpha, beta, gamma) -> np.ndarray:
    """3g x (3g-3) matrix of {alpha*w_k, beta*w_k, gamma*w_k} in QD coordinates.

    dtype is object (GaussianRational entries) for exact inputs, complex otherwise.
    """
    forms = (alpha, beta, gamma)
    exact = _is_exact(forms)
    rows = product_rows(curve, forms, exact)
    return np.array(rows, dtype=object if exact else complex)


def float_rank(matrix, threshold: float = SVD_THRESHOLD):
    m = np.array([[complex(v) for v in row] for row in matrix], dtype=complex)
    if m.size == 0:
        return 0, ()
    sv = np.linalg.svd(m, compute_uv=False)
    if sv[0] == 0:
        return 0, tuple(sv)
    return int(np.sum(sv > threshold * sv[0])), tuple(float(s) for s in sv)


def rank_report(curve: CurveModel, rows, mode: RankMode) -> SpanReport:
    dim = 3 * curve.genus - 3
    if mode is RankMode.EXACT:
        cert = exact_rank(rows, dim)
        return SpanReport(cert.rank, dim, cert.rank == dim, mode, pivots=cert.pivots, matrix=rows)
    rank, sv = float_rank(rows)
    return SpanReport(rank, dim, rank == dim, mode, singular_values=sv, matrix=rows)


def injectivity_verdict(curve: CurveModel, form: ConnectionForm,
                        mode: RankMode | str = RankMode.EXACT) -> SpanReport:
    """Rank of QD(alpha, beta, gamma) and whether it fills QD(X)."""
    mode = RankMode(mode)
    rows = product_rows(curve, form.entries, exact=mode is RankMode.EXACT)
    return rank_report(curve, rows, mode)


def dx2_over_y_block_is_zero(curve: CurveModel, rows) -> bool:
    """Every row vanishes exactly on the x^j dx^2/y coordinates."""
    if not curve.is_hyperelliptic:
        raise ValidationError("only defined for hyperelliptic curves")
    start = 2 * curve.genus - 1
    return all(not complex(v) for row in rows for v in row[start:])


# -- random exact samples ------------------------------------------------------


def random_differential(curve: CurveModel, rng: SplitMix64, small: bool = False) -> AbelianDifferential:
    n = len(omega_basis(curve))
    draw = rng.small_gaussian_rational if small else rng.gaussian_rational
    return AbelianDifferential(tuple(draw() for _ in range(n)), curve.kind)


def random_connection(curve: CurveModel, rng: SplitMix64, small: bool = False) -> ConnectionForm:
    return ConnectionForm(*(random_differential(curve, rng, small) for _ in range(3)))


def random_sl2(rng: SplitMix64):
    """Exact SL2 matrix [[a, b], [c, (1 + b c)/a]] and its inverse."""
    a = ZERO
    while not a:
        a = rng.gaussian_rational()
    b, c = rng.gaussian_rational(), rng.gaussian_rational()
    d = (ONE + b * c) / a
    return [[a, b], [c, d]], [[d, -b], [-c, a]]


def random_hyperelliptic(genus: int, rng: SplitMix64, max_tries: int = 20) -> CurveModel:
    """Squarefree y^2 = p(x) with deg p = 2g + 2 and small Gaussian-integer coefficients."""
    for _ in range(max_tries):
        coeffs = [complex(rng.randint(-10, 10), rng.randint(-10, 10)) for _ in range(2 * genus + 2)]
        coeffs.append(1)
        try:
            return make_hyperelliptic(coeffs)
        except DegenerateCurve:
            continue
    raise DegenerateCurve("could not draw a squarefree polynomial")


def _poly_mul(a, b):
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


# -- sampling scans -------------------------------------------------------------


@dataclass(frozen=True)
class TrialRecord:
    index: int
    seed: int
    valid: bool
    rank: int
    float_rank: int
    expected: int
    detail: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.valid or self.rank == self.expected

    def to_json(self):
        return {
            "index": self.index, "seed": self.seed, "valid": self.valid, "rank": self.rank,
            "float_rank": self.float_rank, "expected": self.expected, "ok": self.ok, **self.detail,
        }


@dataclass(frozen=True)
class ScanReport:
    name: str
    seed: int
    trials: tuple

    @property
    def valid_trials(self):
        return [t for t in self.trials if t.valid]

    @property
    def all_ok(self) -> bool:
        return all(t.ok for t in self.trials)

    @property
    def fraction_full(self) -> float:
        valid = self.valid_trials
        return sum(t.rank == t.expected for t in valid) / len(valid) if valid else float("nan")

    @property
    def disagreements(self) -> int:
        return sum(t.rank != t.float_rank for t in self.trials)

    def to_json(self):
        return {
            "scan": self.name, "seed": self.seed, "trials": [t.to_json() for t in self.trials],
            "all_ok": self.all_ok, "fraction_full": self.fraction_full,
            "exact_float_disagreements": self.disagreements,
        }


def rauch_trial(curve: CurveModel, xis: Sequence[AbelianDifferential]):
    """(is_basis, exact rank, float rank) of span{xi_i xi_j} in QD(X)."""
    g = curve.genus
    basis_cert = exact_rank([list(map(GaussianRational.coerce, x.coeffs)) for x in xis], g)
    is_basis = len(xis) == g and basis_cert.rank == g
    rows = []
    for i in range(len(xis)):
        for j in range(i, len(xis)):
            prod = _poly_mul([GaussianRational.coerce(c) for c in xis[i].coeffs],
                             [GaussianRational.coerce(c) for c in xis[j].coeffs])
            rows.append(prod + [ZERO] * (3 * g - 3 - len(prod)))
    return is_basis, exact_rank(rows, 3 * g - 3).rank, float_rank(rows)[0]


def rauch_check(genus: int, trials: int, seed: int) -> ScanReport:
    """Products of a random basis of 1-forms on random hyperelliptic curves
    should span exactly 2g - 1 dimensions."""
    if not 2 <= genus <= 8:
        raise ValidationError("genus must lie in [2, 8]")
    records = []
    for t in range(trials):
        s = derive_seed(seed, t)
        rng = SplitMix64(s)
        curve = random_hyperelliptic(genus, rng)
        xis = [random_differential(curve, rng) for _ in range(genus)]
        valid, rank, frank = rauch_trial(curve, xis)
        records.append(TrialRecord(t, s, valid, rank, frank, 2 * genus - 1,
                                   {"min_branch_gap": curve.min_branch_gap}))
    return ScanReport(f"rauch(g={genus})", seed, tuple(records))


def noether_scan(quartic: CurveModel, trials: int, seed: int) -> ScanReport:
    """Random triples on a plane quartic; generic triples span all 6 dimensions.

    Every sample is ranked by SVD and re-verified exactly.
    """
    if quartic.is_hyperelliptic:
        raise ValidationError("noether_scan needs a plane quartic")
    records = []
    for t in range(trials):
        s = derive_seed(seed, t)
        rng = SplitMix64(s)
        form = random_connection(quartic, rng)
        rows = product_rows(quartic, form.entries, exact=True)
        frank = float_rank(rows)[0]
        rank = exact_rank(rows, 6).rank
        records.append(TrialRecord(t, s, True, rank, frank, 6))
    return ScanReport("noether", seed, tuple(records))


def _independent_entries(form: ConnectionForm) -> int:
    return exact_rank([list(map(GaussianRational.coerce, e.coeffs)) for e in form.entries]).rank


def hyperelliptic_injectivity_scan(genus: int, trials: int, seed: int, curve: CurveModel | None = None):
    """Random connections on a hyperelliptic curve of the given genus.

    Expected: injective in every genus-2 trial whose entries span a 2-dim space
    (trials with fewer independent entries are marked invalid), and never
    injective for genus >= 3, where every product row has zero dx^2/y part.
    """
    if curve is None:
        curve = make_hyperelliptic([-1] + [0] * (2 * genus + 1) + [1])
    records = []
    dim = 3 * genus - 3
    for t in range(trials):
        s = derive_seed(seed, t)
        rng = SplitMix64(s)
        form = random_connection(curve, rng)
        rows = product_rows(curve, form.entries, exact=True)
        rank = exact_rank(rows, dim).rank
        frank = float_rank(rows)[0]
        indep = _independent_entries(form)
        block_zero = dx2_over_y_block_is_zero(curve, rows)
        if genus == 2:
            valid, expected = indep >= 2, dim
        else:
            valid, expected = True, min(rank, 2 * genus - 1)
        records.append(TrialRecord(
            t, s, valid, rank, frank, expected,
            {"injective": rank == dim, "independent_entries": indep, "dx2_over_y_zero": block_zero},
        ))
    return ScanReport(f"injectivity(g={genus})", seed, tuple(records))


def conjugation_invariance(curve: CurveModel, form: ConnectionForm, rng: SplitMix64) -> tuple[int, int]:
    """Exact ranks for A and g A g^{-1} with a random exact g in SL2."""
    g, g_inv = random_sl2(rng)
    exact_form = ConnectionForm(*(AbelianDifferential(tuple(GaussianRational.coerce(c) for c in e.coeffs),
                                                      e.kind) for e in form.entries))
    conj = exact_form.conjugate_by(g, g_inv)
    dim = 3 * curve.genus - 3
    before = exact_rank(product_rows(curve, exact_form.entries, exact=True), dim).rank
    after = exact_rank(product_rows(curve, conj.entries, exact=True), dim).rank
    return before, after


__all__ = [
    "RankMode", "SpanReport", "ScanReport", "TrialRecord", "product_matrix", "product_rows",
    "injectivity_verdict", "rauch_check", "rauch_trial", "noether_scan",
    "hyperelliptic_injectivity_scan", "conjugation_invariance", "float_rank", "rank_report",
    "dx2_over_y_block_is_zero", "random_connection", "random_differential", "random_sl2",
    "random_hyperelliptic",
]
