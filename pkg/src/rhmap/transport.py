"""Parallel transport of d + A along loops and the resulting monodromy."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .curve import AbelianDifferential, CurveModel
from .errors import ValidationError
from .integrate import IntegratorConfig, StepperState, integrate_segment
from .path import ContinuationTrace, LoopPath, continue_open, continue_y


@dataclass(frozen=True)
class ConnectionForm:
    """A = [[alpha, beta], [gamma, -alpha]] with Abelian differential entries."""

    alpha: AbelianDifferential
    beta: AbelianDifferential
    gamma: AbelianDifferential

    def __post_init__(self):
        n = {len(self.alpha), len(self.beta), len(self.gamma)}
        kinds = {self.alpha.kind, self.beta.kind, self.gamma.kind}
        if len(n) != 1 or len(kinds) != 1:
            raise ValidationError("connection entries must live on the same curve")

    @classmethod
    def from_coeffs(cls, curve: CurveModel, alpha, beta, gamma) -> "ConnectionForm":
        return cls(*(AbelianDifferential.on(curve, c) for c in (alpha, beta, gamma)))

    @classmethod
    def zero(cls, curve: CurveModel) -> "ConnectionForm":
        z = AbelianDifferential.zero(curve)
        return cls(z, z, z)

    @property
    def entries(self):
        return (self.alpha, self.beta, self.gamma)

    def form_matrix(self):
        """2x2 nested list of coefficient tuples; the (1,1) entry is -alpha."""
        a, b, c = (e.coeffs for e in self.entries)
        return [[a, b], [c, tuple(-v for v in a)]]

    @classmethod
    def from_form_matrix(cls, m, kind) -> "ConnectionForm":
        trace = [x + y for x, y in zip(m[0][0], m[1][1])]
        if any(abs(complex(t)) > 1e-12 for t in trace):
            raise ValidationError("form matrix is not traceless")
        return cls(*(AbelianDifferential(tuple(m[i][j]), kind) for i, j in ((0, 0), (0, 1), (1, 0))))

    def __add__(self, other: "ConnectionForm") -> "ConnectionForm":
        return ConnectionForm(*(x + y for x, y in zip(self.entries, other.entries)))

    def scale(self, s) -> "ConnectionForm":
        return ConnectionForm(*(x.scale(s) for x in self.entries))

    def conjugate_by(self, g, g_inv) -> "ConnectionForm":
        """g A g^{-1} for a constant matrix g (entries may be exact)."""
        return ConnectionForm.from_form_matrix(
            _const_left(g, _const_right(self.form_matrix(), g_inv)), self.alpha.kind
        )

    def commutator(self, t) -> "ConnectionForm":
        """[A, T] = A T - T A for a constant traceless matrix T."""
        at = _const_right(self.form_matrix(), t)
        ta = _const_left(t, self.form_matrix())
        m = [[tuple(x - y for x, y in zip(at[i][j], ta[i][j])) for j in range(2)] for i in range(2)]
        return ConnectionForm.from_form_matrix(m, self.alpha.kind)

    def complex_coeffs(self) -> np.ndarray:
        return np.array([e.as_complex() for e in self.entries])


def _lincomb(scalars, vectors):
    out = None
    for s, v in zip(scalars, vectors):
        term = tuple(s * x for x in v)
        out = term if out is None else tuple(a + b for a, b in zip(out, term))
    return out


def _const_left(g, m):
    return [[_lincomb((g[i][0], g[i][1]), (m[0][j], m[1][j])) for j in range(2)] for i in range(2)]


def _const_right(m, g):
    return [[_lincomb((g[0][j], g[1][j]), (m[i][0], m[i][1])) for j in range(2)] for i in range(2)]


def _horner(coeffs, x):
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


class _FormEvaluator:
    """Evaluates the 2x2 matrix A(x, y) dx/ds along one trace segment."""

    def __init__(self, form: ConnectionForm):
        self.a, self.b, self.c = (tuple(complex(v) for v in e.coeffs) for e in form.entries)

    def __call__(self, x, y, dxds):
        s = dxds / y
        a = _horner(self.a, x) * s
        return np.array([[a, _horner(self.b, x) * s], [_horner(self.c, x) * s, -a]])


def _branch_cap(curve: CurveModel, seg):
    bps = curve.branch_points
    start, unit = seg.start, (seg.end - seg.start) / abs(seg.end - seg.start)

    def cap(s):
        x = start + s * unit
        return 0.5 * min(abs(x - b) for b in bps)

    return cap


def _transport_trace(curve, forms, trace: ContinuationTrace, cfg, u0, rhs_builder, record=None):
    state = StepperState()
    u = u0
    for seg in trace.segments:
        length = abs(seg.end - seg.start)
        unit = (seg.end - seg.start) / length
        rhs = rhs_builder(forms, seg, length, unit)
        u = integrate_segment(rhs, u, length, cfg, state, _branch_cap(curve, seg))
        if record is not None:
            record.append(u.copy())
    return u, state


def _frame_rhs(forms, seg, length, unit):
    (ev,) = forms

    def rhs(s, u):
        t = s / length
        x = seg.start + s * unit
        m = ev(x, seg.y_at(t), unit)
        return -(m @ u.reshape(2, 2)).ravel()

    return rhs


def transport_frame(curve: CurveModel, form: ConnectionForm, loop: LoopPath,
                    cfg: IntegratorConfig | None = None, trace: ContinuationTrace | None = None):
    """Solution operator P of F' = -A x' F around the loop, F(1) = P F(0).

    Returns (P, err) where err sums the embedded per-step error estimates.
    """
    cfg = cfg or IntegratorConfig()
    trace = trace or continue_y(curve, loop)
    u, state = _transport_trace(
        curve, (_FormEvaluator(form),), trace, cfg, np.eye(2, dtype=complex).ravel(), _frame_rhs
    )
    return u.reshape(2, 2), state.err_sum


def transport_path(curve: CurveModel, form: ConnectionForm, vertices: Sequence[complex], y0: complex,
                   cfg: IntegratorConfig | None = None):
    """Transport along an open polyline starting at (vertices[0], y0).

    Returns (P, y_end, err).
    """
    cfg = cfg or IntegratorConfig()
    trace = continue_open(curve, vertices, y0)
    u, state = _transport_trace(
        curve, (_FormEvaluator(form),), trace, cfg, np.eye(2, dtype=complex).ravel(), _frame_rhs
    )
    return u.reshape(2, 2), trace.segments[-1].ys[-1], state.err_sum


def frames_along(curve: CurveModel, form: ConnectionForm, loop: LoopPath,
                 cfg: IntegratorConfig | None = None) -> list[np.ndarray]:
    """Transported frame F (with F = I at the base) at the end of every segment."""
    cfg = cfg or IntegratorConfig()
    record: list = []
    _transport_trace(curve, (_FormEvaluator(form),), continue_y(curve, loop), cfg,
                     np.eye(2, dtype=complex).ravel(), _frame_rhs, record)
    return [u.reshape(2, 2) for u in record]


@dataclass(frozen=True)
class MonodromyResult:
    matrix: np.ndarray = field(repr=False)
    loop: LoopPath
    err_estimate: float
    det_defect: float
    cfg: IntegratorConfig = IntegratorConfig()


def monodromy(curve: CurveModel, form: ConnectionForm, loop: LoopPath,
              cfg: IntegratorConfig | None = None) -> MonodromyResult:
    """Monodromy rho(loop) = P^{-1}; composing loops (first loop first) then
    multiplies matrices in the same order."""
    cfg = cfg or IntegratorConfig()
    p, err = transport_frame(curve, form, loop, cfg)
    rho = inv2(p)
    return MonodromyResult(rho, loop, err, abs(np.linalg.det(rho) - 1), cfg)


def monodromy_batch(curve, form, loops: Sequence[LoopPath], cfg=None, workers: int = 1):
    """Monodromy of many loops; results are in input order regardless of workers."""
    if workers <= 1:
        return [monodromy(curve, form, lp, cfg) for lp in loops]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda lp: monodromy(curve, form, lp, cfg), loops))


def inv2(m: np.ndarray) -> np.ndarray:
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    det = a * d - b * c
    return np.array([[d, -b], [-c, a]]) / det


def irreducible(mats: Sequence, tol: float = 1e-8) -> bool:
    """Burnside test: the algebra generated by the matrices is all of M_2(C).

    Spans the identity and all products of at most three matrices and checks
    for rank 4 with singular-value threshold ``tol * sigma_max``.
    """
    ms = [np.asarray(getattr(m, "matrix", m), dtype=complex) for m in mats]
    ms = [m / np.linalg.norm(m) for m in ms if np.linalg.norm(m) > 0]
    words = [np.eye(2, dtype=complex)]
    layer = [np.eye(2, dtype=complex)]
    for _ in range(3):
        layer = [w @ m for w in layer for m in ms]
        words.extend(layer)
    sv = np.linalg.svd(np.array([w.ravel() for w in words]), compute_uv=False)
    return int(np.sum(sv > tol * sv[0])) == 4

