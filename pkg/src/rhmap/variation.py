"""Derivative of the monodromy map in holomorphic connection directions.

Only the zero-Beltrami slice is treated: the complex structure stays fixed and
the connection moves as A + eps * A_dot with A_dot holomorphic.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .cohomology import Cocycle
from .curve import CurveModel
from .errors import NumericalFailure, ValidationError
from .integrate import IntegratorConfig
from .path import LoopPath, continue_y
from .transport import ConnectionForm, _FormEvaluator, _transport_trace, inv2, irreducible, monodromy


@dataclass(frozen=True)
class TangentDirection:
    """Tangent vector (mu, A_dot) with mu = 0; A_dot is then automatically tamed."""

    a_dot: ConnectionForm
    mu: int = 0

    def __post_init__(self):
        if self.mu != 0:
            raise ValidationError("only directions with zero Beltrami component are supported")


class Derivative(NamedTuple):
    rho: np.ndarray
    rho_dot: np.ndarray
    err_estimate: float


def _variational_rhs(forms, seg, length, unit):
    ev, ev_dot = forms

    def rhs(s, u):
        t = s / length
        x = seg.start + s * unit
        y = seg.y_at(t)
        m = ev(x, y, unit)
        md = ev_dot(x, y, unit)
        f = u[:4].reshape(2, 2)
        fd = u[4:].reshape(2, 2)
        return np.concatenate([-(m @ f).ravel(), -(m @ fd + md @ f).ravel()])

    return rhs


def derivative_monodromy(curve: CurveModel, form: ConnectionForm, direction: TangentDirection,
                         loop: LoopPath, cfg: IntegratorConfig | None = None) -> Derivative:
    """rho and d/d(eps) of the monodromy of d + A + eps A_dot at eps = 0.

    Integrates F' = -A F together with its linearisation
    F_dot' = -A F_dot - A_dot F from F = I, F_dot = 0, giving (P, P_dot);
    then rho = P^{-1} and rho_dot = -P^{-1} P_dot P^{-1}.
    """
    cfg = cfg or IntegratorConfig()
    trace = continue_y(curve, loop)
    u0 = np.concatenate([np.eye(2, dtype=complex).ravel(), np.zeros(4, dtype=complex)])
    forms = (_FormEvaluator(form), _FormEvaluator(direction.a_dot))
    u, state = _transport_trace(curve, forms, trace, cfg, u0, _variational_rhs)
    p = u[:4].reshape(2, 2)
    p_dot = u[4:].reshape(2, 2)
    p_inv = inv2(p)
    return Derivative(p_inv, -p_inv @ p_dot @ p_inv, state.err_sum)


def cocycle_from_direction(curve: CurveModel, form: ConnectionForm, direction: TangentDirection,
                           loops: Sequence[LoopPath], cfg: IntegratorConfig | None = None) -> Cocycle:
    """eta(gamma) = rho_dot(gamma) rho(gamma)^{-1} for each loop, keyed by label."""
    if not loops:
        raise ValidationError("no loops given")
    base, sheet = loops[0].base_point, loops[0].start_sheet
    if any(lp.base_point != base or lp.start_sheet != sheet for lp in loops):
        raise ValidationError("loops must share base point and start sheet")
    labels = [lp.label for lp in loops]
    if len(set(labels)) != len(labels):
        raise ValidationError("loop labels must be distinct")
    values, rho, errs, traces = {}, {}, {}, {}
    for lp in loops:
        d = derivative_monodromy(curve, form, direction, lp, cfg)
        rho_inv = inv2(d.rho)
        eta = d.rho_dot @ rho_inv
        # the trace is pure integration error; large ones mean the solve failed
        tr = complex(np.trace(eta))
        scale = max(1.0, np.linalg.norm(d.rho_dot) * np.linalg.norm(rho_inv))
        if abs(tr) > 1e-8 * scale:
            raise NumericalFailure(f"cocycle value on {lp.label!r} has trace {abs(tr):.2e}")
        values[lp.label] = eta - 0.5 * tr * np.eye(2)
        rho[lp.label] = d.rho
        errs[lp.label] = d.err_estimate
        traces[lp.label] = abs(tr)
    if len(loops) >= 2 and not irreducible(list(rho.values())):
        warnings.warn("monodromy on the given loops looks reducible", RuntimeWarning, stacklevel=2)
    return Cocycle(values, rho, base, sheet, meta={"err_estimate": errs, "trace_defect": traces})


def finite_difference_oracle(curve: CurveModel, form: ConnectionForm, direction: TangentDirection,
                             loop: LoopPath, eps: float = 1e-4,
                             cfg: IntegratorConfig | None = None) -> np.ndarray:
    """Central difference (rho(A + eps A_dot) - rho(A - eps A_dot)) / (2 eps)."""
    if not 1e-6 <= eps <= 1e-2:
        raise ValidationError(f"eps must lie in [1e-6, 1e-2], got {eps}")
    plus = monodromy(curve, form + direction.a_dot.scale(eps), loop, cfg)
    minus = monodromy(curve, form + direction.a_dot.scale(-eps), loop, cfg)
    return (plus.matrix - minus.matrix) / (2 * eps)
