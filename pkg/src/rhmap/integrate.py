"""Dormand-Prince 5(4) integrator with proportional-integral step control,
for complex-valued linear systems along one straight path segment."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import MaxStepsExceeded, StepUnderflow, ValidationError

_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
# fifth-order weights minus embedded fourth-order weights
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

_SAFE, _FACMIN, _FACMAX, _BETA = 0.9, 0.2, 10.0, 0.04
_EXPO = 0.2 - 0.75 * _BETA


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-12
    abs_tol: float = 1e-14
    max_steps: int = 1_000_000

    def __post_init__(self):
        if not 0 < self.rel_tol < 1e-3:
            raise ValidationError(f"rel_tol must lie in (0, 1e-3), got {self.rel_tol}")
        if not self.abs_tol > 0:
            raise ValidationError("abs_tol must be positive")
        if self.max_steps < 1:
            raise ValidationError("max_steps must be positive")


@dataclass
class StepperState:
    """Controller state carried from one segment to the next."""

    h: float | None = None
    facold: float = 1e-4
    steps: int = 0
    rejected: int = 0
    err_sum: float = 0.0


def integrate_segment(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    u0: np.ndarray,
    length: float,
    cfg: IntegratorConfig,
    state: StepperState,
    h_cap: Callable[[float], float] | None = None,
) -> np.ndarray:
    """Integrate du/ds = rhs(s, u) for s in [0, length], updating ``state``.

    ``state.err_sum`` accumulates the max-norm of each accepted step's embedded
    error estimate.
    """
    u = np.array(u0, dtype=complex)
    s = 0.0
    k1 = rhs(0.0, u)
    h = state.h if state.h is not None else 0.05 * length
    h = min(h, length)
    while s < length:
        if state.steps + state.rejected >= cfg.max_steps:
            raise MaxStepsExceeded(f"more than {cfg.max_steps} steps")
        if h_cap is not None:
            h = min(h, h_cap(s))
        last = s + h >= length * (1 - 1e-14)
        if last:
            h = length - s
        if h < 1e-14 * max(1.0, length):
            raise StepUnderflow(f"step size {h:.2e} underflow at s={s:.6g}")
        ks = [k1]
        for i in range(1, 7):
            coeffs = _A[i]
            inc = coeffs[0] * ks[0]
            for a, k in zip(coeffs[1:], ks[1:]):
                if a:
                    inc = inc + a * k
            ks.append(rhs(s + _C[i] * h, u + h * inc))
        u_new = u + h * inc  # stage 7 evaluates at the fifth-order solution (FSAL)
        errv = _E[0] * ks[0]
        for e, k in zip(_E[1:], ks[1:]):
            if e:
                errv = errv + e * k
        errv = h * errv
        scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(u), np.abs(u_new))
        err = float(np.sqrt(np.mean(np.abs(errv / scale) ** 2)))
        fac11 = err**_EXPO if err > 0 else 0.0
        if err <= 1.0:
            fac = fac11 / state.facold**_BETA
            fac = min(1 / _FACMIN, max(1 / _FACMAX, fac / _SAFE))
            state.facold = max(err, 1e-4)
            state.steps += 1
            state.err_sum += float(np.max(np.abs(errv)))
            s = length if last else s + h
            u = u_new
            k1 = ks[6]
            h = h / fac
        else:
            state.rejected += 1
            h = h / min(1 / _FACMIN, fac11 / _SAFE)
    state.h = h
    return u
