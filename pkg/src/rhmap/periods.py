"""Periods of Abelian differentials along loops by adaptive quadrature.

This is the independent oracle for transport of abelian and nilpotent
connections: QUADPACK on each segment of the same continuation trace, with
no Runge-Kutta machinery involved.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import quad

from .curve import AbelianDifferential, CurveModel
from .path import ContinuationTrace, LoopPath, continue_y


def _segment_integral(f, seg, epsabs, epsrel):
    def re(t):
        return f(seg, t).real

    def im(t):
        return f(seg, t).imag

    kw = dict(epsabs=epsabs, epsrel=epsrel, limit=200, points=seg.ts[1:-1] or None)
    return complex(quad(re, 0.0, 1.0, **kw)[0], quad(im, 0.0, 1.0, **kw)[0])


def period(curve: CurveModel, omega: AbelianDifferential, loop: LoopPath,
           trace: ContinuationTrace | None = None, epsabs=1e-14, epsrel=1e-13) -> complex:
    """Integral of omega = c(x) dx/y around the loop."""
    trace = trace or continue_y(curve, loop)
    coeffs = omega.as_complex()

    def integrand(seg, t):
        x = seg.start + t * (seg.end - seg.start)
        c = np.polynomial.polynomial.polyval(x, coeffs)
        return c / seg.y_at(t) * (seg.end - seg.start)

    return sum(_segment_integral(integrand, seg, epsabs, epsrel) for seg in trace.segments)


def form_periods(curve, form, loop, trace=None) -> np.ndarray:
    """Entrywise periods of a traceless form matrix [[a, b], [c, -a]]."""
    trace = trace or continue_y(curve, loop)
    a, b, c = (period(curve, e, loop, trace) for e in form.entries)
    return np.array([[a, b], [c, -a]])
