"""Monodromy of holomorphic sl2 connections on hyperelliptic curves, the
derivative of the monodromy map, and the quadratic-differential injectivity test."""

__version__ = "0.1.0"

from .cohomology import Cocycle, CoboundarySolve, check_cocycle, coboundary, same_class, solve_coboundary
from .curve import (
    AbelianDifferential,
    CurveKind,
    CurveModel,
    QuadDifferential,
    fermat_quartic,
    make_hyperelliptic,
    make_plane_quartic,
    omega_basis,
    qd_basis,
)
from .integrate import IntegratorConfig
from .path import LoopPath, circle_loop, compose, continue_y, invert, make_loop, pair_loop
from .span import (
    RankMode,
    SpanReport,
    injectivity_verdict,
    noether_scan,
    product_matrix,
    rauch_check,
)
from .transport import ConnectionForm, MonodromyResult, irreducible, monodromy, transport_frame
from .variation import (
    TangentDirection,
    cocycle_from_direction,
    derivative_monodromy,
    finite_difference_oracle,
)
