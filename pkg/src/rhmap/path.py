"""Closed polyline loops in the x-plane punctured at the branch points, and
sign-coherent continuation of y = sqrt(p(x)) along them.

A loop is accepted only if it lifts to a closed loop on the double cover, i.e.
its winding numbers around the (finite) branch points sum to an even number.
For odd-degree p the point at infinity is also a branch point, and the same
parity rule applies to the finite ones.
"""

from __future__ import annotations

import bisect
import cmath
import hashlib
import math
from dataclasses import dataclass
from typing import Sequence

import networkx as nx
import numpy as np

from .curve import CurveModel
from .errors import (
    BasepointMismatch,
    OpenLift,
    PathBlocked,
    StepUnderflow,
    ValidationError,
)

MIN_STEP = 1e-12


@dataclass(frozen=True)
class LoopPath:
    vertices: tuple
    start_sheet: int
    clearance: float
    winding: tuple
    label: str = ""

    @property
    def base_point(self) -> complex:
        return self.vertices[0]

    def segments(self):
        """Non-degenerate segments (a, b), including the closing one."""
        vs = self.vertices
        out = []
        for k in range(len(vs)):
            a, b = vs[k], vs[(k + 1) % len(vs)]
            if a != b:
                out.append((a, b))
        return out

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(repr((tuple((v.real, v.imag) for v in self.vertices), self.start_sheet)).encode())
        return h.hexdigest()[:16]


def principal_y(curve: CurveModel, x: complex) -> complex:
    return cmath.sqrt(curve.p(x))


def _segment_distances(a: np.ndarray, b: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Distance matrix between segments [a_k, b_k] (rows) and points (cols)."""
    d = (b - a)[:, None]
    rel = pts[None, :] - a[:, None]
    den = np.abs(d) ** 2
    den = np.where(den == 0, 1.0, den)
    t = np.clip((rel * np.conj(d)).real / den, 0.0, 1.0)
    return np.abs(rel - t * d)


def polyline_clearance(vertices: Sequence[complex], points: Sequence[complex], closed=True) -> float:
    vs = np.asarray(vertices, dtype=complex)
    b = np.roll(vs, -1) if closed else vs[1:]
    a = vs if closed else vs[:-1]
    if len(a) == 0:
        return float(np.min(np.abs(np.asarray(points) - vs[0])))
    return float(_segment_distances(a, b, np.asarray(points, dtype=complex)).min())


def winding_numbers(vertices: Sequence[complex], points: Sequence[complex]):
    """Winding numbers of the closed polyline around each point.

    Returns (rounded integers, max distance of the raw sums from integers).
    """
    vs = np.asarray(vertices, dtype=complex)
    nxt = np.roll(vs, -1)
    pts = np.asarray(points, dtype=complex)
    ang = np.angle((nxt[:, None] - pts[None, :]) / (vs[:, None] - pts[None, :]))
    raw = ang.sum(axis=0) / (2 * math.pi)
    ints = np.rint(raw)
    return tuple(int(k) for k in ints), float(np.max(np.abs(raw - ints))) if len(pts) else 0.0


def make_loop(curve: CurveModel, vertices: Sequence, sheet: int = 1, label: str = "") -> LoopPath:
    """Validate a closed polyline and wrap it as a LoopPath."""
    if sheet not in (1, -1):
        raise ValidationError(f"sheet must be +1 or -1, got {sheet}")
    vs = tuple(complex(v) for v in vertices)
    if len(vs) < 2:
        raise ValidationError("a loop needs at least two vertices")
    clearance = polyline_clearance(vs, curve.branch_points)
    if not clearance > 0:
        raise ValidationError("loop passes through a branch point")
    winding, defect = winding_numbers(vs, curve.branch_points)
    if defect > 1e-6:
        raise ValidationError(f"winding numbers not integral (defect {defect:.2e})")
    if sum(winding) % 2:
        raise OpenLift(f"loop with winding {winding} does not lift to a closed loop")
    return LoopPath(vs, sheet, clearance, winding, label)


def compose(loops: Sequence[LoopPath], label: str | None = None) -> LoopPath:
    """Concatenation, the first loop traversed first."""
    if not loops:
        raise ValidationError("nothing to compose")
    first = loops[0]
    for lp in loops[1:]:
        if lp.base_point != first.base_point or lp.start_sheet != first.start_sheet:
            raise BasepointMismatch("loops must share base point and start sheet")
    verts = []
    for lp in loops:
        verts.extend(lp.vertices)
    winding = tuple(sum(w) for w in zip(*(lp.winding for lp in loops)))
    if label is None:
        label = "*".join(lp.label for lp in loops)
    return LoopPath(tuple(verts), first.start_sheet, min(lp.clearance for lp in loops), winding, label)


def invert(loop: LoopPath, label: str | None = None) -> LoopPath:
    vs = loop.vertices
    if label is None:
        label = loop.label[4:-1] if loop.label.startswith("inv(") else f"inv({loop.label})"
    return LoopPath(
        (vs[0],) + tuple(reversed(vs[1:])),
        loop.start_sheet,
        loop.clearance,
        tuple(-w for w in loop.winding),
        label,
    )


def circle_loop(curve: CurveModel, center: complex, radius: float, n: int = 64, sheet: int = 1,
                label: str = "") -> LoopPath:
    verts = [center + radius * cmath.exp(2j * math.pi * k / n) for k in range(n)]
    return make_loop(curve, verts, sheet, label or f"circle({radius:g})")


# -- pair loops ---------------------------------------------------------------


def _candidate_nodes(curve: CurveModel) -> list[complex]:
    bps = np.asarray(curve.branch_points)
    gap = curve.min_branch_gap
    center = complex(bps.mean())
    reach = float(np.max(np.abs(bps - center)))
    nodes = []
    for radius, count in ((reach + gap, 36), (reach + 2.5 * gap, 36), (0.5 * reach, 24)):
        nodes.extend(center + radius * cmath.exp(2j * math.pi * (k + 0.5) / count) for k in range(count))
    for b in curve.branch_points:
        nodes.extend(b + 0.6 * gap * cmath.exp(2j * math.pi * (k + 0.25) / 8) for k in range(8))
    return [z for z in nodes if curve.dist_to_branch(z) >= 0.3 * gap]


def _corridor(curve: CurveModel, base: complex, target: int, radius: float, threshold: float):
    """Polyline from ``base`` (excluded) to an entry point on the circle of
    ``radius`` around branch point ``target`` (included)."""
    b = curve.branch_points[target]
    pts = np.asarray(curve.branch_points)
    direct = b + radius * (base - b) / abs(base - b)
    if polyline_clearance([base, direct], pts, closed=False) >= threshold:
        return [direct]

    entries = [b + radius * cmath.exp(2j * math.pi * k / 12) for k in range(12)]
    nodes = [base] + _candidate_nodes(curve) + entries
    arr = np.asarray(nodes)
    ia, ib = np.triu_indices(len(nodes), k=1)
    clear = _segment_distances(arr[ia], arr[ib], pts).min(axis=1) >= threshold
    graph = nx.Graph()
    for u, v in zip(ia[clear], ib[clear]):
        graph.add_edge(int(u), int(v), weight=abs(arr[u] - arr[v]))
    sink = "sink"
    first_entry = len(nodes) - len(entries)
    for k in range(first_entry, len(nodes)):
        graph.add_edge(k, sink, weight=0.0)
    try:
        route = nx.dijkstra_path(graph, 0, sink)
    except (nx.NetworkXNoPath, nx.NodeNotFound):
        raise PathBlocked(f"no corridor to branch point {target}") from None
    return [nodes[k] for k in route[1:-1]]


def _lasso_body(curve, base, target, radius, threshold):
    route = _corridor(curve, base, target, radius, threshold)
    entry = route[-1]
    b = curve.branch_points[target]
    rot = cmath.exp(2j * math.pi / 12)
    circle = [b + (entry - b) * rot**k for k in range(1, 12)]
    return route + circle + [entry] + list(reversed(route[:-1]))


def pair_loop(curve: CurveModel, i: int, j: int, base: complex, sheet: int = 1,
              label: str | None = None) -> LoopPath:
    """Loop from ``base`` going once counterclockwise around branch points i
    and j (in that order) and around no other branch point.

    Built from two lassos: a corridor to a 12-gon of radius 0.3*gap around
    the branch point, once around, and back along the same corridor.
    """
    if not curve.is_hyperelliptic:
        raise ValidationError("pair loops need a hyperelliptic curve")
    n = len(curve.branch_points)
    if not (0 <= i < n and 0 <= j < n):
        raise ValidationError(f"branch indices must lie in [0, {n})")
    if i == j:
        raise ValidationError("pair loop needs two distinct branch points")
    base = complex(base)
    gap = curve.min_branch_gap
    if curve.dist_to_branch(base) < 0.25 * gap:
        raise PathBlocked("base point too close to a branch point")
    radius, threshold = 0.3 * gap, 0.15 * gap
    verts = [base] + _lasso_body(curve, base, i, radius, threshold)
    verts += [base] + _lasso_body(curve, base, j, radius, threshold)
    loop = make_loop(curve, verts, sheet, label if label is not None else f"pair({i},{j})")
    expected = tuple(int(k in (i, j)) for k in range(n))
    if loop.winding != expected or loop.clearance < 0.1 * gap:
        raise PathBlocked(f"constructed loop has winding {loop.winding}, expected {expected}")
    return loop


def default_base(curve: CurveModel) -> complex:
    """A base point on the positive real side, outside all branch points."""
    bps = np.asarray(curve.branch_points)
    reach = float(np.max(np.abs(bps)))
    return complex(reach + max(1.0, reach))


# -- continuation of y ---------------------------------------------------------


@dataclass(frozen=True)
class SegmentTrace:
    start: complex
    end: complex
    ts: tuple
    xs: tuple
    ys: tuple
    branch_points: tuple

    def y_at(self, t: float) -> complex:
        """Analytic continuation of y to x(t) from the nearest anchor at or before t.

        Each anchor is within half the branch distance of every point up to the
        next anchor, so every factor (x - b)/(x_k - b) stays in the disk
        |z - 1| < 1/2 where the principal square root is analytic.
        """
        k = bisect.bisect_right(self.ts, t) - 1
        k = min(max(k, 0), len(self.ts) - 2)
        x = self.start + t * (self.end - self.start)
        xk = self.xs[k]
        y = self.ys[k]
        for b in self.branch_points:
            y *= cmath.sqrt((x - b) / (xk - b))
        return y


@dataclass(frozen=True)
class ContinuationTrace:
    segments: tuple
    step_bound: float

    @property
    def samples(self):
        out = [(self.segments[0].xs[0], self.segments[0].ys[0])]
        for seg in self.segments:
            out.extend(zip(seg.xs[1:], seg.ys[1:]))
        return out


def _continue_segment(curve, a, b, y0, max_step):
    bps = curve.branch_points
    length = abs(b - a)
    ts, xs, ys = [0.0], [a], [y0]
    t = 0.0
    while t < 1.0:
        x = xs[-1]
        step = min(max_step, 0.45 * curve.dist_to_branch(x))
        if step < MIN_STEP:
            raise StepUnderflow(f"continuation step {step:.2e} near x={x}")
        t_new = min(1.0, t + step / length)
        x_new = a + t_new * (b - a)
        y_cont = ys[-1]
        for bp in bps:
            y_cont *= cmath.sqrt((x_new - bp) / (x - bp))
        root = principal_y(curve, x_new)
        y_new = root if abs(root - y_cont) <= abs(root + y_cont) else -root
        if not abs(y_new - y_cont) < abs(y_new):
            raise StepUnderflow(f"sheet became ambiguous near x={x_new}")
        ts.append(t_new)
        xs.append(x_new)
        ys.append(y_new)
        t = t_new
    return SegmentTrace(a, b, tuple(ts), tuple(xs), tuple(ys), bps)


def continue_y(curve: CurveModel, loop: LoopPath, max_step: float = math.inf) -> ContinuationTrace:
    """Sign-coherent continuation of y along the loop, starting on ``start_sheet``."""
    y_start = loop.start_sheet * principal_y(curve, loop.base_point)
    y = y_start
    segs = []
    for a, b in loop.segments():
        seg = _continue_segment(curve, a, b, y, max_step)
        segs.append(seg)
        y = seg.ys[-1]
    if abs(y - y_start) > 1e-10 * max(1.0, abs(y_start)):
        raise OpenLift("continuation did not return to the starting sheet")
    return ContinuationTrace(tuple(segs), max_step)


def continue_open(curve: CurveModel, vertices: Sequence[complex], y0: complex,
                  max_step: float = math.inf) -> ContinuationTrace:
    """Continuation of y along an open polyline, starting from the value ``y0``."""
    segs = []
    y = complex(y0)
    for a, b in zip(vertices[:-1], vertices[1:]):
        if a == b:
            continue
        seg = _continue_segment(curve, complex(a), complex(b), y, max_step)
        segs.append(seg)
        y = seg.ys[-1]
    return ContinuationTrace(tuple(segs), max_step)


def sheet_of(curve: CurveModel, x: complex, y: complex) -> int:
    """+1 or -1 according to which of +-sqrt(p(x)) (principal) is nearest y."""
    r = principal_y(curve, x)
    return 1 if abs(y - r) <= abs(y + r) else -1
