"""Deterministic SVG diagrams of branch points and loops."""

from __future__ import annotations

from typing import Sequence

from .curve import CurveModel
from .path import LoopPath

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def _fmt(v: float) -> str:
    s = f"{v:.4f}"
    return "0.0000" if s == "-0.0000" else s


def emit_svg(curve: CurveModel, loops: Sequence[LoopPath], size: int = 480) -> str:
    """Branch points as markers, loops as closed polylines, clearance disks as
    dashed circles around each branch point.  Output depends only on inputs."""
    pts = list(curve.branch_points) + [v for lp in loops for v in lp.vertices]
    xs = [p.real for p in pts]
    ys = [p.imag for p in pts]
    pad = 0.1 * max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    x0, x1 = min(xs) - pad, max(xs) + pad
    y0, y1 = min(ys) - pad, max(ys) + pad
    scale = size / max(x1 - x0, y1 - y0)

    def tx(z: complex):
        # flip the imaginary axis so that up is +i
        return _fmt((z.real - x0) * scale), _fmt((y1 - z.imag) * scale)

    w, h = _fmt((x1 - x0) * scale), _fmt((y1 - y0) * scale)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>',
    ]
    clearance = min((lp.clearance for lp in loops), default=None)
    for k, b in enumerate(curve.branch_points):
        cx, cy = tx(b)
        if clearance is not None:
            out.append(f'<circle class="clearance" cx="{cx}" cy="{cy}" r="{_fmt(clearance * scale)}" '
                       'fill="none" stroke="#999999" stroke-dasharray="3,3"/>')
        out.append(f'<circle class="branch" id="b{k}" cx="{cx}" cy="{cy}" r="4" fill="black"/>')
    for k, lp in enumerate(loops):
        d = " ".join(("M" if i == 0 else "L") + " {} {}".format(*tx(v)) for i, v in enumerate(lp.vertices))
        color = _COLORS[k % len(_COLORS)]
        out.append(f'<path class="loop" data-label="{lp.label}" d="{d} Z" fill="none" '
                   f'stroke="{color}" stroke-width="1.5"/>')
        bx, by = tx(lp.base_point)
        out.append(f'<circle class="base" cx="{bx}" cy="{by}" r="3" fill="{color}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
