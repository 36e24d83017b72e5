"""SVG figures: BFS layers on concentric circles.

Layer ``i`` sits on the circle of radius ``i + 1`` (in units), its vertices
evenly spaced in layer order starting at angle zero. Tree edges are straight
segments; level edges and non-tree binding edges bulge outwards past the
outer circle of the pair they join.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .errors import InputError
from .graph import EdgeKind, EmbeddedGraph, bfs_structure, classify_edge, face_trace, layer_order, orient
from .layout import QueueLayout

UNIT = 40.0
COLOURS = {
    EdgeKind.BINDING_TREE: "#1f77b4",
    EdgeKind.LEVEL: "#8c564b",
    EdgeKind.BINDING_NONTREE: "#2ca02c",
}


def _fmt(x: float) -> str:
    text = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def render_svg(emb: EmbeddedGraph, layout: QueueLayout | None = None, *, root: int = 0) -> str:
    """Return the SVG document for a connected plane embedding."""
    emb = orient(emb)
    g = emb.graph
    faces = face_trace(emb)
    if faces.genus != 0:
        raise InputError("planar embedding required")
    bfs = bfs_structure(emb, root, faces=faces)
    order = layer_order(emb, bfs, faces)
    if layout is not None and len(layout.queues) != g.m:
        raise InputError("layout does not match the graph")

    size = 2 * (bfs.t + 2.5) * UNIT
    centre = size / 2
    point: dict[int, tuple[float, float]] = {}
    for i, layer in enumerate(order.layers):
        radius = (i + 1) * UNIT
        for r, v in enumerate(layer):
            angle = 2 * math.pi * r / len(layer)
            point[v] = (centre + radius * math.cos(angle), centre - radius * math.sin(angle))

    s = _fmt(size)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">',
        f'<rect width="{s}" height="{s}" fill="white"/>',
    ]
    for i in range(len(order.layers)):
        lines.append(
            f'<circle cx="{_fmt(centre)}" cy="{_fmt(centre)}" r="{_fmt((i + 1) * UNIT)}" '
            'fill="none" stroke="#cccccc" stroke-dasharray="4 4"/>'
        )
    for e, (u, v) in enumerate(g.edges):
        kind = classify_edge(g, bfs, e)
        (x1, y1), (x2, y2) = point[u], point[v]
        title = f"edge {e}" if layout is None else f"edge {e}, queue {layout.queues[e]}"
        style = f'fill="none" stroke="{COLOURS[kind]}" stroke-width="1.5"'
        if kind is EdgeKind.BINDING_TREE:
            shape = f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" {style}>'
            lines.append(f"{shape}<title>{escape(title)}</title></line>")
            continue
        # Control point beyond the outer of the two circles, at the mean angle.
        mx, my = (x1 + x2) / 2 - centre, (y1 + y2) / 2 - centre
        reach = (max(bfs.layer_of[u], bfs.layer_of[v]) + 1.8) * UNIT
        norm = math.hypot(mx, my)
        if norm < 1e-9:
            mx, my, norm = -(y2 - y1), x2 - x1, math.hypot(x2 - x1, y2 - y1)
        cx, cy = centre + reach * mx / norm, centre + reach * my / norm
        shape = (
            f'<path d="M {_fmt(x1)} {_fmt(y1)} Q {_fmt(cx)} {_fmt(cy)} {_fmt(x2)} {_fmt(y2)}" {style}>'
        )
        lines.append(f"{shape}<title>{escape(title)}</title></path>")
    for v in range(g.n):
        x, y = point[v]
        lines.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="5" fill="black"><title>vertex {v}</title></circle>'
        )
        lines.append(f'<text x="{_fmt(x + 7)}" y="{_fmt(y - 7)}" font-size="10">{v}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
