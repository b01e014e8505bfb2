"""Deterministic SVG depictions of patches.

Cells map to the plane by x = size*(q + r/2), y = size*(r*sqrt(3)/2), a
pointy-top hexagon of circumradius size/sqrt(3) around each center.  All
coordinates are rounded to three decimals and elements are emitted in a
fixed order (hexagon outlines by cell, then motif elements), so the same
patch and style always produce the same bytes.

Hexagon outlines are the only <path> elements; motif strokes are
<polyline>, filled shapes are <polygon>.  That keeps "one path per cell"
true in every style.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Optional

from .hexgrid import DIRS
from .ruleset import RuleSet, TileState
from .solver import Patch

STYLES = ("outline", "stripes", "dendrite", "joints", "rhombi")

# style name -> stroke layer tag it draws
_MOTIF_LAYER = {"stripes": "stripe", "dendrite": "dendrite"}

PALETTE = {
    "fill": "#f7f5ef",
    "outline": "#4a4a4a",
    "stripe": "#c0392b",
    "dendrite": "#1e7a46",
    "male": "#333333",
    "female": "#c9c9c9",
    "rhombi0": "#e41a1c",
    "rhombi1": "#377eb8",
    "rhombi2": "#4daf4a",
}


class RenderStyle(NamedTuple):
    style: str = "outline"
    size: float = 40.0
    palette: Optional[dict] = None

    def colors(self) -> dict:
        merged = dict(PALETTE)
        if self.palette:
            merged.update(self.palette)
        return merged


def _fmt(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


def _center(cell, size):
    q, r = cell
    return (size * (q + r / 2), size * (r * math.sqrt(3) / 2))


def _corner(cell, k, size):
    cx, cy = _center(cell, size)
    ang = math.radians(60 * k + 30)
    rad = size / math.sqrt(3)
    return (cx + rad * math.cos(ang), cy + rad * math.sin(ang))


def _edge_mid(cell, e, size):
    dq, dr = DIRS[e]
    cx, cy = _center(cell, size)
    mx, my = _center((cell[0] + dq, cell[1] + dr), size)
    return ((cx + mx) / 2, (cy + my) / 2)


def _anchor_point(cell, anchor, size):
    if anchor == "c":
        return _center(cell, size)
    return _edge_mid(cell, int(anchor[1]), size)


def _hex_path(cell, size) -> str:
    pts = [_corner(cell, k, size) for k in range(6)]
    d = "M " + " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in pts) + " Z"
    return d


def _poly_points(pts) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)


def _edge_band(cell, e, size, inset=0.28):
    """Trapezoid hugging edge e from the inside."""
    cx, cy = _center(cell, size)
    c1 = _corner(cell, (e - 1) % 6, size)
    c2 = _corner(cell, e % 6, size)
    p1 = (c1[0] + (cx - c1[0]) * inset, c1[1] + (cy - c1[1]) * inset)
    p2 = (c2[0] + (cx - c2[0]) * inset, c2[1] + (cy - c2[1]) * inset)
    return [c1, c2, p2, p1]


def render_svg(p: Patch, rs: RuleSet, style: RenderStyle) -> str:
    """SVG text for an assigned patch in one of the fixed styles."""
    if style.style not in STYLES:
        raise ValueError(f"unknown style {style.style!r}; choose from {STYLES}")
    layer = _MOTIF_LAYER.get(style.style)
    if layer is not None and layer not in rs.stroke_layers():
        raise ValueError(f"rule set declares no {layer!r} strokes")

    size = style.size
    colors = style.colors()
    cells = sorted(p.assignment)
    lw = _fmt(size * 0.03)

    body = []
    body.append(f'<g id="cells" fill="{colors["fill"]}" '
                f'stroke="{colors["outline"]}" stroke-width="{lw}" '
                f'stroke-linejoin="round">')
    for cell in cells:
        body.append(f'<path d="{_hex_path(cell, size)}"/>')
    body.append("</g>")

    if layer is not None:
        mw = _fmt(size * 0.09)
        body.append(f'<g id="motif" fill="none" stroke="{colors[layer]}" '
                    f'stroke-width="{mw}" stroke-linecap="round">')
        for cell in cells:
            segs = [(a, b) for lay, a, b in rs.strokes(p.assignment[cell])
                    if lay == layer]
            if not segs:
                continue
            body.append(f'<g data-cell="{cell[0]},{cell[1]}">')
            for a, b in segs:
                pa = _anchor_point(cell, a, size)
                pb = _anchor_point(cell, b, size)
                body.append(f'<polyline points="{_poly_points([pa, pb])}"/>')
            body.append("</g>")
        body.append("</g>")
    elif style.style == "joints":
        body.append('<g id="motif" stroke="none">')
        for cell in cells:
            s = p.assignment[cell]
            male = rs.male_edge_abs(s)
            body.append(f'<g data-cell="{cell[0]},{cell[1]}">')
            for e in range(6):
                if e == male:
                    continue
                pts = _edge_band(cell, e, size, inset=0.18)
                body.append(f'<polygon fill="{colors["female"]}" '
                            f'points="{_poly_points(pts)}"/>')
            if male is not None:
                pts = _edge_band(cell, male, size, inset=0.32)
                body.append(f'<polygon fill="{colors["male"]}" '
                            f'points="{_poly_points(pts)}"/>')
            body.append("</g>")
        body.append("</g>")
    elif style.style == "rhombi":
        body.append(f'<g id="motif" stroke="{colors["outline"]}" '
                    f'stroke-width="{lw}" stroke-linejoin="round">')
        for cell in cells:
            s = p.assignment[cell]
            body.append(f'<g data-cell="{cell[0]},{cell[1]}">')
            for j in range(3):
                pts = [_center(cell, size)] + \
                    [_corner(cell, 2 * j + i, size) for i in range(3)]
                color = colors[f"rhombi{(j + s.orientation) % 3}"]
                body.append(f'<polygon fill="{color}" '
                            f'points="{_poly_points(pts)}"/>')
            body.append("</g>")
        body.append("</g>")

    if cells:
        rad = size / math.sqrt(3)
        xs = [x for c in cells for x in (_center(c, size)[0],)]
        ys = [y for c in cells for y in (_center(c, size)[1],)]
        x0, x1 = min(xs) - size, max(xs) + size
        y0, y1 = min(ys) - size, max(ys) + size
    else:
        x0, y0, x1, y1 = -1.0, -1.0, 1.0, 1.0
    view = f"{_fmt(x0)} {_fmt(y0)} {_fmt(x1 - x0)} {_fmt(y1 - y0)}"
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{view}" '
            f'width="{_fmt(x1 - x0)}" height="{_fmt(y1 - y0)}">')
    return "\n".join([head] + body + ["</svg>"]) + "\n"


def render_tile(s: TileState, rs: RuleSet, style: RenderStyle) -> str:
    """One-cell render of a single tile state, centered at the origin."""
    if s not in rs.enumerate_states():
        raise ValueError(f"{s} is not a state of rule set {rs.name!r}")
    from .hexgrid import Region
    p = Patch(rs, Region.explicit([(0, 0)]), {(0, 0): s})
    return render_svg(p, rs, style)
