"""SVG pictures of feasible sets.

Two-player games get one panel per discount value, each showing the
feasible set (filled), the one-shot hull (dotted) and the payoff cube
(frame).  Three-player games are projected to the plane and overlaid in a
single panel.  Coordinates are written as floats with six significant
digits; everything upstream stays exact.
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from fractions import Fraction
from typing import Sequence

from olg.feasible import feasible_set
from olg.geometry import Polytope, ordered_hull_2d
from olg.stage_game import StageGame, one_shot_hull, payoff_cube

PALETTE = ("#4d4d4d", "#d4a017", "#2b6cb0", "#c53030", "#2f855a", "#6b46c1", "#dd6b20", "#319795")
PANEL = 320
MARGIN = 40
LEGEND_ROW = 18

PROJECTIONS = ("isometric", "drop1", "drop2", "drop3")


class UnsupportedDimension(ValueError):
    pass


def fmt(x: float) -> str:
    return f"{x:.6g}"


def delta_label(Delta: Fraction) -> str:
    return "Δ → 0" if Delta == 0 else f"Δ = {Delta}"


def region(g: StageGame, Delta: Fraction) -> Polytope:
    """Feasible set at ``Delta``; zero stands for the limiting cube."""
    return payoff_cube(g) if Delta == 0 else feasible_set(g, Delta)


def project(pt: Sequence, how: str) -> tuple[float, float]:
    x = [float(c) for c in pt]
    if len(x) == 2:
        return x[0], x[1]
    if how == "isometric":
        return (x[0] - x[1]) * math.sqrt(3) / 2, x[2] - (x[0] + x[1]) / 2
    if how in ("drop1", "drop2", "drop3"):
        drop = int(how[-1]) - 1
        kept = [c for i, c in enumerate(x) if i != drop]
        return kept[0], kept[1]
    raise ValueError(f"unknown projection {how!r}; choose from {', '.join(PROJECTIONS)}")


def outline(poly: Polytope, how: str) -> list[tuple[float, float]]:
    flat = {project(v, how) for v in poly.vertices}
    return [(float(a), float(b)) for a, b in ordered_hull_2d(flat)]


class _Frame:
    """Affine map from payoff coordinates into a square panel."""

    def __init__(self, lo: tuple[float, float], hi: tuple[float, float], ox: float, oy: float, size: float):
        span = max(hi[0] - lo[0], hi[1] - lo[1]) or 1.0
        self.scale = size / span
        self.lo = lo
        self.ox, self.oy, self.size = ox, oy, size

    def __call__(self, p: tuple[float, float]) -> tuple[float, float]:
        x = self.ox + (p[0] - self.lo[0]) * self.scale
        y = self.oy + self.size - (p[1] - self.lo[1]) * self.scale
        return x, y

    def points(self, pts) -> str:
        return " ".join(f"{fmt(x)},{fmt(y)}" for x, y in map(self, pts))


def _shape(parent, pts, frame: _Frame, **attrs):
    if len(pts) == 1:
        x, y = frame(pts[0])
        return ET.SubElement(parent, "circle", cx=fmt(x), cy=fmt(y), r="2.5", **attrs)
    if len(pts) == 2:
        (x1, y1), (x2, y2) = frame(pts[0]), frame(pts[1])
        attrs.pop("fill", None)
        return ET.SubElement(parent, "line", x1=fmt(x1), y1=fmt(y1), x2=fmt(x2), y2=fmt(y2), **attrs)
    return ET.SubElement(parent, "polygon", points=frame.points(pts), **attrs)


def _bounds(polys: Sequence[list[tuple[float, float]]]):
    xs = [p[0] for poly in polys for p in poly]
    ys = [p[1] for poly in polys for p in poly]
    return (min(xs), min(ys)), (max(xs), max(ys))


def _legend(svg, entries, x0: float, y0: float):
    for row, (label, color, dash) in enumerate(entries):
        y = y0 + row * LEGEND_ROW
        line = ET.SubElement(svg, "line", x1=fmt(x0), y1=fmt(y), x2=fmt(x0 + 24), y2=fmt(y),
                             stroke=color, **{"stroke-width": "3"})
        if dash:
            line.set("stroke-dasharray", dash)
        text = ET.SubElement(svg, "text", x=fmt(x0 + 30), y=fmt(y + 4), **{"font-size": "12"})
        text.text = label


def render(g: StageGame, deltas: Sequence, projection: str = "isometric") -> str:
    """SVG document for the feasible sets at each value in ``deltas``."""
    deltas = [Fraction(d) for d in deltas]
    if not deltas:
        raise ValueError("need at least one discount value")
    for d in deltas:
        if not 0 <= d <= 1:
            raise ValueError(f"discount values must lie in [0, 1], got {d}")
    if g.n == 2:
        return _panels(g, deltas)
    if g.n == 3:
        if projection not in PROJECTIONS:
            raise ValueError(f"unknown projection {projection!r}; choose from {', '.join(PROJECTIONS)}")
        return _overlay(g, deltas, projection)
    raise UnsupportedDimension(f"plots support 2 or 3 players, game has {g.n}")


def _panels(g: StageGame, deltas: list[Fraction]) -> str:
    V = outline(one_shot_hull(g), "")
    cube = outline(payoff_cube(g), "")
    lo, hi = _bounds([cube])
    legend_h = (len(deltas) + 3) * LEGEND_ROW
    width = len(deltas) * (PANEL + MARGIN) + MARGIN
    height = PANEL + 2 * MARGIN + legend_h
    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=fmt(width), height=fmt(height),
                     viewBox=f"0 0 {fmt(width)} {fmt(height)}")
    title = ET.SubElement(svg, "title")
    title.text = f"Feasible payoff sets of {g.name or 'game'}"
    for j, Delta in enumerate(deltas):
        color = PALETTE[j % len(PALETTE)]
        ox = MARGIN + j * (PANEL + MARGIN)
        frame = _Frame(lo, hi, ox, MARGIN, PANEL)
        panel = ET.SubElement(svg, "g", id=f"panel-{j + 1}")
        _shape(panel, cube, frame, fill="none", stroke="#000000", **{"stroke-width": "1"})
        F = outline(region(g, Delta), "")
        _shape(panel, F, frame, fill=color, stroke=color, **{"fill-opacity": "0.45", "stroke-width": "1.5"})
        _shape(panel, V, frame, fill="none", stroke="#000000",
               **{"stroke-dasharray": "2,3", "stroke-width": "1.5"})
        caption = ET.SubElement(panel, "text", x=fmt(ox + PANEL / 2), y=fmt(MARGIN - 10),
                                **{"text-anchor": "middle", "font-size": "14"})
        caption.text = delta_label(Delta)
    entries = [(delta_label(d), PALETTE[j % len(PALETTE)], None) for j, d in enumerate(deltas)]
    entries += [("one-shot hull V", "#000000", "2,3"), ("payoff cube F*", "#000000", None)]
    _legend(svg, entries, MARGIN, PANEL + 2 * MARGIN)
    return _tostring(svg)


def _overlay(g: StageGame, deltas: list[Fraction], how: str) -> str:
    V = outline(one_shot_hull(g), how)
    cube = outline(payoff_cube(g), how)
    # draw larger sets first so nested regions stay visible
    order = sorted(range(len(deltas)), key=lambda j: deltas[j])
    regions = {j: outline(region(g, deltas[j]), how) for j in order}
    lo, hi = _bounds([cube, V, *regions.values()])
    legend_h = (len(deltas) + 3) * LEGEND_ROW
    width = PANEL + 2 * MARGIN
    height = PANEL + 2 * MARGIN + legend_h
    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=fmt(width), height=fmt(height),
                     viewBox=f"0 0 {fmt(width)} {fmt(height)}")
    title = ET.SubElement(svg, "title")
    title.text = f"Feasible payoff sets of {g.name or 'game'} ({how} projection)"
    frame = _Frame(lo, hi, MARGIN, MARGIN, PANEL)
    panel = ET.SubElement(svg, "g", id="overlay")
    _shape(panel, cube, frame, fill="none", stroke="#000000", **{"stroke-width": "1"})
    for j in order:
        color = PALETTE[j % len(PALETTE)]
        _shape(panel, regions[j], frame, fill=color, stroke=color, **{"fill-opacity": "0.35", "stroke-width": "1.5"})
    _shape(panel, V, frame, fill="none", stroke="#000000", **{"stroke-dasharray": "2,3", "stroke-width": "1.5"})
    entries = [(delta_label(d), PALETTE[j % len(PALETTE)], None) for j, d in enumerate(deltas)]
    entries += [("one-shot hull V", "#000000", "2,3"), ("payoff cube F* (projected)", "#000000", None)]
    _legend(svg, entries, MARGIN, PANEL + 2 * MARGIN)
    return _tostring(svg)


def _tostring(svg) -> str:
    ET.indent(svg)
    return ET.tostring(svg, encoding="unicode", xml_declaration=True) + "\n"
