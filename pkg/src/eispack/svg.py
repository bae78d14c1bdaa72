"""Deterministic SVG output for packings and Schmidt arrangements.

Drawing uses mathematical coordinates (y up); the flip to SVG's y-down
convention happens only when coordinates are written out. Every number is
printed with 12 significant digits so identical inputs give identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CapacityExceeded, EmptyWindow
from .geometry import OrientedCircleReal, packing_circles
from .quadruples import as_quadruple
from .schmidt import SQRT3, ReducedCoords, Window, center_real, classify_coset

DEFAULT_CAP = 100_000
GREEN = "#2e8b57"
BLUE = "#1f5fbf"
BLACK = "#000000"


def fmt(v: float) -> str:
    out = f"{v:.12g}"
    return "0" if out == "-0" else out


@dataclass
class DrawSpec:
    N: int = 400
    window: Window | None = None
    stroke_scale: float = 0.01
    stroke_floor: float = 0.0005
    labels: bool = False
    color_moiety: bool = False
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"curvature bound must be at least 1, got {self.N}")


@dataclass
class _Canvas:
    window: Window
    stroke_floor: float
    items: list[str] = field(default_factory=list)
    cap: int = DEFAULT_CAP

    def _y(self, y: float) -> float:
        return self.window.ymax + self.window.ymin - y

    def _check(self):
        if len(self.items) >= self.cap:
            raise CapacityExceeded(f"drawing exceeds the element cap of {self.cap}")

    def circle(self, cx: float, cy: float, r: float, stroke: str, width: float):
        self._check()
        self.items.append(
            f'<circle cx="{fmt(cx)}" cy="{fmt(self._y(cy))}" r="{fmt(r)}" '
            f'stroke="{stroke}" stroke-width="{fmt(max(width, self.stroke_floor))}" fill="none"/>'
        )

    def segment(self, x0, y0, x1, y1, stroke: str, width: float):
        self._check()
        self.items.append(
            f'<line x1="{fmt(x0)}" y1="{fmt(self._y(y0))}" x2="{fmt(x1)}" y2="{fmt(self._y(y1))}" '
            f'stroke="{stroke}" stroke-width="{fmt(max(width, self.stroke_floor))}"/>'
        )

    def label(self, x: float, y: float, size: float, text: str):
        self.items.append(
            f'<text x="{fmt(x)}" y="{fmt(self._y(y))}" font-size="{fmt(size)}" '
            f'text-anchor="middle" dominant-baseline="central">{text}</text>'
        )

    def render(self) -> str:
        w = self.window
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" '
            f'viewBox="{fmt(w.xmin)} {fmt(w.ymin)} {fmt(w.xmax - w.xmin)} {fmt(w.ymax - w.ymin)}">\n'
        )
        return head + "\n".join(self.items) + "\n</svg>\n"


def clip_line(p: float, q: float, h: float, window: Window):
    """Segment of the line p x + q y = h inside ``window``, or None."""
    # point on the line plus the direction (-q, p)
    x0, y0 = p * h, q * h
    dx, dy = -q, p
    lo, hi = -math.inf, math.inf
    for d, a, amin, amax in ((dx, x0, window.xmin, window.xmax), (dy, y0, window.ymin, window.ymax)):
        if abs(d) < 1e-15:
            if not amin <= a <= amax:
                return None
            continue
        t1, t2 = (amin - a) / d, (amax - a) / d
        lo, hi = max(lo, min(t1, t2)), min(hi, max(t1, t2))
    if lo > hi:
        return None
    return (x0 + lo * dx, y0 + lo * dy, x0 + hi * dx, y0 + hi * dy)


def _packing_window(circles: Sequence[tuple[int, int, OrientedCircleReal]]) -> Window:
    outer = [c for k, _, c in circles if k < 0]
    if outer:
        cx, cy = outer[0].center
        r = outer[0].radius * 1.02
        return Window(cx - r, cx + r, cy - r, cy + r)
    discs = [c for k, _, c in circles if k > 0]
    if not discs:
        raise EmptyWindow("no circles of positive curvature to frame")
    xs = [c.center[0] for c in discs]
    ys = [c.center[1] for c in discs]
    r = max(c.radius for c in discs)
    return Window(min(xs) - 2 * r, max(xs) + 2 * r, min(ys) - 1.2 * r, max(ys) + 1.2 * r)


def moiety_colours(root: Sequence[int]) -> dict[int, str]:
    """Colour per position class: green for chi_2 = 1, blue for chi_2 = -1.

    When both moieties share a chi_2 value, O is green and E is blue so the
    two halves stay distinguishable.
    """
    from .reciprocity import packing_chi2

    chi_o, chi_e = packing_chi2(root)
    if chi_o == chi_e:
        return {1: GREEN, 0: BLUE}
    return {1: GREEN if chi_o == 1 else BLUE, 0: GREEN if chi_e == 1 else BLUE}


def draw_packing(root: Sequence[int], spec: DrawSpec) -> str:
    q = as_quadruple(root)
    circles = list(packing_circles(q, spec.N))
    if len(circles) > spec.cap:
        raise CapacityExceeded(f"{len(circles)} circles exceed the element cap of {spec.cap}")
    window = spec.window or _packing_window(circles)
    canvas = _Canvas(window, spec.stroke_floor, cap=spec.cap)
    colours = moiety_colours(q) if spec.color_moiety else None
    span = max(window.xmax - window.xmin, window.ymax - window.ymin)
    # draw in a fixed order so output bytes do not depend on traversal order
    circles.sort(key=lambda item: (item[0], item[1], tuple(round(v, 9) for v in item[2].vector())))
    for k, pos, c in circles:
        stroke = colours[pos % 2] if colours else BLACK
        if c.is_line:
            seg = clip_line(c.p, c.q, c.v / 2, window)
            if seg:
                canvas.segment(*seg, stroke, spec.stroke_scale * span * 0.2)
            continue
        cx, cy = c.center
        canvas.circle(cx, cy, c.radius, stroke, spec.stroke_scale * c.radius)
        if spec.labels and k > 0:
            canvas.label(cx, cy, c.radius * 0.8, str(k))
    return canvas.render()


def draw_schmidt(
    circles: Iterable[ReducedCoords],
    window: Window,
    *,
    labels: bool = False,
    lines: bool = True,
    cap: int = DEFAULT_CAP,
    stroke_scale: float = 0.01,
    stroke_floor: float = 0.0005,
) -> str:
    """Circles given by reduced coordinates; horizontal coset-0 lines
    y = k sqrt(3) are added when ``lines`` is set."""
    canvas = _Canvas(window, stroke_floor, cap=cap)
    span = max(window.xmax - window.xmin, window.ymax - window.ymin)
    if lines:
        for k in range(math.ceil(window.ymin / SQRT3), math.floor(window.ymax / SQRT3) + 1):
            y = k * SQRT3
            canvas.segment(window.xmin, y, window.xmax, y, BLACK, stroke_scale * span * 0.05)
    for c in circles:
        cx, cy = center_real(c)
        r = 1.0 / (abs(c.s) * SQRT3)
        stroke = GREEN if classify_coset(c) == 4 else BLACK
        canvas.circle(cx, cy, r, stroke, stroke_scale * r)
        if labels:
            canvas.label(cx, cy, r * 0.8, str(abs(c.s)))
    return canvas.render()
