"""Minimal SVG rendering of boards, final holes, strips, disks and grids."""

from __future__ import annotations

import math
from fractions import Fraction

from .board import Owner

_COLORS = {Owner.MAKER: "#1f6feb", Owner.BREAKER: "#d97706"}
_FAMILY_COLORS = ("#1f6feb", "#16a34a", "#db2777")


def _f(q) -> float:
    return float(Fraction(q.numerator, q.denominator))


class SvgCanvas:
    def __init__(self, width: int = 800, height: int = 800, pad: float = 0.08):
        self.width = width
        self.height = height
        self.pad = pad
        self.elements: list[str] = []
        self._bounds = None

    def fit(self, points):
        xs = [_f(p.x) for p in points]
        ys = [_f(p.y) for p in points]
        if not xs:
            xs, ys = [0.0], [0.0]
        lo_x, hi_x = min(xs), max(xs)
        lo_y, hi_y = min(ys), max(ys)
        span = max(hi_x - lo_x, hi_y - lo_y, 1e-9)
        margin = span * self.pad
        self._bounds = (lo_x - margin, lo_y - margin, span + 2 * margin)

    def to_px(self, p):
        lo_x, lo_y, span = self._bounds
        x = (_f(p.x) - lo_x) / span * self.width
        y = self.height - (_f(p.y) - lo_y) / span * self.height
        return x, y

    def scale_px(self, length: float) -> float:
        return length / self._bounds[2] * self.width

    def circle(self, p, r_px: float, fill: str, stroke: str = "none", opacity: float = 1.0):
        x, y = self.to_px(p)
        self.elements.append(
            '<circle cx="%.2f" cy="%.2f" r="%.2f" fill="%s" stroke="%s" opacity="%.2f"/>'
            % (x, y, r_px, fill, stroke, opacity)
        )

    def ring(self, p, r_world: float, stroke: str, width: float = 1.0):
        x, y = self.to_px(p)
        self.elements.append(
            '<circle cx="%.2f" cy="%.2f" r="%.2f" fill="none" stroke="%s" stroke-width="%.1f"/>'
            % (x, y, self.scale_px(r_world), stroke, width)
        )

    def polygon(self, pts, fill: str, opacity: float = 0.25, stroke: str = "none"):
        coords = " ".join("%.2f,%.2f" % self.to_px(p) for p in pts)
        self.elements.append(
            '<polygon points="%s" fill="%s" opacity="%.2f" stroke="%s"/>'
            % (coords, fill, opacity, stroke)
        )

    def text(self, p, label: str, size: int = 10):
        x, y = self.to_px(p)
        self.elements.append(
            '<text x="%.2f" y="%.2f" font-size="%d" fill="#444">%s</text>'
            % (x + 5, y - 5, size, label)
        )

    def write(self, path: str):
        body = "\n".join(self.elements)
        with open(path, "w") as f:
            f.write(
                '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
                'viewBox="0 0 %d %d">\n<rect width="100%%" height="100%%" fill="white"/>\n%s\n</svg>\n'
                % (self.width, self.height, self.width, self.height, body)
            )


def render_board(board, path: str, hole=None, strips=None, disks=None, labels: bool = False):
    """Final-board picture: owner-colored points, the winning hole, optional
    strip regions and Breaker disks."""
    cv = SvgCanvas()
    cv.fit(board.points)
    if strips:
        for strip in strips:
            pts = list(strip.points)
            v = strip.direction
            depth = cv._bounds[2]
            far = [p + v.vec().scale(int(depth * 4)) for p in (pts[0], pts[-1])]
            cv.polygon(pts + [far[1], far[0]], "#86efac", opacity=0.35)
    if disks:
        for entry in disks:
            rr = math.sqrt(max(_f(entry.radius_sq), 0.0))
            cv.ring(entry.center, rr, "#f59e0b", 0.8)
            rc = _f(entry.circle_radius)
            cv.ring(entry.center, rc, "#fbbf24", 0.6)
    if hole:
        cv.polygon(list(hole), "#fde047", opacity=0.6, stroke="#ca8a04")
    for i, (p, o) in enumerate(zip(board.points, board.owners)):
        cv.circle(p, 3.0, _COLORS[o])
        if labels:
            cv.text(p, str(i))
    cv.write(path)


def render_grid(g, path: str):
    """Bent grid image with sibling families color-coded."""
    cv = SvgCanvas()
    pts = g.bent_points()
    cv.fit(pts)
    for j in range(3):
        color = _FAMILY_COLORS[j]
        for cells in g.sibling_holes[j]:
            cv.polygon([g.bent[z] for z in cells], color, opacity=0.18)
    for z, p in g.bent.items():
        cv.circle(p, 2.4, "#111827")
    cv.write(path)


def render_trace(trace, path: str):
    """Render the final board of a trace (owner colors, certificate hole)."""
    from .engine import replay
    from .geom import Point

    state = replay(trace)
    hole = None
    if trace.certificate:
        hole = [Point(x, y) for x, y in trace.certificate]
    render_board(state.board, path, hole=hole)
