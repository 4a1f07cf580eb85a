"""Contour rendering of a grid field with stationary-point overlays.

Isolines come from a small marching-squares pass (linear interpolation
along cell edges, saddle cells disambiguated by the cell-center average).
Output is standalone SVG with one group per layer: contours, detected
points/curves, and optionally the analytic ground truth in a dashed style.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import quoteattr

import numpy as np

from .grid import GridField


def _interp(p0, p1, v0, v1, level):
    t = 0.5 if v1 == v0 else (level - v0) / (v1 - v0)
    return (p0[0] + t * (p1[0] - p0[0]), p0[1] + t * (p1[1] - p0[1]))


def marching_squares(g: GridField, level: float) -> list[tuple]:
    """Line segments ((x0,y0),(x1,y1)) of the isoline at ``level``."""
    v = g.grid2d()
    x0, y0 = g.origin
    segs = []
    for i in range(g.ny - 1):
        for j in range(g.nx - 1):
            # corners counterclockwise from bottom-left
            corners = [(x0 + j * g.dx, y0 + i * g.dy),
                       (x0 + (j + 1) * g.dx, y0 + i * g.dy),
                       (x0 + (j + 1) * g.dx, y0 + (i + 1) * g.dy),
                       (x0 + j * g.dx, y0 + (i + 1) * g.dy)]
            vals = [v[i, j], v[i, j + 1], v[i + 1, j + 1], v[i + 1, j]]
            case = sum(1 << k for k in range(4) if vals[k] > level)
            if case in (0, 15):
                continue
            crossings = {}
            for k in range(4):
                k2 = (k + 1) % 4
                if (vals[k] > level) != (vals[k2] > level):
                    crossings[k] = _interp(corners[k], corners[k2],
                                           vals[k], vals[k2], level)
            edges = sorted(crossings)
            if len(edges) == 2:
                segs.append((crossings[edges[0]], crossings[edges[1]]))
            elif len(edges) == 4:
                # saddle cell: split by the center average
                center_above = (sum(vals) / 4.0) > level
                corner0_above = vals[0] > level
                if center_above == corner0_above:
                    segs.append((crossings[0], crossings[3]))
                    segs.append((crossings[1], crossings[2]))
                else:
                    segs.append((crossings[0], crossings[1]))
                    segs.append((crossings[2], crossings[3]))
    return segs


def chain_polyline(points: np.ndarray) -> list[int]:
    """Order curve members into a polyline by greedy nearest-neighbor
    chaining, starting from the point most distant from the centroid
    (an endpoint for open curves)."""
    pts = np.asarray(points, float)
    n = len(pts)
    if n <= 2:
        return list(range(n))
    start = int(np.argmax(np.linalg.norm(pts - pts.mean(axis=0), axis=1)))
    order = [start]
    used = {start}
    while len(order) < n:
        last = pts[order[-1]]
        dist = np.linalg.norm(pts - last, axis=1)
        dist[list(used)] = np.inf
        nxt = int(np.argmin(dist))
        order.append(nxt)
        used.add(nxt)
    return order


class _Svg:
    def __init__(self, width, height):
        self.width = width
        self.height = height
        self.parts = []

    def open_group(self, gid):
        self.parts.append(f'<g id={quoteattr(gid)}>')

    def close_group(self):
        self.parts.append("</g>")

    def polyline(self, pts, stroke, width, dashed=False):
        coords = " ".join(f"{x:.3f},{y:.3f}" for x, y in pts)
        dash = ' stroke-dasharray="6,4"' if dashed else ""
        self.parts.append(f'<polyline points="{coords}" fill="none" '
                          f'stroke="{stroke}" stroke-width="{width}"{dash}/>')

    def circle(self, x, y, r, stroke, fill):
        self.parts.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{r}" '
                          f'stroke="{stroke}" fill="{fill}"/>')

    def cross(self, x, y, r, stroke):
        self.parts.append(f'<path d="M {x - r:.3f} {y - r:.3f} L {x + r:.3f} {y + r:.3f} '
                          f'M {x - r:.3f} {y + r:.3f} L {x + r:.3f} {y - r:.3f}" '
                          f'stroke="{stroke}" stroke-width="1.2"/>')

    def render(self):
        body = "\n".join(self.parts)
        return (f'<svg xmlns="http://www.w3.org/2000/svg" '
                f'width="{self.width}" height="{self.height}" '
                f'viewBox="0 0 {self.width} {self.height}">\n{body}\n</svg>\n')


def render_svg(g: GridField, report: dict | None = None,
               ground_truth: dict | None = None,
               levels: int = 10, size: int = 640) -> str:
    """SVG contour map with optional detected/analytic overlays.

    ``report`` is the pipeline's JSON report (stationary_points, bindings);
    ``ground_truth`` the JSON export of the oracle module.
    """
    xmin, ymin = g.origin
    xmax = xmin + (g.nx - 1) * g.dx
    ymax = ymin + (g.ny - 1) * g.dy
    margin = 20.0
    scale = (size - 2 * margin) / max(xmax - xmin, ymax - ymin)
    width = (xmax - xmin) * scale + 2 * margin
    height = (ymax - ymin) * scale + 2 * margin

    def to_px(x, y):
        return (margin + (x - xmin) * scale, height - margin - (y - ymin) * scale)

    svg = _Svg(round(width), round(height))

    svg.open_group("contours")
    vmin, vmax = float(g.values.min()), float(g.values.max())
    if vmax > vmin:
        for lv in np.linspace(vmin, vmax, levels + 2)[1:-1]:
            for p0, p1 in marching_squares(g, lv):
                svg.polyline([to_px(*p0), to_px(*p1)], stroke="#9ab", width=0.8)
    svg.close_group()

    svg.open_group("detected")
    if report:
        pts = report.get("stationary_points", [])
        for b in report.get("bindings", []):
            members = b["members"]
            if b["kind"] == "curve":
                pos = np.array([[pts[i]["x"], pts[i]["y"]] for i in members])
                order = chain_polyline(pos)
                svg.polyline([to_px(*pos[k]) for k in order],
                             stroke="#ffffff", width=2.0)
            else:
                p = pts[members[0]]
                x, y = to_px(p["x"], p["y"])
                svg.circle(x, y, 4.0, stroke="#333", fill="#ffffff")
    svg.close_group()

    svg.open_group("ground-truth")
    if ground_truth:
        for curve in ground_truth.get("curves", []):
            svg.polyline([to_px(x, y) for x, y in curve],
                         stroke="#d22", width=1.2, dashed=True)
        for x, y in ground_truth.get("isolated", []):
            px, py = to_px(x, y)
            svg.cross(px, py, 4.0, stroke="#d22")
    svg.close_group()

    return svg.render()
