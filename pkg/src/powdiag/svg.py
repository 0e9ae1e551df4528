"""Minimal SVG output for planar diagrams, triangulations and medial axes."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from ._exact import dot

PALETTE = ["#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
           "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f"]


class Canvas:
    """World window ``(x0, y0, x1, y1)`` mapped to a pixel box, y pointing up."""

    def __init__(self, window, width: int = 600):
        self.x0, self.y0, self.x1, self.y1 = map(float, window)
        self.width = width
        self.height = int(round(width * (self.y1 - self.y0) / (self.x1 - self.x0)))
        self.items: list[str] = []

    def px(self, p) -> tuple[float, float]:
        x, y = float(p[0]), float(p[1])
        sx = (x - self.x0) / (self.x1 - self.x0) * self.width
        sy = (self.y1 - y) / (self.y1 - self.y0) * self.height
        return round(sx, 3), round(sy, 3)

    def scale(self, r: float) -> float:
        return r / (self.x1 - self.x0) * self.width

    def polygon(self, pts, fill="none", stroke="#333", width=1.0, opacity=1.0):
        coords = " ".join(f"{x},{y}" for x, y in map(self.px, pts))
        self.items.append(f'<polygon points="{coords}" fill="{fill}" fill-opacity="{opacity}" '
                          f'stroke="{stroke}" stroke-width="{width}"/>')

    def polyline(self, pts, stroke="#333", width=1.0):
        coords = " ".join(f"{x},{y}" for x, y in map(self.px, pts))
        self.items.append(f'<polyline points="{coords}" fill="none" stroke="{stroke}" '
                          f'stroke-width="{width}"/>')

    def line(self, p, q, stroke="#333", width=1.0, arrow=False):
        (x1, y1), (x2, y2) = self.px(p), self.px(q)
        marker = ' marker-end="url(#arrow)"' if arrow else ""
        self.items.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
                          f'stroke="{stroke}" stroke-width="{width}"{marker}/>')

    def circle(self, p, r_px, fill="#000", stroke="none"):
        x, y = self.px(p)
        self.items.append(f'<circle cx="{x}" cy="{y}" r="{round(r_px, 3)}" '
                          f'fill="{fill}" stroke="{stroke}"/>')

    def rect(self, p, w, h, fill):
        x, y = self.px(p)
        self.items.append(f'<rect x="{x}" y="{y}" width="{round(w, 3)}" height="{round(h, 3)}" '
                          f'fill="{fill}"/>')

    def text(self, p, s, size=11):
        x, y = self.px(p)
        self.items.append(f'<text x="{x}" y="{y}" font-size="{size}" '
                          f'font-family="sans-serif">{s}</text>')

    def render(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" '
                f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">\n'
                '<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" '
                'markerWidth="6" markerHeight="6" orient="auto">'
                '<path d="M0,0 L10,5 L0,10 z" fill="#c00"/></marker></defs>\n'
                f'<rect width="{self.width}" height="{self.height}" fill="white"/>\n')
        return head + "\n".join(self.items) + "\n</svg>\n"


def clip_polygon(poly, normal, offset):
    """Exact clip of a convex polygon to ``<normal, x> <= offset``."""
    out = []
    n = len(poly)
    for k in range(n):
        p, q = poly[k], poly[(k + 1) % n]
        vp, vq = dot(normal, p) - offset, dot(normal, q) - offset
        if vp <= 0:
            out.append(p)
        if (vp < 0 < vq) or (vq < 0 < vp):
            t = vp / (vp - vq)
            out.append(tuple(a + t * (b - a) for a, b in zip(p, q)))
    return out


def cell_polygon(cell, window) -> list:
    """Top cell of a planar power diagram clipped exactly to the window."""
    x0, y0, x1, y1 = (Fraction(v) for v in window)
    poly = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
    for hs in cell.halfspaces:
        normal = getattr(hs, "normal", None)
        if normal is None:
            if hs.evaluate(None) > 0:
                return []
            continue
        poly = clip_polygon(poly, normal, hs.offset)
        if not poly:
            break
    return poly


def power_diagram_svg(diagram, window, weights=None, names=None) -> str:
    """Cells, sites as dots and ``sqrt(max(w, 0))`` circles."""
    cv = Canvas(window)
    for k, lab in enumerate(diagram.top_cells()):
        poly = cell_polygon(diagram.cells[lab], window)
        if len(poly) >= 3:
            cv.polygon(poly, fill=PALETTE[k % len(PALETTE)], opacity=0.8)
    for i, p in enumerate(diagram.functions.gradients, start=1):
        cv.circle(p, 3)
        if weights is not None and weights[i - 1] > 0:
            cv.circle(p, cv.scale(math.sqrt(weights[i - 1])), fill="none", stroke="#555")
        label = names(i) if names else str(i)
        cv.text((float(p[0]), float(p[1])), f"&#160;{label}")
    return cv.render()


def dvf_svg(points, complex_, arrows, critical, window=None) -> str:
    """Triangulation with arrows between barycenters, critical cells marked."""
    P = np.array([[float(v) for v in p] for p in points])
    if window is None:
        lo, hi = P.min(axis=0), P.max(axis=0)
        pad = 0.15 * max(hi - lo) + 0.5
        window = (lo[0] - pad, lo[1] - pad, hi[0] + pad, hi[1] + pad)
    cv = Canvas(window)

    def bary(lab):
        return P[[i - 1 for i in sorted(lab)]].mean(axis=0)

    def hull_order(lab):
        pts = P[[i - 1 for i in sorted(lab)]]
        c = pts.mean(axis=0)
        return pts[np.argsort(np.arctan2(pts[:, 1] - c[1], pts[:, 0] - c[0]))]

    for lab in complex_.ordered:
        d = complex_.cells[lab]
        if d == 2:
            cv.polygon(hull_order(lab), fill="#fdd" if lab in critical else "#eef",
                       stroke="none")
    for lab in complex_.ordered:
        if complex_.cells[lab] == 1:
            a, b = hull_order(lab)
            cv.line(a, b, stroke="#c00" if lab in critical else "#333",
                    width=2.5 if lab in critical else 1.0)
    for lab in complex_.ordered:
        if complex_.cells[lab] == 0:
            crit = lab in critical
            cv.circle(bary(lab), 5 if crit else 3, fill="#c00" if crit else "#000")
    for lo, hi in arrows:
        cv.line(bary(lo), bary(hi), stroke="#c00", width=1.5, arrow=True)
    return cv.render()


def medial_svg(curve, field, shade: bool = True) -> str:
    """Curve, corner nodes and optional envelope shading."""
    xs, ys = field.xs, field.ys
    cv = Canvas((xs[0], ys[0], xs[-1], ys[-1]))
    if shade:
        vals = field.values
        lo, hi = float(np.min(vals)), float(np.max(vals))
        stride = max(1, len(xs) // 100)
        w = cv.scale((xs[1] - xs[0]) * stride)
        for r in range(0, len(ys), stride):
            for c in range(0, len(xs), stride):
                t = (vals[r, c] - lo) / (hi - lo) if hi > lo else 0.0
                g = int(255 - 120 * t)
                cv.rect((xs[c] - (xs[1] - xs[0]) * stride / 2,
                         ys[r] + (ys[1] - ys[0]) * stride / 2), w, w * 1.0,
                        fill=f"rgb({g},{g},255)")
    pts = curve.sample_points()
    cv.polyline(np.vstack([pts, pts[:1]]), stroke="#000", width=1.5)
    for p in field.corner_points():
        cv.circle(p, 1.2, fill="#c00")
    return cv.render()
