"""Separator centers, activity, and the Morse poset of ``g = min g_i``.

For a cell ``alpha`` of the coherent triangulation, its center ``c(alpha)``
is the point of ``Aff(alpha)`` where all ``g_i``, ``i in alpha``, agree.
``alpha`` is *active* when the center lies in the relative interior of
``CH(alpha)`` and no other site is at least as close there. Failing the
first test is the "down" reason, failing only the second the "up" reason;
the sites that win at the center are the *blockers* of ``alpha``.

Active cells correspond one-to-one with critical points of ``g`` and the
index of the critical point is the cell's dimension.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._exact import Vector, affine_basis, dot, solve, sqnorm, sub
from .core import AffineFunctionSet, as_affine
from .errors import DegenerateError, DisappearingVertexError
from .hull import CoherentTriangulation, coherent_triangulation, disappearing_vertices
from .polytope import Polytope


class Status(enum.Enum):
    ACTIVE = "active"
    DOWN = "down"
    UP = "up"


@dataclass(frozen=True)
class ActivityRecord:
    label: frozenset[int]
    center: Vector
    status: Status
    blockers: frozenset[int] = frozenset()
    # center sits on the relative boundary of CH(label)
    boundary_contact: bool = False


def g_value(a: AffineFunctionSet, i: int, x) -> Fraction:
    """``g_i(x) = |x|^2 / 2 - f_i(x)``, which equals the weighted distance."""
    return sqnorm(x) / 2 - a.value(i, x)


def center(s, alpha) -> Vector:
    a = as_affine(s)
    alpha = sorted(set(alpha))
    i0 = alpha[0]
    p0 = a.gradients[i0 - 1]
    if len(alpha) == 1:
        return p0
    pts = [a.gradients[i - 1] for i in alpha]
    dirs = [sub(pts[k], p0) for k in affine_basis(pts)[1:]]
    rows, rhs = [], []
    for i in alpha[1:]:
        e = sub(a.gradients[i - 1], p0)
        rows.append([dot(d, e) for d in dirs])
        rhs.append(a.offsets[i0 - 1] - a.offsets[i - 1] - dot(p0, e))
    t = solve(rows, rhs)
    if t is None:
        raise AssertionError(f"inconsistent center system for {alpha}")
    x = list(p0)
    for tk, d in zip(t, dirs):
        x = [xv + tk * dv for xv, dv in zip(x, d)]
    return tuple(x)


def classify(s, alpha) -> ActivityRecord:
    a = as_affine(s)
    alpha = frozenset(alpha)
    c = center(a, alpha)
    poly = Polytope({i: a.gradients[i - 1] for i in alpha})
    if not poly.contains(c, strict=True):
        touching = poly.contains(c)
        if touching:
            warnings.warn(f"center of {sorted(alpha)} lies on the relative boundary of its hull",
                          stacklevel=2)
        return ActivityRecord(alpha, c, Status.DOWN, boundary_contact=touching)
    g_alpha = g_value(a, min(alpha), c)
    blockers = frozenset(j for j in a.indices if j not in alpha and g_value(a, j, c) <= g_alpha)
    if blockers:
        return ActivityRecord(alpha, c, Status.UP, blockers)
    return ActivityRecord(alpha, c, Status.ACTIVE)


@dataclass
class MorsePoset:
    triangulation: CoherentTriangulation
    records: dict[frozenset[int], ActivityRecord]

    @property
    def active(self) -> dict[frozenset[int], int]:
        """Active labels with their index (the cell dimension)."""
        return {lab: self.triangulation.cells[lab] for lab in self.triangulation.ordered
                if self.records[lab].status is Status.ACTIVE}

    @property
    def euler(self) -> int:
        return sum((-1) ** d for d in self.active.values())

    def to_json(self) -> dict:
        from .io import fraction_to_json

        return {
            "active": [{"label": sorted(lab), "dim": d,
                        "center": [fraction_to_json(v) for v in self.records[lab].center]}
                       for lab, d in self.active.items()],
            "euler": self.euler,
        }


def require_no_disappearing(s, tri: CoherentTriangulation) -> None:
    gone = disappearing_vertices(s, tri)
    if gone:
        raise DisappearingVertexError(gone)


def morse_poset(s, tri: CoherentTriangulation | None = None) -> MorsePoset:
    a = as_affine(s)
    tri = coherent_triangulation(a) if tri is None else tri
    require_no_disappearing(a, tri)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        records = {lab: classify(a, lab) for lab in tri.ordered}
    if any(r.boundary_contact for r in records.values()):
        warnings.warn("degenerate input: some centers touch the boundary of their cell",
                      stacklevel=2)
    return MorsePoset(tri, records)


@dataclass(frozen=True)
class CriticalPoint:
    point: tuple[float, float]
    index: int
    candidate: tuple[float, float]


def _float_center(P: np.ndarray, c: np.ndarray, alpha) -> np.ndarray:
    idx = sorted(alpha)
    p0 = P[idx[0] - 1]
    if len(idx) == 1:
        return p0.copy()
    E = np.array([P[i - 1] - p0 for i in idx[1:]])
    rhs = np.array([c[idx[0] - 1] - c[i - 1] for i in idx[1:]]) - E @ p0
    # x = p0 + E^T y lies in Aff(alpha); E x' = rhs
    y, *_ = np.linalg.lstsq(E @ E.T, rhs, rcond=None)
    return p0 + E.T @ y


def _ring_index(P, c, p, radius):
    """Local index from ``{g < g(p)}`` on a small circle; None if regular.

    On the circle ``p + r u`` each ``g_i`` is below ``g(p)`` on one arc
    ``<p - P_i, u> < beta_i``, so the sublevel set is a union of arcs whose
    endpoints are computed in closed form.
    """
    gp_all = 0.5 * (p @ p) - (P @ p + c)
    gp = gp_all.min()
    v = p - P
    beta = (gp - gp_all) / radius - radius / 2
    norm = np.linalg.norm(v, axis=1)
    arcs = []
    for vi, ni, bi in zip(v, norm, beta):
        if bi > ni:
            return 2
        if bi <= -ni:
            continue
        phi = np.arctan2(vi[1], vi[0])
        half = np.arccos(np.clip(bi / ni, -1.0, 1.0))
        # <v, u> < bi  <=>  angle from phi in (half, 2 pi - half)
        arcs.append(((phi + half) % (2 * np.pi), 2 * (np.pi - half)))
    if not arcs:
        return 0
    # merge arcs on the circle: sweep from the start of each arc
    events = sorted(arcs)
    covered = _merge_circle(events)
    if covered is None:
        return 2
    return 1 if covered >= 2 else None


def _merge_circle(arcs):
    """Number of components of a union of arcs ``(start, length)``; None if full."""
    two_pi = 2 * np.pi
    if any(length >= two_pi for _, length in arcs):
        return None
    # unroll onto [0, 4 pi) and merge intervals
    ivs = sorted((s0, s0 + ln) for s0, ln in arcs)
    merged = []
    for lo, hi in ivs:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    # wrap-around: the last interval may reach past 2 pi into the first ones
    while len(merged) > 1 and merged[-1][1] - two_pi >= merged[0][0]:
        first = merged.pop(0)
        merged[-1][1] = max(merged[-1][1], first[1] + two_pi)
    if len(merged) == 1 and merged[0][1] - merged[0][0] >= two_pi:
        return None
    return len(merged)


def critical_points_bruteforce(s, resolution: int = 400, window=None,
                               probe: float = 1e-3) -> list[CriticalPoint]:
    """Numerical oracle for the critical points of ``g = min g_i`` (n = 2).

    Candidates are the float centers of all triangulation cells. Each one is
    judged by the topology of ``{g < g(p)}`` on a circle of radius ``probe``
    grid steps: empty means a minimum, the full circle a maximum, two or more
    arcs a saddle. Minima and maxima are then snapped to the extreme node of
    the grid next to the candidate. Nothing here uses the exact activity
    classification.
    """
    a = as_affine(s)
    if a.dim != 2:
        raise ValueError("the critical point oracle only handles the plane")
    P = np.array([[float(v) for v in p] for p in a.gradients])
    c = np.array([float(v) for v in a.offsets])
    if window is None:
        lo, hi = P.min(axis=0), P.max(axis=0)
        pad = 0.1 * max(hi - lo) + 1.0
        window = (lo[0] - pad, lo[1] - pad, hi[0] + pad, hi[1] + pad)
    x0, y0, x1, y1 = map(float, window)
    step = max(x1 - x0, y1 - y0) / resolution

    def g(X):
        X = np.atleast_2d(X)
        return (0.5 * np.sum(X * X, axis=1)[:, None] - (X @ P.T + c)).min(axis=1)

    tri = coherent_triangulation(a)
    cands: list[np.ndarray] = []
    for lab in tri.ordered:
        p = _float_center(P, c, lab)
        if not any(np.linalg.norm(p - q) < 1e-9 for q in cands):
            cands.append(p)

    out = []
    for p in cands:
        if not (x0 <= p[0] <= x1 and y0 <= p[1] <= y1):
            continue
        index = _ring_index(P, c, p, probe * step)
        if index is None:
            continue
        gx = x0 + step * np.round((p[0] - x0) / step)
        gy = y0 + step * np.round((p[1] - y0) / step)
        offs = np.arange(-1, 2) * step
        patch = np.array([[gx + dx, gy + dy] for dx in offs for dy in offs])
        vals = g(patch)
        if index == 0:
            loc = patch[np.argmin(vals)]
        elif index == 2:
            loc = patch[np.argmax(vals)]
        else:
            loc = patch[np.argmin(np.linalg.norm(patch - p, axis=1))]
        out.append(CriticalPoint((float(loc[0]), float(loc[1])), index, (float(p[0]), float(p[1]))))
    for k, cp in enumerate(out):
        for other in out[k + 1:]:
            if cp.index == other.index and \
                    np.hypot(cp.point[0] - other.point[0], cp.point[1] - other.point[1]) < 0.5 * step:
                raise DegenerateError(
                    f"grid resolution {resolution} too coarse: critical points near "
                    f"{cp.candidate} and {other.candidate} snap to the same node")
    return out
