"""Exact convex hulls of small labelled point sets.

Facets are found by brute force over affinely independent subsets, which is
fine for the handful of points spanning one cell of a coherent
triangulation. Large inputs never reach this code; the lifted lower hull in
:mod:`powdiag.hull` pivots from facet to facet instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Mapping

from ._exact import AffineFrame, Vector, dot, nullspace, rank, sqnorm, sub


@dataclass(frozen=True)
class Facet:
    """``labels`` lie on ``<normal, t> = offset``; inside is ``>= offset``.

    Coordinates are local to the owning polytope's affine frame.
    """

    labels: frozenset
    normal: Vector
    offset: Fraction

    def value(self, t) -> Fraction:
        return dot(self.normal, t) - self.offset


def full_dim_facets(local: Mapping[object, Vector], d: int) -> list[Facet]:
    """Facets of ``conv(local.values())``, assumed full dimensional in R^d."""
    if d == 0:
        return []
    items = sorted(local.items(), key=lambda kv: kv[1])
    found: dict[frozenset, Facet] = {}
    for combo in combinations(items, d):
        base = combo[0][1]
        diffs = [sub(t, base) for _, t in combo[1:]]
        if rank(diffs) != d - 1:
            continue
        ns = nullspace(diffs, d)
        if len(ns) != 1:
            continue
        u = ns[0]
        off = dot(u, base)
        vals = {lab: dot(u, t) - off for lab, t in items}
        on = frozenset(lab for lab, v in vals.items() if v == 0)
        if on in found:
            continue
        if all(v >= 0 for v in vals.values()):
            found[on] = Facet(on, u, off)
        elif all(v <= 0 for v in vals.values()):
            found[on] = Facet(on, tuple(-x for x in u), -off)
    return list(found.values())


class Polytope:
    """Convex hull of labelled points, in the frame of their affine hull."""

    def __init__(self, points: Mapping[object, Vector]):
        if not points:
            raise ValueError("empty polytope")
        labels = sorted(points)
        self.points = {lab: points[lab] for lab in labels}
        self.frame = AffineFrame([self.points[lab] for lab in labels])
        self.dim = self.frame.dim
        self.local = {lab: self.frame.to_local(p) for lab, p in self.points.items()}
        self.facets = full_dim_facets(self.local, self.dim)

    @property
    def labels(self) -> frozenset:
        return frozenset(self.points)

    def vertices(self) -> frozenset:
        """Labels of the extreme points."""
        return frozenset(next(iter(f)) for f, d in self.face_lattice().items() if d == 0)

    def contains(self, x, strict: bool = False) -> bool:
        """Closed (or, with ``strict``, relative interior) membership."""
        t = self.frame.to_local(x)
        if t is None:
            return False
        if strict:
            return all(f.value(t) > 0 for f in self.facets)
        return all(f.value(t) >= 0 for f in self.facets)

    def face_lattice(self) -> dict[frozenset, int]:
        """All nonempty faces, keyed by the full label set lying on them."""
        return dict(_faces(tuple(sorted(self.points.items()))))

    def nearest_point(self, x) -> tuple[Vector, Fraction]:
        """Exact closest point of the polytope to ``x`` and its squared distance.

        Projects ``x`` onto the affine span of every face and keeps the
        projections that land inside their face.
        """
        best = None
        for labs in self.face_lattice():
            face = Polytope({lab: self.points[lab] for lab in labs})
            y = face.frame.project(x)
            if not face.contains(y):
                continue
            d2 = sqnorm(sub(x, y))
            if best is None or d2 < best[1]:
                best = (y, d2)
        return best


@lru_cache(maxsize=4096)
def _faces(items: tuple) -> tuple:
    pts = dict(items)
    poly = Polytope(pts)
    out = {frozenset(pts): poly.dim}
    for f in poly.facets:
        sub_items = tuple(sorted((lab, pts[lab]) for lab in f.labels))
        out.update(dict(_faces(sub_items)))
    return tuple(out.items())


def vertex_labelled_faces(points: Mapping[object, Vector]) -> dict[frozenset, int]:
    """Face lattice relabelled by extreme vertices only."""
    lattice = _faces(tuple(sorted(points.items())))
    verts = {next(iter(lab)) for lab, d in lattice if d == 0}
    return {frozenset(lab & verts): d for lab, d in lattice}
