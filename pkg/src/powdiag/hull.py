"""Lifted lower hulls and the coherent (regular) triangulation.

Site ``i`` lifts to ``Q_i = (P_i, -c_i)`` in one dimension up. The lower
faces of ``conv(Q)`` (seen from below along the last axis) form the graph of
the Legendre transform of ``f = max f_i`` over ``CH(P)``; projecting them
gives the coherent triangulation dual to the power diagram.

The hull is built by pivoting around ridges, starting from one facet found
by search. All predicates are exact. Point sets whose projections span less
than the ambient space are handled in affine coordinates of their hull.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
import math

from ._exact import AffineFrame, Vector, det, dot, nullspace, rank, solve, sub, vec
from .core import AffineFunctionSet, SiteSet, as_affine
from .errors import DegenerateError, DimensionError
from .polytope import full_dim_facets, vertex_labelled_faces

INF = math.inf


@dataclass(frozen=True)
class LiftedPointSet:
    dim: int  # ambient dimension n + 1
    points: tuple[Vector, ...]

    @property
    def projections(self) -> tuple[Vector, ...]:
        return tuple(q[:-1] for q in self.points)

    @property
    def heights(self) -> tuple[Fraction, ...]:
        return tuple(q[-1] for q in self.points)


@dataclass(frozen=True)
class LowerFacet:
    """A lower facet: ``label`` holds every index on its supporting plane.

    The plane is ``height(x) = <gradient, x> + offset`` for ``x`` in the
    affine hull of the projections. ``gradient`` is the minimum norm choice,
    so for full dimensional inputs it is the dual power-diagram vertex.
    """

    label: frozenset[int]
    gradient: Vector
    offset: Fraction

    def height(self, x) -> Fraction:
        return dot(self.gradient, x) + self.offset


def lift(s) -> LiftedPointSet:
    a = as_affine(s)
    return LiftedPointSet(a.dim + 1, tuple(p + (-c,) for p, c in zip(a.gradients, a.offsets)))


class _LocalHull:
    """Lower hull worked out in affine coordinates of the projections."""

    def __init__(self, pts: LiftedPointSet):
        proj = pts.projections
        self.frame = AffineFrame(list(proj))
        self.d = self.frame.dim
        self.local = [self.frame.to_local(p) for p in proj]
        self.heights = list(pts.heights)
        if len(set(pts.points)) == 1 and len(pts.points) > 1:
            raise DegenerateError("all lifted points coincide")
        # identical projections: only the lowest can reach the lower hull
        best: dict[Vector, int] = {}
        for i, t in enumerate(self.local):
            j = best.get(t)
            if j is None or self.heights[i] < self.heights[j]:
                best[t] = i
        self.active = sorted(best.values())
        self.facets: dict[frozenset, tuple[Vector, Fraction]] = {}
        self.boundary: list[tuple[frozenset, Vector, Fraction]] = []
        self._build()

    def _touching(self, a, b) -> frozenset[int]:
        return frozenset(i for i in self.active if dot(a, self.local[i]) + b == self.heights[i])

    def _supports(self, a, b) -> bool:
        return all(dot(a, self.local[i]) + b <= self.heights[i] for i in self.active)

    def _plane_through(self, idx):
        rows = [list(self.local[i]) + [Fraction(1)] for i in idx]
        sol = solve(rows, [self.heights[i] for i in idx])
        return sol[:-1], sol[-1]

    def _start(self):
        if self.d == 0:
            i = self.active[0]
            return (), self.heights[i]
        v0 = min(self.active, key=lambda i: (self.local[i], self.heights[i]))
        others = sorted((i for i in self.active if i != v0),
                        key=lambda i: (sum((x - y) ** 2 for x, y in zip(self.local[i], self.local[v0])), i))
        for combo in combinations(others, self.d):
            idx = (v0,) + combo
            diffs = [sub(self.local[i], self.local[v0]) for i in combo]
            if rank(diffs) < self.d:
                continue
            a, b = self._plane_through(idx)
            if self._supports(a, b):
                return a, b
        raise AssertionError("no lower facet found")  # pragma: no cover

    def _build(self):
        a, b = self._start()
        first = self._touching(a, b)
        self.facets[first] = (a, b)
        queue = [first]
        seen_boundary = set()
        while queue:
            lab = queue.pop()
            a, b = self.facets[lab]
            ridges = full_dim_facets({i: self.local[i] for i in lab}, self.d)
            for r in ridges:
                # r.value >= 0 inside the facet; ell > 0 beyond the ridge
                u = tuple(-x for x in r.normal)
                off = -r.offset
                ahead = [i for i in self.active if dot(u, self.local[i]) - off > 0]
                if not ahead:
                    if r.labels not in seen_boundary:
                        seen_boundary.add(r.labels)
                        self.boundary.append((r.labels, u, off))
                    continue
                t = min((self.heights[i] - dot(a, self.local[i]) - b) / (dot(u, self.local[i]) - off)
                        for i in ahead)
                a2 = tuple(x + t * y for x, y in zip(a, u))
                b2 = b - t * off
                lab2 = self._touching(a2, b2)
                if lab2 not in self.facets:
                    self.facets[lab2] = (a2, b2)
                    queue.append(lab2)

    def global_plane(self, a, b) -> tuple[Vector, Fraction]:
        if self.d == 0:
            return tuple(Fraction(0) for _ in self.frame.origin), b
        gram = self.frame._gram
        y = solve(gram, list(a))
        g = [Fraction(0)] * self.frame.ambient
        for yk, u in zip(y, self.frame.dirs):
            for j in range(self.frame.ambient):
                g[j] += yk * u[j]
        g = tuple(g)
        return g, b - dot(g, self.frame.origin)


def lower_hull(pts: LiftedPointSet) -> list[LowerFacet]:
    """Lower facets of ``conv(pts)`` with respect to ``(0, ..., 0, 1)``.

    Labels are 1-based and include every point on the supporting plane,
    extreme or not.
    """
    h = _LocalHull(pts)
    out = []
    for lab, (a, b) in h.facets.items():
        g, off = h.global_plane(a, b)
        out.append(LowerFacet(frozenset(i + 1 for i in lab), g, off))
    return sorted(out, key=lambda f: sorted(f.label))


@dataclass
class PolyhedralComplex:
    """Cells keyed by their vertex label sets, with dimensions.

    Face incidence is label inclusion; :attr:`covers` holds the covering
    pairs (child, parent) with a dimension gap of one.
    """

    ambient_dim: int
    cells: dict[frozenset[int], int]

    @cached_property
    def ordered(self) -> list[frozenset[int]]:
        return sorted(self.cells, key=lambda c: tuple(sorted(c)))

    @cached_property
    def covers(self) -> list[tuple[frozenset[int], frozenset[int]]]:
        by_dim: dict[int, list] = {}
        for c, d in self.cells.items():
            by_dim.setdefault(d, []).append(c)
        pairs = []
        for c in self.ordered:
            for p in by_dim.get(self.cells[c] + 1, ()):
                if c < p:
                    pairs.append((c, p))
        return sorted(pairs, key=lambda cp: (tuple(sorted(cp[0])), tuple(sorted(cp[1]))))

    @cached_property
    def _cofacets(self):
        up: dict[frozenset, list] = {c: [] for c in self.cells}
        down: dict[frozenset, list] = {c: [] for c in self.cells}
        for c, p in self.covers:
            up[c].append(p)
            down[p].append(c)
        return up, down

    def cofacets(self, label) -> list[frozenset[int]]:
        return self._cofacets[0][frozenset(label)]

    def facets_of(self, label) -> list[frozenset[int]]:
        return self._cofacets[1][frozenset(label)]

    def dim(self, label) -> int:
        return self.cells[frozenset(label)]

    @property
    def top_dim(self) -> int:
        return max(self.cells.values())

    def vertices(self) -> frozenset[int]:
        return frozenset(i for c, d in self.cells.items() if d == 0 for i in c)

    def faces_of(self, label) -> list[frozenset[int]]:
        label = frozenset(label)
        return [c for c in self.ordered if c <= label]

    def between(self, lo, hi) -> list[frozenset[int]]:
        lo, hi = frozenset(lo), frozenset(hi)
        return [c for c in self.ordered if lo < c < hi]

    def euler_characteristic(self, labels=None) -> int:
        labels = self.cells if labels is None else labels
        return sum((-1) ** self.cells[frozenset(c)] for c in labels)

    def codim2_intervals(self):
        """Yield ``(alpha, gamma, count)`` for every pair with dimension gap two."""
        for g, dg in self.cells.items():
            for a in self.faces_of(g):
                if self.cells[a] == dg - 2:
                    yield a, g, len(self.between(a, g))

    def to_json(self) -> dict:
        idx = {c: k for k, c in enumerate(self.ordered)}
        return {
            "cells": [{"label": sorted(c), "dim": self.cells[c]} for c in self.ordered],
            "faces": [[idx[c], idx[p]] for c, p in self.covers],
        }


@dataclass
class CoherentTriangulation(PolyhedralComplex):
    """Projection of the lower hull, plus the data needed for duality."""

    functions: AffineFunctionSet = None
    lower_facets: list[LowerFacet] = field(default_factory=list)
    frame: AffineFrame = None
    # facets of CH(P) in local coordinates: ell(t) = <u, t> - off <= 0 on CH
    boundary: list[tuple[frozenset, Vector, Fraction]] = field(default_factory=list)

    def top_cells(self) -> list[frozenset[int]]:
        d = self.top_dim
        return [c for c in self.ordered if self.cells[c] == d]

    def facet_for(self, label) -> LowerFacet:
        """The lower facet whose extreme vertices are ``label`` (a top cell)."""
        label = frozenset(label)
        for f in self.lower_facets:
            if label <= f.label and self.cells.get(label) == self.top_dim and \
                    frozenset(f.label & self.vertices()) == label:
                return f
        raise KeyError(sorted(label))

    def in_hull(self, x, strict: bool = False) -> bool:
        t = self.frame.to_local(x)
        if t is None:
            return False
        if strict:
            return all(dot(u, t) - off < 0 for _, u, off in self.boundary)
        return all(dot(u, t) - off <= 0 for _, u, off in self.boundary)

    def boundary_cells(self) -> frozenset:
        """Cells lying in the relative boundary of ``CH(P)``."""
        out = set()
        for lab, _, _ in self.boundary:
            vlab = frozenset(lab) & self.vertices()
            out.update(c for c in self.cells if c <= vlab)
        return frozenset(out)


def coherent_triangulation(s) -> CoherentTriangulation:
    """Project the lower hull of the lifted sites to a polyhedral complex.

    Non-simplicial lower facets stay single cells. Cells are labelled by
    their extreme vertices, so sites whose lift is not a lower-hull vertex
    appear in no label (see :func:`disappearing_vertices`).
    """
    a = as_affine(s)
    pts = lift(a)
    h = _LocalHull(pts)
    proj = pts.projections
    cells: dict[frozenset, int] = {}
    for lab in h.facets:
        faces = vertex_labelled_faces({i + 1: proj[i] for i in lab})
        for f, d in faces.items():
            cells[f] = d
    facets = []
    for lab, (fa, fb) in h.facets.items():
        g, off = h.global_plane(fa, fb)
        facets.append(LowerFacet(frozenset(i + 1 for i in lab), g, off))
    facets.sort(key=lambda f: sorted(f.label))
    boundary = [(frozenset(i + 1 for i in lab), u, off) for lab, u, off in h.boundary]
    return CoherentTriangulation(a.dim, cells, functions=a, lower_facets=facets,
                                 frame=h.frame, boundary=boundary)


def disappearing_vertices(s, tri: CoherentTriangulation | None = None) -> frozenset[int]:
    """Sites whose lifted point is not a vertex of the lower hull.

    These are exactly the sites whose power cell has empty interior.
    """
    tri = coherent_triangulation(s) if tri is None else tri
    return frozenset(tri.functions.indices) - tri.vertices()


def legendre_eval(s, xi, tri: CoherentTriangulation | None = None):
    """``f^(xi)``: lower-hull height inside ``CH(P)``, ``math.inf`` outside."""
    tri = coherent_triangulation(s) if tri is None else tri
    xi = vec(xi)
    if len(xi) != tri.ambient_dim:
        raise DimensionError(f"expected {tri.ambient_dim} coordinates")
    if not tri.in_hull(xi):
        return INF
    return max(f.height(xi) for f in tri.lower_facets)


def is_general_position(s) -> bool:
    """No ``n+2`` lifted points on a common hyperplane and no ``n+1``
    projections affinely dependent."""
    pts = lift(s)
    n = pts.dim - 1
    for combo in combinations(pts.points, n + 2):
        if det([list(q) + [1] for q in combo]) == 0:
            return False
    for combo in combinations(pts.projections, n + 1):
        if det([list(p) + [1] for p in combo]) == 0:
            return False
    return True
