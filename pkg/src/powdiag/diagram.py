"""Power diagrams as labelled H-polyhedra, duality, slicing, Voronoi lift."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ._exact import AffineFrame, Vector, dot, nullspace, solve, sqnorm, sub, vec
from .core import AffineFunctionSet, Hyperplane, SiteSet, as_affine, upper_envelope
from .errors import DegenerateError, DimensionError
from .hull import CoherentTriangulation, coherent_triangulation, legendre_eval


@dataclass(frozen=True)
class PowerCell:
    """``Pow(label)`` as equalities ``f_i = f_i0`` and halfspaces ``f_j <= f_i0``."""

    label: frozenset[int]
    dim: int
    equalities: tuple[Hyperplane, ...]
    halfspaces: tuple[Hyperplane, ...]

    def contains(self, x) -> bool:
        return all(h.evaluate(x) == 0 for h in self.equalities) and \
            all(h.evaluate(x) <= 0 for h in self.halfspaces)

    def contains_relint(self, x) -> bool:
        return all(h.evaluate(x) == 0 for h in self.equalities) and \
            all(h.evaluate(x) < 0 for h in self.halfspaces)


def _difference(a: AffineFunctionSet, j: int, i: int) -> Hyperplane:
    """``f_j - f_i <= 0`` written as ``<P_j - P_i, x> <= c_i - c_j``."""
    normal = sub(a.gradients[j - 1], a.gradients[i - 1])
    off = a.offsets[i - 1] - a.offsets[j - 1]
    if not any(normal):
        # same gradient: the constraint is a constant; encode 0 <= off as a
        # trivially true or false halfspace along the first axis
        return _ConstantHalfspace(off)
    return Hyperplane(normal, off)


class _ConstantHalfspace:
    def __init__(self, off):
        self.offset = off

    def evaluate(self, x):
        return -self.offset


class PowerDiagram:
    def __init__(self, functions: AffineFunctionSet, dual: CoherentTriangulation):
        self.functions = functions
        self.dual = dual
        self.dim = functions.dim
        self.cells: dict[frozenset[int], PowerCell] = {}
        for lab in dual.ordered:
            self.cells[lab] = self._cell(lab, dual.cells[lab])

    def _cell(self, lab, ddim) -> PowerCell:
        a = self.functions
        ordered = sorted(lab)
        i0 = ordered[0]
        eqs = tuple(_difference(a, i, i0) for i in ordered[1:])
        hs = tuple(_difference(a, j, i0) for j in a.indices if j not in lab)
        return PowerCell(lab, self.dim - ddim, eqs, hs)

    @property
    def labels(self) -> list[frozenset[int]]:
        return list(self.cells)

    def top_cells(self) -> list[frozenset[int]]:
        return [c for c in self.cells if self.cells[c].dim == self.dim]

    def locate(self, x) -> frozenset[int]:
        """Label of the smallest cell containing ``x`` (its argmax set)."""
        return upper_envelope(self.functions, vec(x))[1]

    def is_bounded(self, label) -> bool:
        return self.dual.ambient_dim == self.dual.frame.dim and \
            frozenset(label) not in self.dual.boundary_cells()

    def vertices(self, label) -> list[Vector]:
        """Power vertices on the cell: duals of the top triangulation cells above it."""
        label = frozenset(label)
        verts = self.dual.vertices()
        out = []
        for f in self.dual.lower_facets:
            if label <= f.label & verts:
                out.append(f.gradient)
        return out

    def relint_point(self, label) -> Vector:
        """An exact point in the relative interior of ``Pow(label)``.

        Averages the lower-hull planes of the top cells containing the dual
        cell and tilts by the hull facets containing it, so the resulting
        supporting plane touches the lift exactly along the dual cell; its
        gradient is the wanted point.
        """
        label = frozenset(label)
        if label not in self.cells:
            raise KeyError(sorted(label))
        tri = self.dual
        verts = tri.vertices()
        planes = [f for f in tri.lower_facets if label <= f.label & verts]
        local_planes = []
        frame = tri.frame
        for f in planes:
            # local gradient a with <a, t> = <g, D t>
            a = tuple(dot(f.gradient, u) for u in frame.dirs)
            local_planes.append(a)
        k = len(local_planes)
        a = tuple(sum(c) / k for c in zip(*local_planes)) if frame.dim else ()
        for blab, u, off in tri.boundary:
            if label <= blab:
                a = tuple(x + y for x, y in zip(a, u))
        if frame.dim == 0:
            return tuple(Fraction(0) for _ in range(self.dim))
        y = solve(frame._gram, list(a))
        x = [Fraction(0)] * self.dim
        for yk, u in zip(y, frame.dirs):
            for j in range(self.dim):
                x[j] += yk * u[j]
        x = tuple(x)
        if self.locate(x) != label:
            raise AssertionError(f"relint point construction failed for {sorted(label)}")
        return x

    def dual_cell(self, label) -> "DualCell":
        label = frozenset(label)
        if label not in self.cells:
            raise KeyError(f"unknown cell label {sorted(label)}")
        return DualCell(label, self.dual.cells[label],
                        tuple(self.functions.gradients[i - 1] for i in sorted(label)))

    def to_json(self) -> dict:
        from .io import fraction_to_json

        out = []
        for lab in self.dual.ordered:
            c = self.cells[lab]
            out.append({
                "label": sorted(lab),
                "dim": c.dim,
                "dual_dim": self.dual.cells[lab],
                "bounded": self.is_bounded(lab),
                "vertices": [[fraction_to_json(v) for v in p] for p in self.vertices(lab)],
            })
        return {"dim": self.dim, "cells": out, "triangulation": self.dual.to_json()}


@dataclass(frozen=True)
class DualCell:
    label: frozenset[int]
    dim: int
    vertices: tuple[Vector, ...]


def build_power_diagram(s) -> PowerDiagram:
    a = as_affine(s)
    return PowerDiagram(a, coherent_triangulation(a))


def gateau_pairing(s, x, xi, tri: CoherentTriangulation | None = None):
    """``F(x, xi) = f(x) + f^(xi) - <x, xi>``; ``math.inf`` when xi is off the hull."""
    a = as_affine(s)
    x, xi = vec(x), vec(xi)
    fhat = legendre_eval(a, xi, tri)
    if fhat == math.inf:
        return math.inf
    return upper_envelope(a, x)[0] + fhat - dot(x, xi)


def dual_cell(d: PowerDiagram, label) -> DualCell:
    return d.dual_cell(label)


@dataclass(frozen=True)
class SlicedFunctions:
    """Restriction of the affine functions to ``x = origin + sum t_k dirs[k]``."""

    functions: AffineFunctionSet
    origin: Vector
    dirs: tuple[Vector, ...]

    def to_ambient(self, t) -> Vector:
        x = list(self.origin)
        for tk, u in zip(t, self.dirs):
            for j in range(len(x)):
                x[j] += tk * u[j]
        return tuple(x)


def slice(s, h: Hyperplane) -> SlicedFunctions:
    """Power diagram induced on the hyperplane ``h``, one dimension down."""
    a = as_affine(s)
    if a.dim == 1:
        raise DegenerateError("cannot slice a 1-dimensional diagram")
    if len(h.normal) != a.dim:
        raise DimensionError("hyperplane dimension mismatch")
    origin = tuple(c * h.offset / sqnorm(h.normal) for c in h.normal)
    dirs = tuple(nullspace([list(h.normal)], a.dim))
    grads = tuple(tuple(dot(u, p) for u in dirs) for p in a.gradients)
    offs = tuple(dot(origin, p) + c for p, c in zip(a.gradients, a.offsets))
    return SlicedFunctions(AffineFunctionSet(a.dim - 1, grads, offs), origin, dirs)


@dataclass(frozen=True)
class VoronoiLift:
    """Unweighted sites ``(P_i, r_i)`` one dimension up.

    Only the squared heights ``r_i^2 = -w_i'`` are stored, where ``w'`` is
    the weight vector shifted so every entry is negative.
    """

    points: tuple[Vector, ...]
    sq_heights: tuple[Fraction, ...]

    @property
    def dim(self) -> int:
        return len(self.points[0]) + 1

    def height(self, i: int):
        """Exact root when it is rational, else a float."""
        q = self.sq_heights[i - 1]
        rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
        if rn * rn == q.numerator and rd * rd == q.denominator:
            return Fraction(rn, rd)
        return math.sqrt(q)

    def sq_distance(self, i: int, x, xprime=0):
        """Squared distance from ``(x, xprime)`` to the lifted site ``i``."""
        p = self.points[i - 1]
        base = sqnorm(sub(vec(x), p))
        if xprime == 0:
            return base + self.sq_heights[i - 1]
        return base + (xprime - self.height(i)) ** 2

    def nearest(self, x, xprime=0) -> frozenset[int]:
        d = [self.sq_distance(i, x, xprime) for i in range(1, len(self.points) + 1)]
        m = min(d)
        return frozenset(i for i, v in enumerate(d, start=1) if v == m)


def voronoi_lift(s: SiteSet) -> VoronoiLift:
    shift = max(s.weights) + 1
    return VoronoiLift(s.points, tuple(shift - w for w in s.weights))
