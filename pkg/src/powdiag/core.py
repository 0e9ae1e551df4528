"""Weighted sites and the two equivalent function systems.

A site ``(P_i, w_i)`` gives the weighted distance

    g_i(x) = 1/2 |x - P_i|^2 - 1/2 w_i

and the affine function

    f_i(x) = <x, P_i> + c_i,   c_i = -(|P_i|^2 - w_i) / 2.

Note the squared norm: ``|x|`` here always means the coordinate sum of
squares, never its root. ``argmin_i g_i(x) == argmax_i f_i(x)`` as index
sets, everywhere. Site indices are 1-based throughout the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ._exact import Vector, affine_dim, dot, sqnorm, sub, vec
from .errors import DegenerateError, DimensionError


def _check_point(x, dim: int) -> Vector:
    x = vec(x)
    if len(x) != dim:
        raise DimensionError(f"expected {dim} coordinates, got {len(x)}")
    return x


@dataclass(frozen=True)
class SiteSet:
    dim: int
    points: tuple[Vector, ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")
        if not self.points:
            raise ValueError("a site set needs at least one site")
        if len(self.points) != len(self.weights):
            raise ValueError("points and weights differ in length")
        pts = tuple(_check_point(p, self.dim) for p in self.points)
        ws = tuple(Fraction(w) for w in self.weights)
        seen = set()
        for i, key in enumerate(zip(pts, ws), start=1):
            if key in seen:
                raise ValueError(f"site {i} duplicates an earlier (point, weight) pair")
            seen.add(key)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", ws)

    @classmethod
    def from_pairs(cls, pairs, dim: int | None = None) -> "SiteSet":
        """Build from ``[(point, weight), ...]``."""
        pairs = list(pairs)
        if dim is None:
            dim = len(pairs[0][0])
        return cls(dim, tuple(vec(p) for p, _ in pairs), tuple(Fraction(w) for _, w in pairs))

    def __len__(self) -> int:
        return len(self.points)

    @property
    def n_sites(self) -> int:
        return len(self.points)

    @property
    def indices(self) -> range:
        return range(1, len(self.points) + 1)

    def point(self, i: int) -> Vector:
        return self.points[self._idx(i)]

    def weight(self, i: int) -> Fraction:
        return self.weights[self._idx(i)]

    def radius(self, i: int) -> float:
        """``sqrt(w_i)``; only meaningful for non-negative weights."""
        return math.sqrt(self.weight(i))

    @property
    def full_dim(self) -> bool:
        return affine_dim(self.points) == self.dim

    def _idx(self, i: int) -> int:
        if not 1 <= i <= len(self.points):
            raise IndexError(f"site index {i} out of range 1..{len(self.points)}")
        return i - 1

    def shifted(self, dw) -> "SiteSet":
        """Same sites with ``dw`` added to every weight."""
        dw = Fraction(dw)
        return SiteSet(self.dim, self.points, tuple(w + dw for w in self.weights))

    def without(self, drop) -> "SiteSet":
        drop = set(drop)
        keep = [i for i in self.indices if i not in drop]
        return SiteSet(self.dim, tuple(self.point(i) for i in keep),
                       tuple(self.weight(i) for i in keep))

    def to_affine(self) -> "AffineFunctionSet":
        return to_affine(self)


@dataclass(frozen=True)
class AffineFunctionSet:
    """Functions ``f_i(x) = <x, gradient_i> + offset_i``."""

    dim: int
    gradients: tuple[Vector, ...]
    offsets: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.gradients) != len(self.offsets):
            raise ValueError("gradients and offsets differ in length")
        object.__setattr__(self, "gradients", tuple(_check_point(p, self.dim) for p in self.gradients))
        object.__setattr__(self, "offsets", tuple(Fraction(c) for c in self.offsets))

    def __len__(self) -> int:
        return len(self.gradients)

    @property
    def indices(self) -> range:
        return range(1, len(self.gradients) + 1)

    # sites and affine sets share these accessors so hull code takes either
    @property
    def points(self) -> tuple[Vector, ...]:
        return self.gradients

    def value(self, i: int, x) -> Fraction:
        return dot(x, self.gradients[i - 1]) + self.offsets[i - 1]

    def to_affine(self) -> "AffineFunctionSet":
        return self


@dataclass(frozen=True)
class Hyperplane:
    """The set ``{x : <normal, x> = offset}``.

    As a halfspace it denotes ``{x : <normal, x> <= offset}``.
    """

    normal: Vector
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, "normal", vec(self.normal))
        object.__setattr__(self, "offset", Fraction(self.offset))
        if not any(self.normal):
            raise ValueError("hyperplane normal must be nonzero")

    def evaluate(self, x) -> Fraction:
        """Signed residual ``<normal, x> - offset``."""
        return dot(self.normal, x) - self.offset

    def contains(self, x) -> bool:
        return self.evaluate(x) == 0


def power_distance(s: SiteSet, i: int, x) -> Fraction:
    x = _check_point(x, s.dim)
    return sqnorm(sub(x, s.point(i))) / 2 - s.weight(i) / 2


def to_affine(s: SiteSet) -> AffineFunctionSet:
    offsets = tuple(-(sqnorm(p) - w) / 2 for p, w in zip(s.points, s.weights))
    return AffineFunctionSet(s.dim, s.points, offsets)


def lower_envelope(s: SiteSet, x) -> tuple[Fraction, frozenset[int]]:
    x = _check_point(x, s.dim)
    vals = [power_distance(s, i, x) for i in s.indices]
    m = min(vals)
    return m, frozenset(i for i, v in zip(s.indices, vals) if v == m)


def upper_envelope(a: AffineFunctionSet, x) -> tuple[Fraction, frozenset[int]]:
    x = _check_point(x, a.dim)
    vals = [a.value(i, x) for i in a.indices]
    m = max(vals)
    return m, frozenset(i for i, v in zip(a.indices, vals) if v == m)


def separator(a: AffineFunctionSet, i: int, j: int) -> Hyperplane:
    """``{x : f_i(x) = f_j(x)}`` with normal ``P_i - P_j``.

    The halfspace side ``<= offset`` is where ``f_i <= f_j``.
    """
    if i == j:
        raise ValueError("separator needs two distinct sites")
    normal = sub(a.gradients[i - 1], a.gradients[j - 1])
    if not any(normal):
        raise DegenerateError(f"sites {i} and {j} share a point; their separator is degenerate")
    return Hyperplane(normal, a.offsets[j - 1] - a.offsets[i - 1])


def as_affine(obj) -> AffineFunctionSet:
    if isinstance(obj, AffineFunctionSet):
        return obj
    return to_affine(obj)


def centroid(points: Sequence[Vector]) -> Vector:
    n = len(points)
    return tuple(sum(c) / n for c in zip(*points))
