"""Small exact linear algebra over ``fractions.Fraction``.

Matrices are lists of row lists. Everything here is deliberately naive
(Gaussian elimination) since the complexes we handle are desk sized.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vector = tuple[Fraction, ...]


def vec(xs) -> Vector:
    return tuple(Fraction(x) for x in xs)


def dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def sub(a, b) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def add(a, b) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def scale(t, a) -> Vector:
    return tuple(t * x for x in a)


def sqnorm(a) -> Fraction:
    return dot(a, a)


def _rref(rows):
    """Row-reduce a copy of ``rows``. Returns (matrix, pivot columns)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows) -> int:
    if not rows:
        return 0
    return len(_rref(rows)[1])


def det(rows) -> Fraction:
    m = [list(map(Fraction, r)) for r in rows]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def solve(a, b):
    """Solve ``a @ x = b`` exactly.

    ``a`` may be non-square; returns one solution (free variables set to
    zero) or ``None`` when the system is inconsistent.
    """
    if not a:
        return ()
    ncols = len(a[0])
    aug = [list(map(Fraction, row)) + [Fraction(bi)] for row, bi in zip(a, b)]
    m, pivots = _rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = m[i][ncols]
    return tuple(x)


def nullspace(rows, ncols: int) -> list[Vector]:
    """Basis of ``{x : rows @ x = 0}``."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    m, pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, c in enumerate(pivots):
            x[c] = -m[i][f]
        basis.append(tuple(x))
    return basis


def affine_basis(points: Sequence[Vector]) -> list[int]:
    """Indices of a maximal affinely independent subset, chosen greedily."""
    if not points:
        return []
    chosen = [0]
    dirs: list[Vector] = []
    for i in range(1, len(points)):
        d = sub(points[i], points[0])
        if rank(dirs + [d]) > len(dirs):
            dirs.append(d)
            chosen.append(i)
    return chosen


def affine_dim(points: Sequence[Vector]) -> int:
    return len(affine_basis(points)) - 1


class AffineFrame:
    """Affine coordinates on the affine hull of a point set.

    ``to_local`` maps a point of the hull to coefficients ``t`` with
    ``x = origin + sum t_k * dirs[k]``; points off the hull map to ``None``.
    """

    def __init__(self, points: Sequence[Vector]):
        idx = affine_basis(points)
        self.origin = points[idx[0]]
        self.dirs = [sub(points[i], self.origin) for i in idx[1:]]
        self.dim = len(self.dirs)
        self.ambient = len(self.origin)
        # Gram matrix for exact projections onto the hull.
        self._gram = [[dot(u, v) for v in self.dirs] for u in self.dirs]

    def to_local(self, x) -> Vector | None:
        t = self.project_local(x)
        if self.to_global(t) != tuple(Fraction(v) for v in x):
            return None
        return t

    def project_local(self, x) -> Vector:
        """Local coordinates of the orthogonal projection of ``x``."""
        if self.dim == 0:
            return ()
        d = sub(x, self.origin)
        rhs = [dot(u, d) for u in self.dirs]
        t = solve(self._gram, rhs)
        return t

    def to_global(self, t) -> Vector:
        x = list(self.origin)
        for tk, u in zip(t, self.dirs):
            for j in range(self.ambient):
                x[j] += tk * u[j]
        return tuple(x)

    def project(self, x) -> Vector:
        return self.to_global(self.project_local(x))
