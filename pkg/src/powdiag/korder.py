"""k-th order power diagrams of averaged affine functions.

For a k-subset ``I`` of sites, ``f_I`` is the mean of the ``f_i`` over
``I``: its gradient is the centroid of the ``P_i`` and its offset the mean
of the ``c_i``. The k-th order diagram is the power diagram of all the
``f_I``; a point lies in cell ``I`` exactly when ``I`` indexes ``k`` largest
values of the ``f_i`` there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from ._exact import Vector, dot, sub, vec
from .core import AffineFunctionSet, as_affine, centroid
from .diagram import PowerDiagram, build_power_diagram
from .errors import DegenerateError


def averaged_function(s, I) -> tuple[Vector, Fraction]:
    """``(gradient, offset)`` of ``f_I``."""
    a = as_affine(s)
    I = sorted(set(I))
    if not I:
        raise ValueError("averaged_function needs a nonempty index set")
    for i in I:
        if not 1 <= i <= len(a):
            raise IndexError(f"site index {i} out of range")
    grad = centroid([a.gradients[i - 1] for i in I])
    off = sum((a.offsets[i - 1] for i in I), Fraction(0)) / len(I)
    return grad, off


def k_biggest_witness(values, k: int) -> frozenset[int]:
    """1-based indices of the ``k`` largest values; ties go to smaller indices."""
    if not 0 < k <= len(values):
        raise ValueError("need 1 <= k <= len(values)")
    order = sorted(range(len(values)), key=lambda i: (-values[i], i))
    return frozenset(i + 1 for i in order[:k])


@dataclass
class KOrderDiagram:
    k: int
    sites: AffineFunctionSet
    subsets: list[tuple[int, ...]]
    # power diagram of the distinct averaged functions; its site index m
    # refers to subsets[kept[m - 1]]
    diagram: PowerDiagram
    kept: list[int] = field(default_factory=list)

    @property
    def cells(self) -> list[frozenset[int]]:
        """Nonempty (full dimensional) cells, as k-subsets."""
        return [self.subset_of(next(iter(lab))) for lab in self.diagram.top_cells()]

    def subset_of(self, m: int) -> frozenset[int]:
        return frozenset(self.subsets[self.kept[m - 1]])

    def cell_contains(self, I, x) -> bool:
        """Closed cell membership: ``min f_I >= max`` of the remaining ``f_j``."""
        a, I, x = self.sites, frozenset(I), vec(x)
        vals = {i: a.value(i, x) for i in a.indices}
        lo = min(vals[i] for i in I)
        rest = [vals[j] for j in a.indices if j not in I]
        return not rest or lo >= max(rest)

    def locate(self, x) -> frozenset[int]:
        a, x = self.sites, vec(x)
        return k_biggest_witness([a.value(i, x) for i in a.indices], self.k)

    def to_json(self) -> dict:
        d = self.diagram.to_json()
        for cell in d["cells"]:
            cell["label"] = [sorted(self.subset_of(m)) for m in cell["label"]]
        d["k"] = self.k
        del d["triangulation"]
        return d


def averaged_functions(s, k: int) -> tuple[list[tuple[int, ...]], AffineFunctionSet]:
    a = as_affine(s)
    subsets = list(combinations(a.indices, k))
    grads, offs = [], []
    for I in subsets:
        g, c = averaged_function(a, I)
        grads.append(g)
        offs.append(c)
    return subsets, AffineFunctionSet(a.dim, tuple(grads), tuple(offs))


def build_korder(s, k: int) -> KOrderDiagram:
    a = as_affine(s)
    if not 1 <= k <= len(a):
        raise ValueError(f"k must lie in 1..{len(a)}")
    subsets, fa = averaged_functions(a, k)
    # identical averaged functions can never own a full dimensional cell
    groups: dict[tuple, list[int]] = {}
    for m, key in enumerate(zip(fa.gradients, fa.offsets)):
        groups.setdefault(key, []).append(m)
    kept = sorted(ms[0] for ms in groups.values() if len(ms) == 1)
    if not kept:
        raise DegenerateError("every averaged function is duplicated")
    reduced = AffineFunctionSet(a.dim, tuple(fa.gradients[m] for m in kept),
                                tuple(fa.offsets[m] for m in kept))
    return KOrderDiagram(k, a, subsets, build_power_diagram(reduced), kept)


@dataclass
class SeparatorReport:
    pair: tuple[int, int]
    # exact pieces along the separator line (n = 2): (t_lo, t_hi, order)
    # with t None meaning unbounded; x(t) = origin + t * direction
    pieces: list[tuple]
    origin: Vector | None
    direction: Vector | None
    checked: int
    consistent: bool


def _order_at(a: AffineFunctionSet, i: int, x) -> int:
    fi = a.value(i, x)
    return 1 + sum(1 for m in a.indices if a.value(m, x) > fi)


def _on_order_diagram(a: AffineFunctionSet, i: int, j: int, x, l: int) -> bool:
    """Brute force: do two l-subsets, one holding i and the other j, both
    attain the maximum average at x?"""
    vals = [a.value(m, x) for m in a.indices]
    best, holders = None, []
    for J in combinations(a.indices, l):
        v = sum(vals[m - 1] for m in J)
        if best is None or v > best:
            best, holders = v, [J]
        elif v == best:
            holders.append(J)
    return any(i in J and j not in J for J in holders) and \
        any(j in J and i not in J for J in holders)


def arrangement_check(s, max_order: int, samples: int = 7) -> list[SeparatorReport]:
    """Split every separator into pieces by diagram order and verify them.

    A point ``x`` on ``Sep(i, j)`` belongs to order ``l = 1 + #{m : f_m(x) >
    f_i(x)}``. In the plane the pieces are computed exactly from the
    breakpoints where other separators cross; their interior points are then
    checked against a brute-force maximum over all l-subsets. Orders above
    ``max_order`` are reported but not checked.
    """
    a = as_affine(s)
    reports = []
    for i, j in combinations(a.indices, 2):
        n_ij = sub(a.gradients[i - 1], a.gradients[j - 1])
        if not any(n_ij):
            continue
        rhs = a.offsets[j - 1] - a.offsets[i - 1]
        origin = tuple(c * rhs / dot(n_ij, n_ij) for c in n_ij)
        if a.dim == 1:
            l = _order_at(a, i, origin)
            ok = l > max_order or _on_order_diagram(a, i, j, origin, l)
            reports.append(SeparatorReport((i, j), [(None, None, l)], origin, None, 1, ok))
            continue
        if a.dim != 2:
            reports.append(_sampled_report(a, i, j, n_ij, origin, max_order, samples))
            continue
        direction = (-n_ij[1], n_ij[0])
        # breakpoints: f_m - f_i changes sign along the line
        cuts = set()
        for m in a.indices:
            if m in (i, j):
                continue
            slope = dot(sub(a.gradients[m - 1], a.gradients[i - 1]), direction)
            if slope != 0:
                base = a.value(m, origin) - a.value(i, origin)
                cuts.add(-base / slope)
        cuts = sorted(cuts)
        bounds = [None] + cuts + [None]
        pieces = []
        checked, ok = 0, True
        for lo, hi in zip(bounds, bounds[1:]):
            if lo is None and hi is None:
                t = Fraction(0)
            elif lo is None:
                t = hi - 1
            elif hi is None:
                t = lo + 1
            else:
                t = (lo + hi) / 2
            x = tuple(o + t * d for o, d in zip(origin, direction))
            l = _order_at(a, i, x)
            if l <= max_order:
                checked += 1
                ok &= _on_order_diagram(a, i, j, x, l)
            if pieces and pieces[-1][2] == l:
                pieces[-1] = (pieces[-1][0], hi, l)
            else:
                pieces.append((lo, hi, l))
        reports.append(SeparatorReport((i, j), pieces, origin, direction, checked, ok))
    return reports


def _sampled_report(a, i, j, n_ij, origin, max_order, samples):
    from ._exact import nullspace

    dirs = nullspace([list(n_ij)], a.dim)
    checked, ok = 0, True
    for step in range(samples):
        t = [Fraction(step * (k + 2) - samples, samples) for k in range(len(dirs))]
        x = list(origin)
        for tk, u in zip(t, dirs):
            x = [xv + tk * uv for xv, uv in zip(x, u)]
        l = _order_at(a, i, x)
        # skip points where a third function ties: they sit on a breakpoint
        if any(a.value(m, x) == a.value(i, x) for m in a.indices if m not in (i, j)):
            continue
        if l <= max_order:
            checked += 1
            ok &= _on_order_diagram(a, i, j, x, l)
    return SeparatorReport((i, j), [], tuple(origin), None, checked, ok)
