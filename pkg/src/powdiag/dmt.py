"""Discrete Morse structures on the coherent triangulation.

Every cell that is inactive for the "up" reason, with blockers ``K``, owns
the interval ``Up(alpha) = {beta : alpha <= beta <= alpha | K}`` of the
triangulation. These intervals partition the inactive cells; filling each
one with arrows by elementary collapses gives an acyclic discrete vector
field whose critical cells are exactly the active ones.
"""

from __future__ import annotations

import graphlib
from dataclasses import dataclass, field
from fractions import Fraction

from .core import as_affine
from .diagram import PowerDiagram
from .errors import DegenerateError, FillError
from .hull import PolyhedralComplex, coherent_triangulation
from .morse import MorsePoset, Status, center, classify, g_value, morse_poset
from .polytope import Polytope

Label = frozenset[int]
Arrow = tuple[Label, Label]


def _key(label) -> tuple:
    return tuple(sorted(label))


def _hull(a, label) -> Polytope:
    return Polytope({i: a.gradients[i - 1] for i in label})


def up_set(s, alpha, tri=None) -> list[Label]:
    """``Up(alpha)`` for a cell that is inactive for the "up" reason.

    The interval is cross-checked against the nearest point description:
    ``beta`` belongs to it exactly when ``c(alpha)`` is the point of
    ``CH(beta)`` closest to ``c(beta)``.
    """
    a = as_affine(s)
    tri = coherent_triangulation(a) if tri is None else tri
    alpha = frozenset(alpha)
    if alpha not in tri.cells:
        raise KeyError(f"{sorted(alpha)} is not a cell")
    rec = classify(a, alpha)
    if rec.status is not Status.UP:
        raise ValueError(f"{sorted(alpha)} is {rec.status.value}, not up-inactive")
    top = alpha | rec.blockers
    out = [b for b in tri.ordered if alpha <= b <= top]
    by_nearest = [b for b in tri.ordered if alpha <= b and
                  _hull(a, b).nearest_point(center(a, b))[0] == rec.center]
    if by_nearest != out:
        raise DegenerateError(
            f"Up({sorted(alpha)}) disagrees with its nearest point description: "
            f"{[sorted(b) for b in out]} vs {[sorted(b) for b in by_nearest]}")
    return out


def visibility_test(s, alpha, beta, diagram: PowerDiagram | None = None) -> bool:
    """Is ``Pow(beta)`` on the side of ``Pow(alpha)`` facing ``c(alpha)``?

    With ``x`` in the relative interior of ``Pow(beta)`` the test holds when
    ``x = c(alpha)``, or when the line through ``x`` and ``c(alpha)`` meets
    ``Pow(alpha)`` in a nondegenerate segment while ``[x, c(alpha)]`` avoids
    the relative interior of ``Pow(alpha)``.
    """
    from .diagram import build_power_diagram

    a = as_affine(s)
    d = build_power_diagram(a) if diagram is None else diagram
    alpha, beta = frozenset(alpha), frozenset(beta)
    if not alpha < beta:
        raise ValueError("visibility_test needs alpha to be a proper subset of beta")
    if beta not in d.cells:
        raise DegenerateError(f"Pow({sorted(beta)}) is empty")
    x = d.relint_point(beta)
    c = center(a, alpha)
    if x == c:
        return True
    # phi_j(t) = f_j(x_t) - f_alpha(x_t) with x_t = c + t (x - c) is affine;
    # the line meets Pow(alpha) in [lo, hi] and its interior in (lo, hi)
    i0 = min(alpha)
    lo = hi = None
    flat = False
    for j in a.indices:
        if j in alpha:
            continue
        p0 = a.value(j, c) - a.value(i0, c)
        slope = a.value(j, x) - a.value(i0, x) - p0
        if slope == 0:
            if p0 > 0:
                return False
            flat |= p0 == 0
        elif slope > 0:
            hi = -p0 / slope if hi is None else min(hi, -p0 / slope)
        else:
            lo = -p0 / slope if lo is None else max(lo, -p0 / slope)
    if lo is not None and hi is not None and lo >= hi:
        return False
    if flat:
        return True
    left = Fraction(0) if lo is None else max(Fraction(0), lo)
    right = Fraction(1) if hi is None else min(Fraction(1), hi)
    # (lo, hi) meets [0, 1] when left < right, or at a single point 0 or 1
    meets = left < right or (left == right and (lo is None or left > lo)
                             and (hi is None or left < hi))
    return not meets


@dataclass
class DiscreteVectorField:
    complex: PolyhedralComplex
    arrows: tuple[Arrow, ...]
    critical: frozenset[Label]
    # cell -> the alpha whose Up set holds it (unmatched cells are absent)
    owner: dict[Label, Label] = field(default_factory=dict)

    def __post_init__(self):
        seen = set()
        for lo, hi in self.arrows:
            if lo not in self.complex.cells or hi not in self.complex.cells:
                raise ValueError(f"arrow {_key(lo)} -> {_key(hi)} leaves the complex")
            if not (lo < hi and self.complex.cells[hi] == self.complex.cells[lo] + 1):
                raise ValueError(f"arrow {_key(lo)} -> {_key(hi)} is not a facet pair")
            if lo in seen or hi in seen:
                raise ValueError(f"cell used twice in arrow {_key(lo)} -> {_key(hi)}")
            seen |= {lo, hi}
        if seen & self.critical or seen | self.critical != set(self.complex.cells):
            raise ValueError("critical and matched cells must partition the complex")

    @property
    def partner(self) -> dict[Label, Label]:
        out = {}
        for lo, hi in self.arrows:
            out[lo], out[hi] = hi, lo
        return out

    def to_json(self) -> dict:
        return {
            "arrows": [[_key(lo), _key(hi)] for lo, hi in self.arrows],
            "critical": sorted(_key(c) for c in self.critical),
        }


def _fill(cx: PolyhedralComplex, cells: list[Label]) -> list[Arrow]:
    """Match a set of cells completely by greedy elementary collapses."""
    remaining = set(cells)
    arrows = []
    while remaining:
        for sigma in sorted(remaining, key=_key):
            ups = [t for t in cx.cofacets(sigma) if t in remaining]
            if len(ups) != 1:
                continue
            tau = ups[0]
            if any(t in remaining for t in cx.cofacets(tau)):
                continue
            arrows.append((sigma, tau))
            remaining -= {sigma, tau}
            break
        else:
            raise FillError("greedy collapse stuck on "
                            f"{sorted(_key(c) for c in remaining)}")
    return arrows


def build_dvf(s, poset: MorsePoset | None = None) -> DiscreteVectorField:
    a = as_affine(s)
    poset = morse_poset(a) if poset is None else poset
    tri = poset.triangulation
    owner: dict[Label, Label] = {}
    arrows: list[Arrow] = []
    for alpha in tri.ordered:
        if poset.records[alpha].status is not Status.UP:
            continue
        members = up_set(a, alpha, tri)
        for b in members:
            if b in owner:
                raise DegenerateError(f"{_key(b)} lies in Up({_key(owner[b])}) "
                                      f"and Up({_key(alpha)})")
            owner[b] = alpha
        arrows.extend(_fill(tri, members))
    active = frozenset(poset.active)
    missing = set(tri.cells) - active - set(owner)
    if missing:
        raise DegenerateError(f"inactive cells outside every Up set: "
                              f"{sorted(_key(c) for c in missing)}")
    arrows.sort(key=lambda ar: (_key(ar[0]), _key(ar[1])))
    return DiscreteVectorField(tri, tuple(arrows), active, owner)


def _modified_hasse(cx: PolyhedralComplex, arrows) -> dict[Label, set[Label]]:
    """``node -> cells that must get a smaller value``.

    Unmatched covers point up (``tau`` above ``sigma``), matched ones down.
    A directed cycle is the same thing as a closed V-path.
    """
    matched = set(arrows)
    below: dict[Label, set[Label]] = {c: set() for c in cx.ordered}
    for sigma, tau in cx.covers:
        if (sigma, tau) in matched:
            below[sigma].add(tau)
        else:
            below[tau].add(sigma)
    return below


def verify_acyclic(v: DiscreteVectorField) -> tuple[bool, list[Label] | None]:
    """``(True, None)`` or ``(False, cycle)`` with a closed V-path as witness."""
    try:
        tuple(graphlib.TopologicalSorter(_modified_hasse(v.complex, v.arrows)).static_order())
    except graphlib.CycleError as e:
        return False, list(e.args[1])
    return True, None


def v_path_jumps(s, v: DiscreteVectorField) -> list[tuple[Label, Label, Fraction, Fraction]]:
    """Consecutive arrows of V-paths that pass from one Up set to another.

    Returns ``(gamma1, gamma2, g_gamma1(c(gamma1)), g_gamma2(c(gamma2)))``.
    Every V-path is a chain of such consecutive pairs, so checking the pairs
    covers all paths.
    """
    a = as_affine(s)
    up = {lo: hi for lo, hi in v.arrows}
    level: dict[Label, Fraction] = {}

    def value(gamma):
        if gamma not in level:
            level[gamma] = g_value(a, min(gamma), center(a, gamma))
        return level[gamma]

    out = []
    for lo, hi in v.arrows:
        for nxt in v.complex.facets_of(hi):
            if nxt == lo or nxt not in up:
                continue
            g1, g2 = v.owner.get(lo), v.owner.get(nxt)
            if g1 is not None and g2 is not None and g1 != g2:
                out.append((g1, g2, value(g1), value(g2)))
    return out


def jump_monotonicity(s, v: DiscreteVectorField) -> bool:
    return all(v1 > v2 for _, _, v1, v2 in v_path_jumps(s, v))


@dataclass
class DiscreteMorseFunction:
    complex: PolyhedralComplex
    values: dict[Label, Fraction]

    def counts(self, label) -> tuple[int, int]:
        """Cofacets with a value not above, facets with a value not below."""
        label = frozenset(label)
        h = self.values[label]
        up = sum(1 for t in self.complex.cofacets(label) if self.values[t] <= h)
        down = sum(1 for f in self.complex.facets_of(label) if self.values[f] >= h)
        return up, down

    def is_valid(self) -> bool:
        return all(max(self.counts(c)) <= 1 for c in self.complex.ordered)

    @property
    def critical(self) -> frozenset[Label]:
        return frozenset(c for c in self.complex.ordered if self.counts(c) == (0, 0))

    @property
    def gradient(self) -> tuple[Arrow, ...]:
        return tuple((lo, hi) for lo, hi in self.complex.covers
                     if self.values[hi] <= self.values[lo])


def dimension_function(cx: PolyhedralComplex) -> DiscreteMorseFunction:
    return DiscreteMorseFunction(cx, {c: Fraction(d) for c, d in cx.cells.items()})


def synthesize_morse_function(v: DiscreteVectorField) -> DiscreteMorseFunction:
    """Values from a linear extension of the modified Hasse digraph."""
    ok, cycle = verify_acyclic(v)
    if not ok:
        raise ValueError(f"closed V-path: {[_key(c) for c in cycle]}")
    order = graphlib.TopologicalSorter(_modified_hasse(v.complex, v.arrows)).static_order()
    h = DiscreteMorseFunction(v.complex, {c: Fraction(k) for k, c in enumerate(order)})
    if not h.is_valid() or h.critical != v.critical:
        raise AssertionError("linear extension failed the discrete Morse audit")
    return h


def nearest_point_owner(s, beta, tri=None) -> Label:
    """The up-inactive ``alpha`` below a down-inactive ``beta``.

    It is the face of ``beta`` whose center is the point of ``CH(beta)``
    closest to ``c(beta)``.
    """
    a = as_affine(s)
    tri = coherent_triangulation(a) if tri is None else tri
    beta = frozenset(beta)
    y, _ = _hull(a, beta).nearest_point(center(a, beta))
    hits = [al for al in tri.faces_of(beta) if al != beta and center(a, al) == y
            and classify(a, al).status is Status.UP]
    if len(hits) != 1:
        raise DegenerateError(f"{_key(beta)} has {len(hits)} nearest point owners")
    return hits[0]

