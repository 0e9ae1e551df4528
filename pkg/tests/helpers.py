"""Shared fixtures and random input generators."""

from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

from powdiag.core import SiteSet
from powdiag.hull import disappearing_vertices, is_general_position

DATA = Path(__file__).parent / "data"

# sites (-1, 0), (1, 1), (1, -1) with radii 5, sqrt(3/4), sqrt(5/6)
BLOCKED_TRIO = SiteSet.from_pairs([((-1, 0), 25), ((1, 1), Fraction(3, 4)), ((1, -1), Fraction(5, 6))])
SQUARE_CENTER = SiteSet.from_pairs([((0, 0), 0), ((1, 0), 0), ((1, 1), 0), ((0, 1), 0),
                                    ((Fraction(1, 2), Fraction(1, 2)), -10)])
TWO_SITES = SiteSet.from_pairs([((0, 0), 0), ((2, 0), 0)])
# isosceles stand-in for the equilateral triangle: apex height 1.732 ~ sqrt(3)
TRIANGLE = SiteSet.from_pairs([((-1, 0), 0), ((1, 0), 0), ((0, Fraction(1732, 1000)), 0)])
# tetrahedron whose Morse poset is the vertices plus edges 12, 23, 34
CHAIN4 = SiteSet.from_pairs([((-6, -3, -6), 0), ((0, -4, -6), 0), ((5, -4, 1), 0), ((5, 2, 4), 0)])


def random_sites(rng: random.Random, n_sites: int, dim: int = 2, span: int = 400,
                 den: int = 97, weights: bool = True) -> SiteSet:
    pts: set = set()
    while len(pts) < n_sites:
        pts.add(tuple(Fraction(rng.randint(-span, span), den) for _ in range(dim)))
    ws = [Fraction(rng.randint(0, span), den) if weights else 0 for _ in pts]
    return SiteSet.from_pairs(list(zip(sorted(pts), ws)))


def generic_configs(seed: int, count: int, n_max: int = 7, dim: int = 2) -> list[SiteSet]:
    """Full dimensional, general position, no disappearing vertices."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        s = random_sites(rng, rng.randint(dim + 1, n_max), dim)
        if s.full_dim and is_general_position(s) and not disappearing_vertices(s):
            out.append(s)
    return out
