import random
from fractions import Fraction
from itertools import combinations

import pytest

from helpers import BLOCKED_TRIO, random_sites
from powdiag.core import SiteSet, to_affine
from powdiag.diagram import build_power_diagram
from powdiag.korder import (arrangement_check, averaged_function, build_korder,
                            k_biggest_witness)

F = Fraction
SQUARE = SiteSet.from_pairs([((0, 0), 0), ((1, 0), 0), ((1, 1), 0), ((0, 1), 0)])


def brute_cells(s, k, pts):
    """Subsets that are the unique k-biggest set at some sample point."""
    a = to_affine(s)
    seen = set()
    for x in pts:
        vals = {i: a.value(i, x) for i in a.indices}
        sums = {I: sum(vals[i] for i in I) for I in combinations(a.indices, k)}
        best = max(sums.values())
        winners = [I for I, v in sums.items() if v == best]
        if len(winners) == 1:
            seen.add(frozenset(winners[0]))
    return seen


def grid(lo, hi, n):
    return [(lo + (hi - lo) * F(i, n), lo + (hi - lo) * F(j, n))
            for i in range(n + 1) for j in range(n + 1)]


def test_averaged_function():
    g, c = averaged_function(BLOCKED_TRIO, {2, 3})
    assert g == (1, 0)
    assert c == (F(-5, 8) + F(-7, 12)) / 2
    with pytest.raises(ValueError):
        averaged_function(BLOCKED_TRIO, set())
    with pytest.raises(IndexError):
        averaged_function(BLOCKED_TRIO, {4})


def test_witness_ties_prefer_small_indices():
    assert k_biggest_witness([1, 3, 3, 0], 2) == {2, 3}
    assert k_biggest_witness([2, 2, 2], 2) == {1, 2}
    with pytest.raises(ValueError):
        k_biggest_witness([1, 2], 3)


def test_three_sites_second_order():
    kd = build_korder(SiteSet.from_pairs([((0, 0), 0), ((4, 0), 0), ((0, 4), 0)]), 2)
    assert sorted(map(sorted, kd.cells)) == [[1, 2], [1, 3], [2, 3]]


def test_square_second_order_matches_brute_force():
    kd = build_korder(SQUARE, 2)
    want = brute_cells(SQUARE, 2, grid(F(-3), F(4), 35))
    assert set(kd.cells) == want


@pytest.mark.parametrize("k", [1, 2, 3])
def test_random_orders_match_brute_force(k):
    rng = random.Random(k)
    s = random_sites(rng, 5, span=40, den=9)
    kd = build_korder(s, k)
    want = brute_cells(s, k, grid(F(-40), F(40), 80))
    # sampling can only miss cells, never invent them
    assert want <= set(kd.cells)
    for lab in kd.diagram.top_cells():
        x = kd.diagram.relint_point(lab)
        I = kd.subset_of(next(iter(lab)))
        assert kd.locate(x) == I and kd.cell_contains(I, x)


def test_first_order_equals_power_diagram():
    rng = random.Random(4)
    for _ in range(5):
        s = random_sites(rng, 6)
        kd = build_korder(s, 1)
        d = build_power_diagram(s)
        relabel = {frozenset().union(*(kd.subset_of(m) for m in lab)) for lab in kd.diagram.cells}
        assert relabel == set(d.cells)


def test_duplicate_averages_are_dropped():
    # 1+4 and 2+3 average to the same function
    kd = build_korder(SQUARE.shifted(0), 2)
    assert len(kd.kept) == 4
    assert frozenset({1, 3}) not in kd.cells and frozenset({2, 4}) not in kd.cells


def test_k_range():
    with pytest.raises(ValueError):
        build_korder(BLOCKED_TRIO, 0)
    with pytest.raises(ValueError):
        build_korder(BLOCKED_TRIO, 4)


def test_arrangement_check():
    for s in [BLOCKED_TRIO, SQUARE] + [random_sites(random.Random(i), 5) for i in range(4)]:
        reports = arrangement_check(s, max_order=3)
        assert reports and all(r.consistent for r in reports)
    three_d = random_sites(random.Random(7), 5, dim=3)
    assert all(r.consistent for r in arrangement_check(three_d, max_order=2))


def test_to_json():
    data = build_korder(BLOCKED_TRIO, 2).to_json()
    assert data["k"] == 2
    labels = sorted(c["label"] for c in data["cells"] if c["dim"] == 2)
    assert labels == [[[1, 2]], [[1, 3]], [[2, 3]]]
