from fractions import Fraction

import pytest

from helpers import CHAIN4, BLOCKED_TRIO, SQUARE_CENTER, TRIANGLE, TWO_SITES, generic_configs
from powdiag.dmt import (DiscreteMorseFunction, DiscreteVectorField, _fill, build_dvf,
                         dimension_function, jump_monotonicity, nearest_point_owner,
                         synthesize_morse_function, up_set, v_path_jumps, verify_acyclic,
                         visibility_test)
from powdiag.errors import DisappearingVertexError, FillError
from powdiag.hull import PolyhedralComplex, coherent_triangulation
from powdiag.morse import Status, morse_poset

f = frozenset


def square_boundary():
    cells = {f({i}): 0 for i in range(1, 5)}
    cells.update({f(e): 1 for e in [{1, 2}, {2, 3}, {3, 4}, {1, 4}]})
    return PolyhedralComplex(2, cells)


@pytest.mark.parametrize("alpha,want", [
    ({2}, [{1, 2}, {2}]),
    ({2, 3}, [{1, 2, 3}, {2, 3}]),
    ({3}, [{1, 3}, {3}]),
])
def test_blocked_trio_up_sets(alpha, want):
    assert up_set(BLOCKED_TRIO, alpha) == [f(w) for w in want]


def test_up_set_needs_up_inactive_cell():
    with pytest.raises(ValueError):
        up_set(BLOCKED_TRIO, {1})
    with pytest.raises(ValueError):
        up_set(BLOCKED_TRIO, {1, 2})
    with pytest.raises(KeyError):
        up_set(BLOCKED_TRIO, {4})


def test_visibility_fixtures():
    for alpha, beta in [({2}, {1, 2}), ({2, 3}, {1, 2, 3}), ({3}, {1, 3})]:
        assert visibility_test(BLOCKED_TRIO, alpha, beta)
    assert not visibility_test(BLOCKED_TRIO, {2}, {2, 3})
    with pytest.raises(ValueError):
        visibility_test(BLOCKED_TRIO, {2}, {2})


def test_visibility_agrees_with_up_sets():
    for s in generic_configs(21, 12) + [CHAIN4]:
        mp = morse_poset(s)
        tri = mp.triangulation
        for alpha in tri.ordered:
            if mp.records[alpha].status is not Status.UP:
                continue
            members = set(up_set(s, alpha, tri))
            for beta in tri.ordered:
                if alpha < beta:
                    assert visibility_test(s, alpha, beta) == (beta in members)


def test_blocked_trio_field():
    v = build_dvf(BLOCKED_TRIO)
    assert v.arrows == ((f({2}), f({1, 2})), (f({2, 3}), f({1, 2, 3})), (f({3}), f({1, 3})))
    assert v.critical == {f({1})}
    assert set(v.owner.values()) == {f({2}), f({3}), f({2, 3})}
    assert verify_acyclic(v) == (True, None)
    assert v_path_jumps(BLOCKED_TRIO, v) == [] and jump_monotonicity(BLOCKED_TRIO, v)


@pytest.mark.parametrize("s,n_cells", [(TWO_SITES, 3), (TRIANGLE, 7)])
def test_all_critical_fields(s, n_cells):
    v = build_dvf(s)
    assert v.arrows == () and len(v.critical) == n_cells
    assert sum((-1) ** v.complex.cells[c] for c in v.critical) == 1
    assert jump_monotonicity(s, v)


def test_chain_field():
    v = build_dvf(CHAIN4)
    assert (f({1, 4}), f({1, 3, 4})) in v.arrows
    assert (f({1, 2, 4}), f({1, 2, 3, 4})) in v.arrows
    assert len(v.arrows) == 4 and len(v.critical) == 7
    assert verify_acyclic(v)[0] and jump_monotonicity(CHAIN4, v)


def test_refuses_disappearing_vertices():
    with pytest.raises(DisappearingVertexError):
        build_dvf(SQUARE_CENTER)


def test_vector_field_matches_poset_on_random_configs():
    for s in generic_configs(23, 15) + generic_configs(24, 5, n_max=6, dim=3):
        mp = morse_poset(s)
        v = build_dvf(s, mp)
        assert v.critical == set(mp.active)
        assert set(v.owner) == set(mp.triangulation.cells) - set(mp.active)
        assert verify_acyclic(v)[0]
        assert jump_monotonicity(s, v)
        for beta, rec in mp.records.items():
            if rec.status is Status.DOWN:
                assert nearest_point_owner(s, beta, mp.triangulation) == v.owner[beta]


def test_jumps_strictly_decrease_on_six_sites():
    configs = [s for s in generic_configs(31, 40, n_max=6) if len(s) == 6]
    jumps = [j for s in configs for j in v_path_jumps(s, build_dvf(s))]
    assert jumps, "no V-path jumps exercised"
    assert all(v1 > v2 for _, _, v1, v2 in jumps)


def test_closed_v_path_is_found():
    cx = square_boundary()
    arrows = ((f({1}), f({1, 2})), (f({2}), f({2, 3})), (f({3}), f({3, 4})), (f({4}), f({1, 4})))
    v = DiscreteVectorField(cx, arrows, frozenset())
    ok, cycle = verify_acyclic(v)
    assert not ok
    assert len(cycle) == 9 and cycle[0] == cycle[-1]
    with pytest.raises(ValueError):
        synthesize_morse_function(v)


def test_empty_field_is_acyclic():
    cx = square_boundary()
    v = DiscreteVectorField(cx, (), frozenset(cx.cells))
    assert verify_acyclic(v) == (True, None)


def test_field_validation():
    cx = square_boundary()
    with pytest.raises(ValueError):
        DiscreteVectorField(cx, ((f({1}), f({1, 2})), (f({2}), f({1, 2}))), frozenset())
    with pytest.raises(ValueError):
        DiscreteVectorField(cx, ((f({1}), f({3})),), frozenset())
    with pytest.raises(ValueError):
        DiscreteVectorField(cx, (), frozenset())


def test_unfillable_cone():
    cx = PolyhedralComplex(2, {f({1, 2}): 1, f({1, 2, 3}): 2, f({1, 2, 4}): 2})
    with pytest.raises(FillError):
        _fill(cx, list(cx.cells))


def test_dimension_function():
    tri = coherent_triangulation(BLOCKED_TRIO)
    h = dimension_function(tri)
    assert h.is_valid() and h.critical == set(tri.cells)


def test_synthesized_function_blocked_trio():
    v = build_dvf(BLOCKED_TRIO)
    h = synthesize_morse_function(v)
    assert h.is_valid() and h.critical == {f({1})}
    assert set(h.gradient) == set(v.arrows)


def test_synthesized_function_two_sites():
    h = synthesize_morse_function(build_dvf(TWO_SITES))
    assert h.critical == set(h.complex.cells)


def test_invalid_morse_function_is_detected():
    tri = coherent_triangulation(BLOCKED_TRIO)
    vals = {c: Fraction(0) for c in tri.cells}
    assert not DiscreteMorseFunction(tri, vals).is_valid()
