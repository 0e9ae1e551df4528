import warnings
from fractions import Fraction
from itertools import combinations

import numpy as np
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from powdiag.core import SiteSet, lower_envelope, to_affine, upper_envelope
from powdiag.dmt import build_dvf, jump_monotonicity, verify_acyclic
from powdiag.hull import coherent_triangulation, disappearing_vertices, is_general_position
from powdiag.korder import k_biggest_witness
from powdiag.morse import morse_poset
from powdiag.tropic import maslov_limit

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)
weights = st.fractions(min_value=0, max_value=4, max_denominator=5)


@st.composite
def site_sets(draw, dim=2, min_size=3, max_size=6):
    pts = draw(st.lists(st.tuples(*[rationals] * dim), min_size=min_size,
                        max_size=max_size, unique=True))
    ws = draw(st.lists(weights, min_size=len(pts), max_size=len(pts)))
    return SiteSet.from_pairs(list(zip(pts, ws)))


common = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@common
@given(site_sets(), st.tuples(rationals, rationals))
def test_envelopes_agree(s, x):
    assert lower_envelope(s, x)[1] == upper_envelope(to_affine(s), x)[1]


@common
@given(site_sets())
def test_triangulation_is_contractible(s):
    assume(s.full_dim)
    tri = coherent_triangulation(s)
    assert tri.euler_characteristic() == 1
    counts = [c for _, _, c in tri.codim2_intervals()]
    assert all(c >= 2 for c in counts)
    if is_general_position(s):
        assert all(c == 2 for c in counts)


@common
@given(site_sets(max_size=5))
def test_vector_field_matches_poset(s):
    assume(s.full_dim and is_general_position(s) and not disappearing_vertices(s))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        mp = morse_poset(s)
    v = build_dvf(s, mp)
    assert mp.euler == 1
    assert v.critical == set(mp.active)
    assert verify_acyclic(v)[0] and jump_monotonicity(s, v)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=8), st.data())
def test_witness_maximizes_sum(values, data):
    k = data.draw(st.integers(1, len(values)))
    w = k_biggest_witness(values, k)
    best = max(sum(values[i] for i in I) for I in combinations(range(len(values)), k))
    assert len(w) == k and sum(values[i - 1] for i in w) == best


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-50, 50), min_size=1, max_size=20),
       st.sampled_from([1.5, 10.0, 1e3, 1e6]))
def test_maslov_bounds(values, h):
    m = maslov_limit(values, h)
    top = max(values)
    assert top - 1e-12 <= m <= top + np.log(len(values)) / np.log(h) + 1e-12
