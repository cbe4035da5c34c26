import random

import pytest
from hypothesis import given, settings, strategies as st

from bicorn import curvepair as c
from bicorn.generate import random_pair
from bicorn.oracles import brute_pairings


def torus(pair_raw):
    return c.build_curve_pair(pair_raw("torus.json"))


def test_disjoint_pair_keeps_declared_genus():
    cp = c.build_curve_pair({"vertices": [], "a_cycle": [], "b_cycle": [], "rotations": {}, "genus": 3})
    assert cp.n == 0 and cp.genus == 3
    kinds = [f.kind for f in c.faces(cp)]
    assert len(kinds) == 2 and "rectangle" not in kinds


def test_torus_single_square(pair_raw):
    cp = torus(pair_raw)
    assert cp.genus == 1
    (f,) = c.faces(cp)
    assert f.kind == "rectangle" and len(f.darts) == 4


def test_bigon_rejected():
    with pytest.raises(c.BigonPresent):
        c.from_signs([0, 1], [0, 1], {0: 1, 1: -1})


def test_bigon_removal_empties_two_point_pair():
    cp = c.from_signs([0, 1], [0, 1], {0: 1, 1: -1}, allow_bigons=True)
    assert any(f.kind == "bigon" for f in c.faces(cp))
    assert c.reduce_to_minimal_position(cp).n == 0


def test_minimal_position_is_fixed(pair_raw):
    cp = c.build_curve_pair(pair_raw("genus2_sample.json"))
    assert not [f for f in c.faces(cp) if f.kind == "bigon"]
    red = c.reduce_to_minimal_position(cp)
    assert red.a_cycle == cp.a_cycle and red.b_cycle == cp.b_cycle


def test_torus_has_no_returning_arcs(pair_raw):
    assert c.returning_arcs(torus(pair_raw)) == []


def test_torus_sequence_uses_crossing_arc(pair_raw):
    seq = c.curve_surgery_sequence(torus(pair_raw))
    assert len(seq) == 1
    assert seq.intersections == [1, 0]
    (rec,) = seq.steps
    assert rec.crossing and not rec.c_vs_a_disjoint
    assert rec.new_curve_pair.genus == 1


def test_disjoint_sequence_is_empty():
    cp = c.build_curve_pair({"vertices": [], "a_cycle": [], "b_cycle": [], "rotations": {}, "genus": 2})
    assert len(c.curve_surgery_sequence(cp)) == 0


def test_two_point_surgery_both_choices(pair_raw):
    cp = c.build_curve_pair(pair_raw("genus2_i2.json"))
    arcs = c.returning_arcs(cp)
    assert {a.side for a in arcs} == {"left", "right"}
    for a in arcs:
        for choice in ("left_piece", "right_piece"):
            rec = c.arc_surgery(cp, a.arc, choice)
            assert rec.i_c_b in (0, 1) and rec.c_vs_a_disjoint


def test_sample_sequence_length(pair_raw):
    cp = c.build_curve_pair(pair_raw("genus2_sample.json"))
    seq = c.curve_surgery_sequence(cp, c.outermost_strategy)
    assert seq.intersections == [8, 2, 0]


def test_non_returning_arc_refused(pair_raw):
    cp = torus(pair_raw)
    with pytest.raises(c.NotReturning):
        c.arc_surgery(cp, c.Subarc("B", 0, 0, 1))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 4, 6, 8]), st.sampled_from(["left_piece", "right_piece"]))
def test_surgery_strictly_decreases(seed, n, choice):
    cp = random_pair(random.Random(seed), n)
    if cp is None:
        return
    seq = c.curve_surgery_sequence(cp, c.outermost_strategy, choice)
    ks = seq.intersections
    assert ks[-1] == 0
    assert all(x > y for x, y in zip(ks, ks[1:]))
    for rec in seq.steps:
        assert rec.new_curve_pair.genus == cp.genus


def test_pairing_empty():
    cp = c.build_curve_pair({"vertices": [], "a_cycle": [], "b_cycle": [], "rotations": {}, "genus": 1})
    res = c.casson_long_pairing(cp)
    assert res.count == 1 and res.pairing.matching == ()


def test_pairing_parallel_orders():
    cp = c.from_signs([1, 2, 3, 4], [1, 2, 3, 4], {v: 1 for v in (1, 2, 3, 4)})
    res = c.casson_long_pairing(cp)
    # oracle: both non-crossing matchings survive
    assert res.count == len(brute_pairings([1, 2, 3, 4], [1, 2, 3, 4])) == 2
    assert res.pairing.matching == ((1, 2), (3, 4))


def test_pairing_none_on_six_points():
    cp = c.from_signs(range(6), [1, 4, 2, 0, 3, 5], {0: -1, 1: 1, 2: 1, 3: 1, 4: 1, 5: -1})
    assert cp.genus == 3
    assert brute_pairings(list(range(6)), [1, 4, 2, 0, 3, 5]) == []
    res = c.casson_long_pairing(cp)
    assert res.count == 0 and res.pairing is None


def test_pairing_odd_count(pair_raw):
    with pytest.raises(c.OddIntersection):
        c.casson_long_pairing(torus(pair_raw))


def test_bicorns_nested(pair_raw):
    cp = c.build_curve_pair(pair_raw("genus2_sample.json"))
    seq = c.nested_bicorn_sequence(cp)
    assert len(seq.bicorns) == 2
    assert all(seq.nondegenerate)
