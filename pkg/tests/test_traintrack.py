import pytest

from bicorn import curvepair as c
from bicorn import traintrack as t


def end(switch, side, position):
    return {"switch": switch, "side": side, "position": position}


# two switches where branch 0 joins the right sides; the switch equations
# w1 = w0 + w2 and w2 = w0 + w1 force w0 = 0
ONE_WAY = {
    "switches": [0, 1],
    "branches": [
        {"id": 0, "ends": [end(1, "right", 1), end(0, "right", 0)]},
        {"id": 1, "ends": [end(0, "left", 0), end(1, "right", 0)]},
        {"id": 2, "ends": [end(0, "right", 1), end(1, "left", 0)]},
    ],
    "punctured_faces": [[0, 0]],
}


@pytest.fixture
def theta(track_raw):
    return t.validate_track(track_raw("theta.json"))


@pytest.fixture
def torus(track_raw):
    return t.validate_track(track_raw("torus_one_switch.json"))


def test_one_switch_torus_track_is_valid(torus):
    assert torus.single_switch
    assert [f.kind for f in t.face_census(torus)] == ["punctured"]


def test_all_ends_on_one_side():
    raw = {"switches": [0], "branches": [{"id": 0, "ends": [end(0, "left", 0), end(0, "left", 1)]}]}
    with pytest.raises(t.EmptySide):
        t.validate_track(raw)


def test_unpunctured_theta_has_bigon(track_raw):
    raw = track_raw("theta.json")
    raw.pop("regions")
    with pytest.raises(t.BigonFace):
        t.validate_track(raw)


@pytest.mark.parametrize("w, ok", [((3, 1, 2), True), ((3, 1, 1), False), ((0, 0, 0), True)])
def test_switch_equality(theta, w, ok):
    assert t.check_switch_equality(theta, dict(enumerate(w))) is ok


def test_torus_vertex_cycles(torus):
    cycles = {tuple(int(x) for _, x in w.weights) for w in t.vertex_cycles(torus)}
    assert cycles == {(1, 0), (0, 1)}


def test_theta_vertex_cycles(theta):
    cycles = {tuple(int(x) for _, x in w.weights) for w in t.vertex_cycles(theta)}
    assert cycles == {(1, 1, 0), (1, 0, 1)}


@pytest.mark.parametrize("choice", ["left", "right"])
def test_split_theta(theta, choice):
    assert t.large_branches(theta) == [0]
    res = t.split(theta, 0, choice)
    assert len(res.track.switches) == 2 and len(res.track.branches) == 3
    assert t.verify_carrying(res.track, theta, res.route)


def test_split_needs_large_branch(theta):
    with pytest.raises(t.NotLargeBranch):
        t.split(theta, 1, "left")


def test_identity_carries(theta):
    assert t.verify_carrying(theta, theta, t.RouteMap.identity(theta))


def test_wrong_side_route_rejected(theta):
    bad = t.RouteMap({0: ((0, 1),), 1: ((0, 1),), 2: ((2, 1),)}, {0: 0, 1: 1})
    assert not t.verify_carrying(theta, theta, bad)


def test_shift_moves_are_carried(track_raw):
    for name in ("trivalent_00.json", "trivalent_01.json", "trivalent_02.json"):
        tr = t.validate_track(track_raw(name))
        for b in t.shift_branches(tr):
            res = t.shift(tr, *b)
            assert t.verify_carrying(res.track, tr, res.route)


def test_recurrence(torus, theta):
    assert t.recurrence_report(torus).recurrent
    assert t.recurrence_report(theta).large
    rep = t.recurrence_report(t.validate_track(ONE_WAY))
    assert not rep.recurrent and rep.uncovered == [0]


def test_bicorn_pipeline(pair_raw):
    cp = c.build_curve_pair(pair_raw("genus2_sample.json"))
    seq = c.nested_bicorn_sequence(cp)
    stages, carried = t.bicorn_pipeline(cp, seq.bicorns)
    for st in stages:
        tr = st.collapsed.track
        assert tr.single_switch and st.switch_dual
        assert t.recurrence_report(tr).recurrent
    assert all(carried)


def test_vertex_cycle_is_not_switch_dual(pair_raw):
    cp = c.build_curve_pair(pair_raw("genus2_sample.json"))
    seq = c.nested_bicorn_sequence(cp)
    (st, *_), _ = t.bicorn_pipeline(cp, seq.bicorns)
    tr = st.collapsed.track
    cyc = next(iter(t.vertex_cycles(tr)))
    assert not t.is_switch_dual(cyc, tr)


def test_collapse_fixed_point(track_raw):
    tr = t.validate_track(track_raw("collapsed_00.json"))
    res = t.bigon_collapse(tr)
    assert t.canonical_form(res.track) == t.canonical_form(tr)


def test_curve_through_two_branches_is_not_switch_dual(torus):
    d = t.DualCurve(((t.BranchMeet(0, True), ()), (t.BranchMeet(1, True), ())))
    assert len(t.dual_meetings(torus, d)) == 2
    assert not t.is_switch_dual(d, torus)
