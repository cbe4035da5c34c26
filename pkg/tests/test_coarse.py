from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bicorn import coarse as co
from bicorn.models import cycle_graph, cycle_rotation, line_graph, line_shift
from bicorn.oracles import all_distances, brute_delta, count_geodesics
from bicorn.suite import data_text


def path(n):
    return co.MetricGraph([f"v{i}" for i in range(n)], [(f"v{i}", f"v{i + 1}") for i in range(n - 1)])


def fixture(name):
    return co.load_graph(data_text("graphs", name))


def test_coned_path():
    g = path(5)
    e = co.electrify(g, co.SubsetFamily.of({"all": g.vertices}))
    assert co.distance(g, "v0", "v4") == 4
    assert co.distance(e, "v0", "v4") == 1


def test_empty_family_is_isometric():
    g, _ = fixture("petersen.json")
    e = co.electrify(g, co.SubsetFamily.of({}))
    for u in g.vertices:
        for v in g.vertices:
            assert co.distance(e, u, v) == co.distance(g, u, v)


@pytest.mark.parametrize("name", ["grid3x4.json", "binary7.json", "random0.json", "farey2.json"])
def test_electrification_against_oracle(name):
    g, fam = fixture(name)
    e = co.electrify(g, fam)
    base, el = all_distances(g), all_distances(e)
    for u in g.vertices:
        for v in g.vertices:
            assert co.distance(g, u, v) == base[u][v]
            assert co.distance(e, u, v) == el[u][v] <= base[u][v]


def test_antipodal_geodesics_on_hexagon():
    g = cycle_graph(6)
    dag = co.geodesic_dag(g, 0, 3)
    assert co.distance(g, 0, 3) == 3
    assert dag.count() == count_geodesics(g, 0, 3) == 2


def test_disconnected_distance():
    g = co.MetricGraph([0, 1, 2], [(0, 1)], connected=False)
    with pytest.raises(co.Disconnected):
        co.distance(g, 0, 2)


def test_delta_octagon():
    g = cycle_graph(8)
    rep = co.delta_four_point(g, "exhaustive")
    assert rep.delta == brute_delta(g) == 2


@pytest.mark.parametrize("name", ["binary7.json", "tree0.json", "tree1.json", "star6.json", "path5.json"])
def test_delta_tree_zero(name):
    g, _ = fixture(name)
    assert co.delta_four_point(g, "exhaustive").delta == 0


@pytest.mark.parametrize("name", ["petersen.json", "k33.json", "grid3x4.json", "random1.json", "halfint5.json"])
def test_delta_matches_oracle(name):
    g, _ = fixture(name)
    assert Fraction(co.delta_four_point(g, "exhaustive").delta) == brute_delta(g)


def test_sampled_delta_is_lower_bound():
    g, _ = fixture("random2.json")
    exact = co.delta_four_point(g, "exhaustive").delta
    rep = co.delta_four_point(g, "sampled", samples=300, seed=5)
    assert rep.delta <= exact and rep.examined == 300
    assert co.delta_four_point(g, "sampled", samples=300, seed=5) == rep
    with pytest.raises(co.SampleBudgetZero):
        co.delta_four_point(g, "sampled", samples=0)


def test_quasiconvexity():
    g = path(6)
    assert co.quasiconvexity_constant(g, g.vertices) == 0
    assert co.quasiconvexity_constant(g, ["v1", "v2", "v3"]) == 0
    # antipodal pairs on even cycles: 8 -> 2, 10 -> 2, 12 -> 3
    for n, q in [(8, 2), (10, 2), (12, 3)]:
        assert co.quasiconvexity_constant(cycle_graph(n), [0, n // 2]) == q


def test_projections_in_a_path():
    g = path(11)
    ys = [["v0", "v1", "v2"], ["v5", "v6", "v7"], ["v9", "v10"]]
    assert co.nearest_point_projection(g, ys[0], ys[0]) == ys[0]
    assert co.projection_diameter(g, ys[0], ys[0]) == 2
    assert co.nearest_point_projection(g, ys[0], ys[1]) == ["v5"]
    assert co.projection_diameter(g, ys[0], ys[1]) == 0
    assert co.set_distance(g, ys[0], ys[1]) == 3


def test_separation_in_a_path():
    g = path(16)
    spaced = [["v0", "v1", "v2"], [f"v{i}" for i in range(5, 11)], ["v13", "v14", "v15"]]
    rep = co.separation_report(g, spaced)
    assert rep.gaps == [3, 3] and rep.projection_gaps == [5]
    assert rep.well_separated >= 3
    overlapping = [["v0", "v1", "v2"], ["v2", "v3"], ["v3", "v4"]]
    assert co.separation_report(g, overlapping).well_separated == 0


def test_piecewise_geodesic_in_a_tree():
    g = path(11)
    two = co.piecewise_geodesic(g, [["v0"], ["v3"]])
    assert two.vertices == ["v0", "v1", "v2", "v3"]
    rec = co.piecewise_geodesic(g, [["v0", "v1"], ["v4", "v5"], ["v8", "v9"]])
    assert rec.constants == (1, 0)
    assert co.distance(g, rec.vertices[0], rec.vertices[-1]) == rec.length()


def test_quasigeodesic_constants():
    g = path(6)
    assert co.quasigeodesic_constants(g, ["v0", "v1", "v2", "v3"]) == (1, 0)
    k, c = co.quasigeodesic_constants(g, ["v0", "v1", "v2", "v3", "v2", "v1", "v0"])
    assert c >= 6 or k > 1


def test_translation_on_a_line():
    rep = co.translation_length(line_graph(30), line_shift(30, 1), 0, 20)
    assert rep.displacements == list(range(1, 21))
    assert rep.tail_slope == pytest.approx(1)


def test_rotation_has_zero_translation():
    rep = co.translation_length(cycle_graph(12), cycle_rotation(12, 2), 0, 60)
    assert abs(rep.tail_slope) < 0.05 and not rep.loxodromic


def test_orbit_escape():
    with pytest.raises(co.OrbitEscapesDomain) as err:
        co.translation_length(line_graph(5), line_shift(5, 1), 0, 10)
    assert err.value.valid == 5
    rep = co.translation_length(line_graph(5), line_shift(5, 1), 0, 10, truncate=True)
    assert rep.valid == 5


@pytest.mark.parametrize("table, m, total", [((3, 7, 2), 5, 7), ((3, 7, 2), 0, 12), ((), 5, 0), ({"x": 4, "y": 5}, 5, 5)])
def test_cutoff_sum(table, m, total):
    assert co.cutoff_sum(table, m) == total


def test_cutoff_sum_rejects_negative():
    with pytest.raises(co.NegativeEntry):
        co.cutoff_sum((1, -2), 0)


def test_graph_round_trip():
    g, fam = fixture("grid3x4.json")
    text = co.dump_graph(g, fam)
    g2, fam2 = co.load_graph(text)
    assert co.dump_graph(g2, fam2) == text


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 12), st.lists(st.integers(0, 11), min_size=1, max_size=5))
def test_electrified_never_longer(n, ys):
    g = cycle_graph(n)
    e = co.electrify(g, co.SubsetFamily.of({"y": sorted({y % n for y in ys})}))
    for u in range(n):
        assert co.distance(e, 0, u) <= co.distance(g, 0, u)
