import csv
import io
from fractions import Fraction

import networkx as nx
import pytest

from bicorn import coarse as co
from bicorn import models as mo
from bicorn.oracles import to_networkx
from bicorn.suite import data_text


def exact_word_length(n):
    """E|w_k| for k <= n, simple random walk on F(a, b), by exact recursion."""
    dist = {0: Fraction(1)}
    out = []
    for _ in range(n):
        nxt = {}
        for k, p in dist.items():
            if k == 0:
                nxt[1] = nxt.get(1, 0) + p
            else:
                nxt[k + 1] = nxt.get(k + 1, 0) + p * Fraction(3, 4)
                nxt[k - 1] = nxt.get(k - 1, 0) + p * Fraction(1, 4)
        dist = nxt
        out.append(sum(k * p for k, p in dist.items()))
    return out


def test_exact_word_length_small_cases():
    assert exact_word_length(3) == [1, Fraction(3, 2), Fraction(17, 8)]


@pytest.mark.parametrize("bound", [5, 8])
def test_farey_distances(bound):
    fb = mo.farey_ball(bound)
    g = to_networkx(fb.graph)
    assert nx.shortest_path_length(g, "0/1", "2/5") == co.distance(fb.graph, "0/1", "2/5") == 2
    assert co.distance(fb.graph, "0/1", "1/0") == 1
    assert co.distance(fb.graph, "1/2", "1/3") == 1


def test_farey_action_preserves_edges():
    fb = mo.farey_ball(4)
    f = fb.action(((1, 1), (0, 1)), "T")
    assert f.mapping["0/1"] == "1/1" and f.mapping["1/0"] == "1/0"
    assert f.check(fb.graph)
    with pytest.raises(co.CoarseError):
        fb.action(((2, 0), (0, 1)))


@pytest.mark.parametrize("radius", [2, 3, 5])
def test_tree_ball_size(radius):
    ball = mo.free_tree_ball(radius)
    assert len(ball.words) == 1 + 4 * (3**radius - 1) // 2
    assert nx.is_tree(to_networkx(ball.graph))


def test_tree_ball_too_small():
    with pytest.raises(mo.BoundTooSmall):
        mo.free_tree_ball(1)


def test_cosets():
    assert mo.reduce_word("baA") == "b"
    assert mo.coset_representative("abaa") == "ab"
    assert mo.coset_representative("aaa") == "e"
    ball = mo.free_tree_ball(3)
    fam = mo.coset_family(ball)
    # every word lies in exactly one coset
    assert sum(len(ys) for _, ys in fam.subsets) == len(ball.words)
    ident = dict(fam.subsets)["e<a>"]
    assert ident == frozenset({"e", "a", "aa", "aaa", "A", "AA", "AAA"})


def test_coset_chain_separation():
    ball = mo.free_tree_ball(8)
    words, fam = mo.coset_chain(ball, 2, 2, 2)
    assert words == ["AABBAABB", "AABB", "e", "bbaa", "bbaabbaa"]
    rep = co.separation_report(ball.graph, fam)
    assert rep.gaps == [2, 2, 2, 2]
    assert rep.well_separated == 2


def test_walk_spec_checks_probabilities():
    with pytest.raises(co.CoarseError):
        mo.WalkSpec((("a", 0.5), ("b", 0.4)), 5, 10)


def test_biased_line_walk():
    g = mo.line_graph(60)
    gens = {"R": mo.line_shift(60, 1), "L": mo.line_shift(60, -1)}
    rep = mo.estimate_drift(g, mo.WalkSpec((("R", 0.7), ("L", 0.3)), 50, 1500, seed=3), 0, gens, threshold=0.2)
    assert rep.censored == 0
    assert rep.slope == pytest.approx(0.4, abs=0.05)


def test_cycle_walk_has_no_drift():
    g = mo.cycle_graph(9)
    gens = {"r": mo.cycle_rotation(9, 1), "l": mo.cycle_rotation(9, -1)}
    rep = mo.estimate_drift(g, mo.WalkSpec.uniform("rl", 60, 400, seed=1), 0, gens)
    assert abs(rep.slope) < 0.05
    assert rep.mean_ratio[-1] < 0.1


def test_free_tree_drift_matches_exact_expectation():
    rows = list(csv.reader(io.StringIO(data_text("", "drift_free_tree.csv")), delimiter=","))
    assert rows[0][0].startswith("# seed=2024 kept=2000 censored=0")
    means = [float(r[1]) for r in rows[2:]]
    exact = exact_word_length(10)
    for m, e in zip(means, exact):
        assert abs(m - float(e)) < 0.15
    # long-run drift of the exact walk is 1/2
    assert float(exact[-1] - exact[-2]) == pytest.approx(0.5, abs=1e-3)


def test_drift_is_seeded():
    ball = mo.free_tree_ball(4)
    gens = {s: ball.left_action(s) for s in "aAbB"}
    spec = mo.WalkSpec.uniform("aAbB", 4, 200, seed=9)
    one = mo.estimate_drift(ball.graph, spec, mo.IDENTITY, gens).to_csv()
    two = mo.estimate_drift(ball.graph, spec, mo.IDENTITY, gens).to_csv()
    assert one == two


def test_all_trials_censored():
    g = mo.line_graph(2)
    gens = {"R": mo.line_shift(2, 1)}
    with pytest.raises(mo.AllTrialsCensored):
        mo.estimate_drift(g, mo.WalkSpec((("R", 1.0),), 5, 3), 0, gens)
