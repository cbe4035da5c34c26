"""Regenerate the shipped fixture files under src/bicorn/data.

Run from the repository root.  Everything is seeded, so rerunning produces
identical files.
"""

import json
import random
import sys
from pathlib import Path

import networkx as nx

from bicorn.coarse import MetricGraph, SubsetFamily, dump_graph
from bicorn.curvepair import (
    casson_long_pairing,
    CurvePairError,
    curve_surgery_sequence,
    dump_instance,
    from_signs,
    nested_bicorn_sequence,
    outermost_strategy,
)
from bicorn.generate import random_pair, random_trivalent_track, sample_pairs
from bicorn.models import coset_family, farey_ball, free_tree_ball
from bicorn.traintrack import TrackRegion, TrainTrack, bicorn_pipeline, canonical_form, dump_track, validate_track

DATA = Path("src/bicorn/data")


def write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text if text.endswith("\n") else text + "\n")


def pairs() -> None:
    pool = sample_pairs(11, 400, genus=(2, 2), sizes=(4, 6, 8), max_points=8)
    by_n = {}
    for cp in pool:
        by_n.setdefault(cp.n, cp)
    sample = next(
        cp for cp in pool if cp.n >= 6 and len(curve_surgery_sequence(cp, outermost_strategy)) >= 2
    )
    write(DATA / "pairs/genus2_sample.json", dump_instance(sample))
    write(DATA / "pairs/genus2_i2.json", dump_instance(by_n[2]))
    write(DATA / "pairs/genus2_i4.json", dump_instance(by_n[4]))
    write(DATA / "pairs/torus.json", dump_instance(from_signs([0], [0], {0: 1})))
    steps = len(curve_surgery_sequence(sample, outermost_strategy))
    print("genus2_sample steps", steps, file=sys.stderr)

    rng = random.Random(5)
    found, seen = [], set()
    for cp in sample_pairs(13, 80, genus=(1, 3), sizes=(2, 4, 6, 8, 10), max_points=10):
        if cp.key() not in seen:
            seen.add(cp.key())
            found.append(cp)
    zero = [0]
    while len(found) < 160:
        cp = random_pair(rng, rng.choice((4, 6, 8, 10)))
        if cp is None or cp.key() in seen:
            continue
        if casson_long_pairing(cp).count == 0:
            zero[0] += 1
        elif len(found) - zero[0] > 120:
            continue
        seen.add(cp.key())
        found.append(cp)
    doc = [cp.to_raw() for cp in found]
    write(DATA / "pairs/casson_long.json", json.dumps(doc, sort_keys=True, indent=1))


def tracks() -> None:
    theta = TrainTrack(
        {0: (((0, 0),), ((1, 0), (2, 0))), 1: (((0, 1),), ((1, 1), (2, 1)))},
        (TrackRegion(0, ((0, 0),), 1),),
    )
    torus = TrainTrack({0: (((0, 0), (1, 0)), ((0, 1), (1, 1)))}, (TrackRegion(0, ((0, 0),), 1),))
    write(DATA / "tracks/theta.json", dump_track(validate_track(theta)))
    write(DATA / "tracks/torus_one_switch.json", dump_track(validate_track(torus)))
    rng = random.Random(5)
    kept, forms = 0, set()
    while kept < 40:
        t = random_trivalent_track(rng, rng.choice((2, 4, 6)))
        if t is None:
            continue
        form = canonical_form(t)
        if form in forms:
            continue
        forms.add(form)
        write(DATA / f"tracks/trivalent_{kept:02d}.json", dump_track(t))
        kept += 1
    kept = 0
    for cp in sample_pairs(17, 60):
        try:
            seq = nested_bicorn_sequence(cp)
        except CurvePairError:
            continue
        stages, _ = bicorn_pipeline(cp, seq.bicorns)
        for st in stages:
            form = canonical_form(st.collapsed.track)
            if form in forms:
                continue
            forms.add(form)
            write(DATA / f"tracks/collapsed_{kept:02d}.json", dump_track(st.collapsed.track))
            kept += 1
        if kept >= 10:
            break


def _graph(name: str, g: MetricGraph, subsets: dict) -> None:
    write(DATA / f"graphs/{name}.json", dump_graph(g, SubsetFamily.of(subsets) if subsets else None))


def _from_nx(h: nx.Graph, lengths=None) -> MetricGraph:
    verts = [str(v) for v in h.nodes]
    edges = [(str(u), str(v), (lengths or {}).get((u, v), 1)) for u, v in h.edges]
    return MetricGraph(verts, edges)


def graphs() -> None:
    path = MetricGraph([f"v{i}" for i in range(5)], [(f"v{i}", f"v{i+1}") for i in range(4)])
    _graph("path5", path, {"all": path.vertices})
    for n in (6, 8, 10):
        c = _from_nx(nx.cycle_graph(n))
        _graph(f"cycle{n}", c, {"antipodes": ["0", str(n // 2)], "arc": [str(i) for i in range(n // 2)]})
    _graph("star6", _from_nx(nx.star_graph(5)), {"leaves": ["1", "2", "3"]})
    _graph("binary7", _from_nx(nx.balanced_tree(2, 2)), {"left": ["1", "3", "4"], "leaves": ["3", "4", "5", "6"]})
    _graph("petersen", _from_nx(nx.petersen_graph()), {"outer": [str(i) for i in range(5)]})
    grid = nx.convert_node_labels_to_integers(nx.grid_2d_graph(3, 4))
    _graph("grid3x4", _from_nx(grid), {"row": ["0", "1", "2", "3"], "corners": ["0", "3", "8", "11"]})
    _graph("k4", _from_nx(nx.complete_graph(4)), {"pair": ["0", "1"]})
    _graph("k33", _from_nx(nx.complete_bipartite_graph(3, 3)), {"side": ["0", "1", "2"]})
    half = nx.cycle_graph(5)
    _graph("halfint5", _from_nx(half, {(0, 1): 1.5, (1, 2): 0.5, (2, 3): 2.5}), {"gap": ["0", "3"]})
    fb = farey_ball(2)
    _graph("farey2", fb.graph, {"integers": [s for s, (p, q) in fb.slopes.items() if q == 1]})
    tb = free_tree_ball(2)
    _graph("freetree2", tb.graph, dict(coset_family(tb).subsets))
    rng = random.Random(3)
    made = 0
    while made < 8:
        n = rng.randint(6, 12)
        h = nx.gnp_random_graph(n, rng.uniform(0.25, 0.5), seed=rng.randrange(10**6))
        if not nx.is_connected(h):
            continue
        k = rng.randint(2, max(2, n // 2))
        sub = [str(v) for v in sorted(rng.sample(range(n), k))]
        _graph(f"random{made}", _from_nx(h), {"y": sub})
        made += 1
    for i in range(4):
        n = rng.randint(7, 12)
        h = nx.random_labeled_tree(n, seed=rng.randrange(10**6)) if hasattr(nx, "random_labeled_tree") else nx.random_tree(n, seed=rng.randrange(10**6))
        sub = [str(v) for v in sorted(rng.sample(range(n), 3))]
        _graph(f"tree{i}", _from_nx(h), {"y": sub})


def regression() -> None:
    """Measure and freeze the regression values checked by the suite."""
    from bicorn.suite import model_regression

    for name, text in model_regression().items():
        write(DATA / name, text)


if __name__ == "__main__":
    pairs()
    tracks()
    graphs()
    if "--regression" in sys.argv:
        regression()
