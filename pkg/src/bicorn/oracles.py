"""Brute-force reference computations, written independently of the main code.

They share no helpers with the modules they check: distances come from
networkx, hyperbolicity uses the Gromov-product form of the four-point
condition, and pairings are enumerated over all perfect matchings.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import networkx as nx


def to_networkx(g) -> nx.Graph:
    out = nx.Graph()
    out.add_nodes_from(g.vertices)
    for u, v, w in g.edges():
        out.add_edge(u, v, weight=Fraction(w))
    return out


def all_distances(g) -> dict:
    return dict(nx.all_pairs_dijkstra_path_length(to_networkx(g), weight="weight"))


def brute_delta(g) -> Fraction:
    """Least delta with (x.y)_w >= min((x.z)_w, (y.z)_w) - delta for all x, y, z, w."""
    d = all_distances(g)
    vs = list(g.vertices)

    def gp(w, x, y):
        return (d[w][x] + d[w][y] - d[x][y]) / 2

    best = Fraction(0)
    for w in vs:
        for x, y, z in itertools.product(vs, repeat=3):
            gap = min(gp(w, x, z), gp(w, y, z)) - gp(w, x, y)
            if gap > best:
                best = gap
    return best


def count_geodesics(g, u, v) -> int:
    return sum(1 for _ in nx.all_shortest_paths(to_networkx(g), u, v, weight="weight"))


def _perfect_matchings(items: list):
    if not items:
        yield []
        return
    first = items[0]
    for k in range(1, len(items)):
        rest = items[1:k] + items[k + 1 :]
        for m in _perfect_matchings(rest):
            yield [(first, items[k])] + m


def _linked(order: list, p, q) -> bool:
    """Chords p and q of a circle (points in cyclic ``order``) cross."""
    pos = {v: i for i, v in enumerate(order)}
    a, b = sorted((pos[p[0]], pos[p[1]]))
    inside = sum(a < pos[x] < b for x in q)
    return inside == 1


def brute_pairings(a_order: list, b_order: list) -> list[frozenset]:
    """All perfect matchings whose chords are pairwise unlinked on both circles."""
    out = []
    for m in _perfect_matchings(list(a_order)):
        ok = all(
            not _linked(a_order, p, q) and not _linked(b_order, p, q)
            for p, q in itertools.combinations(m, 2)
        )
        if ok:
            out.append(frozenset(frozenset(pr) for pr in m))
    return out
