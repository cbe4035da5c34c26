"""Electrified graphs and coarse-geometric diagnostics on finite graphs.

All edge lengths are half-integers.  Internally every length is doubled so
that shortest paths use exact integer arithmetic; public functions report
halved values, which are exact as floats.
"""

from __future__ import annotations

import heapq
import io
import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

INF = float("inf")


class CoarseError(ValueError):
    pass


class Disconnected(CoarseError):
    pass


class EmptySubset(CoarseError):
    pass


class SampleBudgetZero(CoarseError):
    pass


class FamilyTooSmall(CoarseError):
    pass


class EmptyProjection(CoarseError):
    pass


class PathTooShort(CoarseError):
    pass


class OrbitEscapesDomain(CoarseError):
    def __init__(self, msg: str, valid: int):
        super().__init__(msg)
        self.valid = valid


class NegativeEntry(CoarseError):
    pass


def _double(length) -> int:
    d = 2 * length
    if d != int(d) or d <= 0:
        raise CoarseError(f"edge length {length} is not a positive half-integer")
    return int(d)


def _half(d2: int) -> float:
    return d2 / 2 if d2 != INF else INF


@dataclass(frozen=True)
class Cone:
    """Cone vertex added for one subset of an electrified family."""

    name: str

    def __str__(self) -> str:
        return f"cone:{self.name}"


class MetricGraph:
    """Undirected graph with half-integer edge lengths, immutable once built."""

    def __init__(self, vertices: Iterable[Hashable], edges: Iterable, connected: bool = True):
        self.vertices: tuple = tuple(dict.fromkeys(vertices))
        self.index = {v: i for i, v in enumerate(self.vertices)}
        self.nbrs: list[list[tuple[int, int]]] = [[] for _ in self.vertices]
        self._len2: dict[tuple[int, int], int] = {}
        for e in edges:
            u, v = e[0], e[1]
            w2 = _double(e[2] if len(e) > 2 else 1)
            if u not in self.index or v not in self.index:
                raise CoarseError(f"edge {u}-{v} has an unknown endpoint")
            i, j = self.index[u], self.index[v]
            if i == j:
                raise CoarseError(f"loop at {u}")
            key = (min(i, j), max(i, j))
            if key in self._len2:
                if self._len2[key] <= w2:
                    continue
                self.nbrs[i] = [(k, w) for k, w in self.nbrs[i] if k != j]
                self.nbrs[j] = [(k, w) for k, w in self.nbrs[j] if k != i]
            self._len2[key] = w2
            self.nbrs[i].append((j, w2))
            self.nbrs[j].append((i, w2))
        self._cache: dict[int, list] = {}
        if connected and self.vertices and INF in self.sssp2(self.vertices[0]):
            raise Disconnected("graph is not connected")

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v) -> bool:
        return v in self.index

    def edges(self) -> list[tuple]:
        """Edges as (u, v, length) in insertion order of the first endpoint."""
        out = []
        for (i, j), w2 in sorted(self._len2.items()):
            out.append((self.vertices[i], self.vertices[j], _half(w2)))
        return out

    def length(self, u, v) -> float:
        i, j = self.index[u], self.index[v]
        return _half(self._len2[(min(i, j), max(i, j))])

    def neighbours(self, v) -> list:
        return [self.vertices[j] for j, _ in self.nbrs[self.index[v]]]

    def sssp2(self, src) -> list:
        """Doubled distances from ``src`` to every vertex (cached)."""
        i = self.index[src]
        hit = self._cache.get(i)
        if hit is None:
            hit = self._dijkstra([i])
            self._cache[i] = hit
        return hit

    def _dijkstra(self, sources: Sequence[int]) -> list:
        dist = [INF] * len(self.vertices)
        heap = []
        for s in sources:
            dist[s] = 0
            heap.append((0, s))
        heapq.heapify(heap)
        nbrs = self.nbrs
        while heap:
            d, i = heapq.heappop(heap)
            if d > dist[i]:
                continue
            for j, w in nbrs[i]:
                nd = d + w
                if nd < dist[j]:
                    dist[j] = nd
                    heapq.heappush(heap, (nd, j))
        return dist

    def set_dist2(self, sources: Iterable) -> list:
        """Doubled distance from a vertex set to every vertex."""
        idx = [self.index[v] for v in sources]
        if not idx:
            raise EmptySubset("empty source set")
        return self._dijkstra(idx)


@dataclass(frozen=True)
class SubsetFamily:
    subsets: tuple  # (name, frozenset) pairs, in declaration order
    q: float | None = None

    @classmethod
    def of(cls, named: Mapping[str, Iterable] | Sequence[Iterable], q: float | None = None):
        if isinstance(named, Mapping):
            items = [(str(k), frozenset(v)) for k, v in named.items()]
        else:
            items = [(f"Y{i}", frozenset(v)) for i, v in enumerate(named)]
        for name, ys in items:
            if not ys:
                raise EmptySubset(f"subset {name} is empty")
        return cls(tuple(items), q)

    def names(self) -> list[str]:
        return [n for n, _ in self.subsets]

    def __getitem__(self, name: str) -> frozenset:
        for n, ys in self.subsets:
            if n == name:
                return ys
        raise KeyError(name)

    def __len__(self) -> int:
        return len(self.subsets)


class ElectrifiedGraph(MetricGraph):
    """Base graph plus one cone vertex per subset, joined by edges of length 1/2."""

    def __init__(self, base: MetricGraph, family: SubsetFamily):
        self.base = base
        self.family = family
        self.cones = {name: Cone(name) for name in family.names()}
        verts = list(base.vertices) + list(self.cones.values())
        edges = list(base.edges())
        for name, ys in family.subsets:
            for y in sorted(ys, key=base.index.__getitem__):
                edges.append((y, self.cones[name], 0.5))
        super().__init__(verts, edges, connected=False)

    def project(self, vs: Iterable) -> list:
        """The projection to the electrified graph is the vertex inclusion."""
        return list(vs)


def electrify(x: MetricGraph, ys: SubsetFamily) -> ElectrifiedGraph:
    for name, sub in ys.subsets:
        if not sub:
            raise EmptySubset(f"subset {name} is empty")
        missing = [v for v in sub if v not in x]
        if missing:
            raise CoarseError(f"subset {name} has vertices outside the graph: {missing[:3]}")
    return ElectrifiedGraph(x, ys)


def distance(g: MetricGraph, u, v) -> float:
    d2 = g.sssp2(u)[g.index[v]]
    if d2 == INF:
        raise Disconnected(f"{u} and {v} lie in different components")
    return _half(d2)


def diameter(g: MetricGraph, vs: Iterable) -> float:
    vs = list(vs)
    best = 0
    for u in vs:
        row = g.sssp2(u)
        for v in vs:
            if row[g.index[v]] == INF:
                raise Disconnected(f"{u} and {v} lie in different components")
            best = max(best, row[g.index[v]])
    return _half(best)


@dataclass
class GeodesicDag:
    source: Hashable
    target: Hashable
    length: float
    succ: dict  # vertex -> list of next vertices on some geodesic

    def vertices(self) -> list:
        seen = [self.source]
        for v in seen:
            for w in self.succ.get(v, ()):
                if w not in seen:
                    seen.append(w)
        return seen

    def count(self) -> int:
        memo = {self.target: 1}

        def go(v):
            if v not in memo:
                memo[v] = sum(go(w) for w in self.succ[v])
            return memo[v]

        return go(self.source)

    def canonical_path(self) -> list:
        """The geodesic that always steps to the earliest listed successor."""
        path = [self.source]
        while path[-1] != self.target:
            path.append(self.succ[path[-1]][0])
        return path


def geodesic_dag(g: MetricGraph, u, v) -> GeodesicDag:
    du, dv = g.sssp2(u), g.sssp2(v)
    total = du[g.index[v]]
    if total == INF:
        raise Disconnected(f"{u} and {v} lie in different components")
    succ = {}
    for i, x in enumerate(g.vertices):
        if du[i] + dv[i] != total:
            continue
        succ[x] = [g.vertices[j] for j, w in g.nbrs[i] if du[i] + w == du[j] and du[j] + dv[j] == total]
    return GeodesicDag(u, v, _half(total), succ)


def geodesic(g: MetricGraph, u, v) -> list:
    return geodesic_dag(g, u, v).canonical_path()


# -- hyperbolicity ------------------------------------------------------------


def gromov_product(g: MetricGraph, p, x, y) -> float:
    return (distance(g, p, x) + distance(g, p, y) - distance(g, x, y)) / 2


def _dist_matrix2(g: MetricGraph, vs: Sequence) -> list[list[int]]:
    rows = []
    for u in vs:
        row = g.sssp2(u)
        rows.append([row[g.index[v]] for v in vs])
    if any(INF in r for r in rows):
        raise Disconnected("graph is not connected")
    return rows


def _defect2(d, x, y, z, w) -> int:
    s = sorted((d[x][y] + d[z][w], d[x][z] + d[y][w], d[x][w] + d[y][z]))
    return s[2] - s[1]


@dataclass
class DeltaReport:
    delta: float
    mode: str
    examined: int
    witness: tuple | None


def delta_four_point(
    g: MetricGraph, mode: str = "exhaustive", samples: int = 10000, seed: int = 0
) -> DeltaReport:
    """Four-point hyperbolicity constant.

    The defect of a quadruple is half the gap between the two largest of the
    three pairings' distance sums; delta is its maximum.
    """
    vs = list(g.vertices)
    d = _dist_matrix2(g, vs)
    n = len(vs)
    best, witness, count = 0, None, 0
    if mode == "exhaustive":
        quads = itertools.combinations(range(n), 4)
    elif mode == "sampled":
        if samples <= 0:
            raise SampleBudgetZero("sampled mode needs a positive sample budget")
        if n < 4:
            quads = iter(())
        else:
            rng = random.Random(seed)
            quads = (tuple(rng.sample(range(n), 4)) for _ in range(samples))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    for q in quads:
        count += 1
        dd = _defect2(d, *q)
        if witness is None or dd > best:
            best, witness = dd, tuple(vs[i] for i in q)
    # defect is half the gap of doubled sums, then halve the doubling
    return DeltaReport(best / 4, mode, count, witness)


# -- quasiconvexity and projections -----------------------------------------------


def quasiconvexity_constant(g: MetricGraph, ys: Iterable) -> float:
    """Smallest Q with every geodesic between points of Y inside N_Q(Y)."""
    ys = list(dict.fromkeys(ys))
    if not ys:
        raise EmptySubset("empty subset")
    to_y = g.set_dist2(ys)
    rows = [g.sssp2(y) for y in ys]
    best = 0
    for a in range(len(ys)):
        ra = rows[a]
        for b in range(a + 1, len(ys)):
            rb = rows[b]
            total = ra[g.index[ys[b]]]
            if total == INF:
                raise Disconnected(f"{ys[a]} and {ys[b]} lie in different components")
            for i in range(len(g.vertices)):
                if ra[i] + rb[i] == total and to_y[i] > best:
                    best = to_y[i]
    return _half(best)


def nearest_point_projection(g: MetricGraph, source: Iterable, target: Iterable) -> list:
    """Points of ``target`` nearest to some point of ``source``, in graph order."""
    target = list(dict.fromkeys(target))
    if not target:
        raise EmptySubset("empty target set")
    tidx = [g.index[t] for t in target]
    hits = set()
    for s in dict.fromkeys(source):
        row = g.sssp2(s)
        m = min(row[i] for i in tidx)
        if m == INF:
            raise EmptyProjection(f"{s} cannot reach the target set")
        hits.update(i for i in tidx if row[i] == m)
    if not hits:
        raise EmptyProjection("empty source set")
    return [g.vertices[i] for i in sorted(hits)]


def projection_diameter(g: MetricGraph, source: Iterable, target: Iterable) -> float:
    return diameter(g, nearest_point_projection(g, source, target))


def set_distance(g: MetricGraph, xs: Iterable, ys: Iterable) -> float:
    row = g.set_dist2(xs)
    m = min(row[g.index[y]] for y in ys)
    if m == INF:
        raise Disconnected("sets lie in different components")
    return _half(m)


@dataclass
class SeparationReport:
    well_separated: float  # L*
    y_separated: float | None  # M*
    gaps: list  # d(Z_i, Z_{i+1})
    projection_gaps: list  # d(pi_i(Z_{i-1}), pi_i(Z_{i+1}))
    electrified_gaps: list


def separation_report(
    g: MetricGraph, family: Sequence[Iterable], electrified: ElectrifiedGraph | None = None
) -> SeparationReport:
    zs = [list(z) for z in family]
    if len(zs) < 3:
        raise FamilyTooSmall(f"need at least 3 sets, got {len(zs)}")
    for k, z in enumerate(zs):
        if not z:
            raise EmptySubset(f"set {k} is empty")
    gaps = [set_distance(g, zs[i], zs[i + 1]) for i in range(len(zs) - 1)]
    pgaps = []
    for i in range(1, len(zs) - 1):
        back = nearest_point_projection(g, zs[i - 1], zs[i])
        fwd = nearest_point_projection(g, zs[i + 1], zs[i])
        pgaps.append(set_distance(g, back, fwd))
    egaps, m_star = [], None
    if electrified is not None:
        if electrified.base is not g and electrified.base.vertices != g.vertices:
            raise CoarseError("electrified graph is built over a different base")
        egaps = [
            set_distance(electrified, electrified.project(zs[i]), electrified.project(zs[i + 1]))
            for i in range(len(zs) - 1)
        ]
        m_star = min(egaps)
    return SeparationReport(min(gaps + pgaps), m_star, gaps, pgaps, egaps)


# -- paths -----------------------------------------------------------------------------


@dataclass
class PathRecord:
    vertices: list
    segments: list  # (start index, end index, length)
    corners: list  # indices into vertices
    corner_products: list  # Gromov product at each interior corner
    constants: tuple | None = None  # (K*, c*)
    notes: list = field(default_factory=list)

    def length(self) -> float:
        return sum(s[2] for s in self.segments)

    def corner_points(self) -> list:
        return [self.vertices[i] for i in self.corners]


def _arc_params2(g: MetricGraph, path: Sequence) -> list[int]:
    s = [0]
    for u, v in zip(path, path[1:]):
        if u == v:
            s.append(s[-1])
            continue
        i, j = g.index[u], g.index[v]
        w = g._len2.get((min(i, j), max(i, j)))
        if w is None:
            raise CoarseError(f"{u} and {v} are not adjacent")
        s.append(s[-1] + w)
    return s


def piecewise_geodesic(g: MetricGraph, family: Sequence[Iterable]) -> PathRecord:
    """Concatenate geodesics through nearest-point projections of consecutive sets.

    In Z_i the path enters at p_i (the projection of Z_{i-1}) and leaves at
    q_i (the projection of Z_{i+1}); the first set only has q_0 and the last
    only has p_k.  The earliest vertex of each projection is used.
    """
    zs = [list(z) for z in family]
    if len(zs) < 2:
        raise FamilyTooSmall("need at least 2 sets")
    notes = []
    corners_v = []
    for i, z in enumerate(zs):
        if i > 0:
            corners_v.append(nearest_point_projection(g, zs[i - 1], z)[0])
        if i < len(zs) - 1:
            corners_v.append(nearest_point_projection(g, zs[i + 1], z)[0])
    if len(zs) >= 3:
        rep = separation_report(g, zs)
        if rep.well_separated <= 0:
            notes.append("family is not well-separated")
    verts, segs, corners = [corners_v[0]], [], [0]
    for u, v in zip(corners_v, corners_v[1:]):
        start = len(verts) - 1
        if u != v:
            verts.extend(geodesic(g, u, v)[1:])
        segs.append((start, len(verts) - 1, distance(g, u, v)))
        corners.append(len(verts) - 1)
    prods = [
        gromov_product(g, corners_v[k], corners_v[k - 1], corners_v[k + 1])
        for k in range(1, len(corners_v) - 1)
    ]
    rec = PathRecord(verts, segs, corners, prods, notes=notes)
    rec.constants = quasigeodesic_constants(g, verts) if len(verts) >= 2 else (1.0, 0.0)
    return rec


def _pair_table(g: MetricGraph, path: Sequence, params2: Sequence[int]):
    n = len(path)
    rows = {v: g.sssp2(v) for v in dict.fromkeys(path)}
    for i in range(n):
        row = rows[path[i]]
        for j in range(i + 1, n):
            d2 = row[g.index[path[j]]]
            if d2 == INF:
                raise Disconnected(f"{path[i]} and {path[j]} lie in different components")
            yield abs(params2[j] - params2[i]), d2


def quasigeodesic_constants(g: MetricGraph, path: Sequence, params2: Sequence[int] | None = None):
    """Measured (K*, c*) with |s-t|/K - c <= d <= K|s-t| + c on all vertex pairs.

    K* is the least slope that works with no additive error on pairs at
    positive distance (at least 1); c* is the least additive error for that
    slope, forced by pairs the path revisits.
    """
    if len(path) < 2:
        raise PathTooShort("a path needs at least 2 vertices")
    if params2 is None:
        params2 = _arc_params2(g, path)
    pairs = list(_pair_table(g, path, params2))
    k = 1.0
    for ds, d in pairs:
        if d > 0:
            k = max(k, ds / d, d / ds if ds else INF)
    c = 0.0
    for ds, d in pairs:
        c = max(c, ds / 2 / k - d / 2, d / 2 - k * ds / 2)
    return k, c


def _qg_ok(pairs, k: float, c: float, window2: float = INF) -> bool:
    eps = 1e-9
    for ds, d in pairs:
        if ds > window2:
            continue
        s, dd = ds / 2, d / 2
        if dd < s / k - c - eps or dd > k * s + c + eps:
            return False
    return True


def local_qg_check(g: MetricGraph, path: Sequence, k: float, c: float, window: float) -> bool:
    """True when every subpath of length at most ``window`` is a (K, c)-quasigeodesic."""
    if len(path) < 2:
        raise PathTooShort("a path needs at least 2 vertices")
    params2 = _arc_params2(g, path)
    return _qg_ok(_pair_table(g, path, params2), k, c, 2 * window)


def contract_path(g_elec: MetricGraph, path: Sequence) -> list:
    """Greedily collapse maximal subsegments of electrified diameter at most 1."""
    out, start = [], 0
    while start < len(path):
        end = start + 1
        block = [path[start]]
        while end < len(path):
            if diameter(g_elec, block + [path[end]]) > 1:
                break
            block.append(path[end])
            end += 1
        out.append(path[start])
        start = end
    return out


def reparam_constants(g_elec: MetricGraph, path: Sequence):
    """(K*, c*) of the contracted path parameterised by unit steps."""
    seq = contract_path(g_elec, path)
    if len(seq) < 2:
        return 1.0, 0.0
    return quasigeodesic_constants(g_elec, seq, [2 * i for i in range(len(seq))])


def reparam_qg_check(g_elec: MetricGraph, path: Sequence, k: float, c: float) -> bool:
    if len(path) < 2:
        raise PathTooShort("a path needs at least 2 vertices")
    seq = contract_path(g_elec, path)
    if len(seq) < 2:
        return True
    return _qg_ok(_pair_table(g_elec, seq, [2 * i for i in range(len(seq))]), k, c)


# -- isometries ----------------------------------------------------------------------


@dataclass(frozen=True)
class GraphAutomorphism:
    """Vertex map preserving edges and lengths; ``partial`` maps cover only a ball."""

    mapping: Mapping
    partial: bool = False
    name: str = "f"

    def __call__(self, v):
        try:
            return self.mapping[v]
        except KeyError:
            raise OrbitEscapesDomain(f"{self.name} is undefined at {v}", 0) from None

    def check(self, g: MetricGraph) -> bool:
        if not self.partial and set(self.mapping) != set(g.vertices):
            return False
        for u, v, w in g.edges():
            if u in self.mapping and v in self.mapping:
                fu, fv = self.mapping[u], self.mapping[v]
                i, j = g.index.get(fu), g.index.get(fv)
                if i is None or j is None:
                    return False
                if g._len2.get((min(i, j), max(i, j))) != 2 * w:
                    return False
        return True


def lifted(f: GraphAutomorphism, g: ElectrifiedGraph) -> GraphAutomorphism:
    """Extend f to cone vertices when it permutes the coned subsets."""
    by_set = {ys: name for name, ys in g.family.subsets}
    mapping = dict(f.mapping)
    for name, ys in g.family.subsets:
        if all(y in f.mapping for y in ys):
            img = frozenset(f.mapping[y] for y in ys)
            if img in by_set:
                mapping[g.cones[name]] = g.cones[by_set[img]]
    return GraphAutomorphism(mapping, True, f.name)


@dataclass
class TranslationReport:
    ns: list
    displacements: list  # d(x0, f^n x0)
    ratios: list  # d(x0, f^n x0) / n
    tail_slope: float
    loxodromic: bool
    valid: int


def tail_slope(ns: Sequence[int], ds: Sequence[float]) -> float:
    """Least-squares slope over the last half of the sequence."""
    k = len(ns) // 2
    xs, ys = list(ns[k:]), list(ds[k:])
    if len(xs) < 2:
        return ys[-1] / xs[-1] if xs and xs[-1] else 0.0
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx


def translation_length(
    g: MetricGraph,
    f: GraphAutomorphism,
    x0,
    n: int,
    threshold: float = 0.0,
    truncate: bool = False,
) -> TranslationReport:
    """Displacements d(x0, f^k x0) for k = 1..n and their tail slope.

    When the orbit leaves the domain of a partial map, OrbitEscapesDomain is
    raised with the largest valid k, unless ``truncate`` is set.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    row = g.sssp2(x0)
    ns, ds = [], []
    x = x0
    for k in range(1, n + 1):
        if x not in f.mapping:
            if not truncate or k == 1:
                raise OrbitEscapesDomain(f"orbit of {x0} leaves the domain after {k - 1} steps", k - 1)
            break
        x = f.mapping[x]
        if x not in g.index:
            if not truncate or k == 1:
                raise OrbitEscapesDomain(f"orbit of {x0} leaves the graph after {k - 1} steps", k - 1)
            break
        d2 = row[g.index[x]]
        if d2 == INF:
            raise Disconnected(f"{x0} and {x} lie in different components")
        ns.append(k)
        ds.append(_half(d2))
    slope = tail_slope(ns, ds)
    return TranslationReport(ns, ds, [d / k for k, d in zip(ns, ds)], slope, slope > threshold, len(ns))


def cutoff_sum(table: Mapping | Sequence, m: float) -> float:
    """Sum of the entries that are at least ``m``."""
    if m < 0:
        raise ValueError("cutoff must be nonnegative")
    values = list(table.values()) if isinstance(table, Mapping) else list(table)
    for v in values:
        if v < 0:
            raise NegativeEntry(f"negative entry {v}")
    return sum(v for v in values if v >= m)


# -- file formats ------------------------------------------------------------------


def _label(v) -> str:
    return str(v)


def dump_graph(g: MetricGraph, family: SubsetFamily | None = None) -> str:
    """JSON text with ``vertices``, ``edges`` and ``subsets``."""
    doc = {
        "vertices": [_label(v) for v in g.vertices],
        "edges": [[_label(u), _label(v), w] for u, v, w in g.edges()],
        "subsets": {},
    }
    if family is not None:
        doc["subsets"] = {
            name: sorted((_label(v) for v in ys), key=lambda s: g.index.get(s, 0)) for name, ys in family.subsets
        }
        if family.q is not None:
            doc["q"] = family.q
    return json.dumps(doc, indent=1) + "\n"


def load_graph(text: str) -> tuple[MetricGraph, SubsetFamily]:
    doc = json.loads(text)
    try:
        verts = [str(v) for v in doc["vertices"]]
        edges = [(str(e[0]), str(e[1]), e[2] if len(e) > 2 else 1) for e in doc["edges"]]
    except (KeyError, TypeError, IndexError) as exc:
        raise CoarseError(f"malformed graph file: {exc}") from None
    g = MetricGraph(verts, edges)
    fam = SubsetFamily.of({k: [str(v) for v in vs] for k, vs in doc.get("subsets", {}).items()}, doc.get("q"))
    for name, ys in fam.subsets:
        for y in ys:
            if y not in g:
                raise CoarseError(f"subset {name} names unknown vertex {y}")
    return g, fam


def dump_automorphism(f: GraphAutomorphism) -> str:
    rows = [[_label(k), _label(v)] for k, v in f.mapping.items()]
    return json.dumps({"name": f.name, "partial": f.partial, "map": rows}, indent=1) + "\n"


def load_automorphism(text: str) -> GraphAutomorphism:
    doc = json.loads(text)
    return GraphAutomorphism({str(k): str(v) for k, v in doc["map"]}, bool(doc.get("partial")), doc.get("name", "f"))


def to_dot(g: MetricGraph) -> str:
    out = io.StringIO()
    out.write("graph G {\n")
    for v in g.vertices:
        style = ' [shape=box, style=filled, fillcolor="lightgrey"]' if isinstance(v, Cone) else ""
        out.write(f'  "{_label(v)}"{style};\n')
    for u, v, w in g.edges():
        style = ", style=dashed" if isinstance(u, Cone) or isinstance(v, Cone) else ""
        out.write(f'  "{_label(u)}" -- "{_label(v)}" [label="{_fmt(w)}"{style}];\n')
    out.write("}\n")
    return out.getvalue()


def _fmt(x) -> str:
    if isinstance(x, float) and x.is_integer():
        return str(int(x))
    return repr(x) if isinstance(x, float) else str(x)


def csv_rows(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [",".join(header)]
    for r in rows:
        lines.append(",".join(_fmt(x) for x in r))
    return "\n".join(lines) + "\n"
