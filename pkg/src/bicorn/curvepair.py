"""Pairs of simple closed curves on a closed oriented surface.

A pair (a, b) in general position is stored as a 4-valent ribbon graph: the
cyclic order of the intersection points along each curve, plus a crossing
sign at each point.  The sign fixes the rotation at the vertex.  With sign +1
the counter-clockwise order of half-edges is ``a+ b+ a- b-`` (b crosses a
from right to left); with sign -1 it is ``a+ b- a- b+``.

Half-edges are called darts and written ``(v, kind)``.  Faces are traced so
that the face lies to the left of every dart.  Complementary regions that are
not discs (which happens once curves stop filling, e.g. after surgery) are
carried as ``Region`` records; any face not named by a region is a disc.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from ._uf import ChiUnionFind

KINDS = ("a+", "a-", "b+", "b-")
ROT = {1: ("a+", "b+", "a-", "b-"), -1: ("a+", "b-", "a-", "b+")}
FLIP = {"a+": "a-", "a-": "a+", "b+": "b-", "b-": "b+"}


class CurvePairError(ValueError):
    pass


class NonAlternatingRotation(CurvePairError):
    pass


class DisconnectedCurve(CurvePairError):
    pass


class BigonPresent(CurvePairError):
    def __init__(self, face, msg: str = ""):
        self.face = face
        super().__init__(msg or f"bigon face {face}")


class EulerMismatch(CurvePairError):
    pass


class NonOrientableSmoothing(CurvePairError):
    pass


class NoIntersections(CurvePairError):
    pass


class NotReturning(CurvePairError):
    pass


class InessentialResult(CurvePairError):
    pass


class StrategyStuck(CurvePairError):
    pass


class OddIntersection(CurvePairError):
    pass


class TooLarge(CurvePairError):
    pass


class NoNonRectangularFace(CurvePairError):
    pass


class NoReturningArcForBicorn(CurvePairError):
    pass


@dataclass(frozen=True)
class Region:
    chi: int
    faces: tuple  # canonical first dart of each boundary cycle

    @property
    def genus(self) -> int:
        return (2 - self.chi - len(self.faces)) // 2


@dataclass(frozen=True)
class Subarc:
    curve: str  # "A" or "B"
    start: int
    end: int
    steps: int = 1  # number of edges, walking forward from start

    def vertices(self, cp: "CurvePair") -> list[int]:
        step = cp.next_a if self.curve == "A" else cp.next_b
        out = [self.start]
        for _ in range(self.steps):
            out.append(step(out[-1]))
        return out

    def interior(self, cp: "CurvePair") -> list[int]:
        return self.vertices(cp)[1:-1]

    def darts(self, cp: "CurvePair") -> list[tuple]:
        kind = "a+" if self.curve == "A" else "b+"
        return [(v, kind) for v in self.vertices(cp)[:-1]]


@dataclass(frozen=True)
class ReturningArc:
    arc: Subarc
    side: str  # "left" or "right" of a


@dataclass(frozen=True)
class Face:
    index: int
    darts: tuple
    word: tuple  # innermost subarcs (curve, start, end) around the face
    kind: str  # bigon | rectangle | non-rectangle | non-disc
    region: int
    chi: int


@dataclass(frozen=True, eq=False)
class CurvePair:
    a_cycle: tuple
    b_cycle: tuple
    signs: Mapping[int, int]
    genus: int
    regions: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "a_cycle", tuple(self.a_cycle))
        object.__setattr__(self, "b_cycle", tuple(self.b_cycle))
        object.__setattr__(self, "signs", dict(self.signs))
        object.__setattr__(self, "_apos", {v: i for i, v in enumerate(self.a_cycle)})
        object.__setattr__(self, "_bpos", {v: i for i, v in enumerate(self.b_cycle)})

    # -- basic structure ------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.a_cycle)

    @property
    def vertices(self) -> list[int]:
        return sorted(self.a_cycle)

    @property
    def rotations(self) -> dict[int, tuple]:
        return {v: ROT[self.signs[v]] for v in self.vertices}

    def next_a(self, v):
        return self.a_cycle[(self._apos[v] + 1) % self.n]

    def prev_a(self, v):
        return self.a_cycle[self._apos[v] - 1]

    def next_b(self, v):
        return self.b_cycle[(self._bpos[v] + 1) % self.n]

    def prev_b(self, v):
        return self.b_cycle[self._bpos[v] - 1]

    def a_index(self, v) -> int:
        return self._apos[v]

    def b_index(self, v) -> int:
        return self._bpos[v]

    def opposite(self, d):
        v, k = d
        if k == "a+":
            return (self.next_a(v), "a-")
        if k == "a-":
            return (self.prev_a(v), "a+")
        if k == "b+":
            return (self.next_b(v), "b-")
        return (self.prev_b(v), "b+")

    def pred(self, d):
        """Clockwise neighbour of a dart at its vertex."""
        rot = ROT[self.signs[d[0]]]
        return (d[0], rot[rot.index(d[1]) - 1])

    def succ(self, d):
        rot = ROT[self.signs[d[0]]]
        return (d[0], rot[(rot.index(d[1]) + 1) % 4])

    def darts(self) -> list:
        return [(v, k) for v in self.vertices for k in KINDS]

    # -- faces and regions ------------------------------------------------
    @cached_property
    def face_cycles(self) -> list[tuple]:
        seen, cycles = set(), []
        for d in self.darts():
            if d in seen:
                continue
            cyc, cur = [], d
            while cur not in seen:
                seen.add(cur)
                cyc.append(cur)
                cur = self.pred(self.opposite(cur))
            i = cyc.index(min(cyc))
            cycles.append(tuple(cyc[i:] + cyc[:i]))
        cycles.sort()
        return cycles

    @cached_property
    def face_of(self) -> dict:
        return {d: i for i, cyc in enumerate(self.face_cycles) for d in cyc}

    @cached_property
    def region_table(self) -> tuple[list[int], list[list[int]]]:
        """(chi per region, face indices per region)."""
        firsts = {cyc[0]: i for i, cyc in enumerate(self.face_cycles)}
        chis, members, claimed = [], [], set()
        for reg in self.regions or ():
            idx = []
            for d in reg.faces:
                d = (d[0], d[1])
                if d not in self.face_of:
                    raise EulerMismatch(f"region names unknown face {d}")
                fi = self.face_of[d]
                if fi in claimed:
                    raise EulerMismatch(f"face {fi} claimed twice")
                claimed.add(fi)
                idx.append(fi)
            chis.append(reg.chi)
            members.append(sorted(idx))
        for cyc in self.face_cycles:
            fi = firsts[cyc[0]]
            if fi not in claimed:
                chis.append(1)
                members.append([fi])
        return chis, members

    @cached_property
    def face_region(self) -> list[int]:
        out = [0] * len(self.face_cycles)
        for r, idx in enumerate(self.region_table[1]):
            for fi in idx:
                out[fi] = r
        return out

    def region_of_dart(self, d) -> int:
        return self.face_region[self.face_of[d]]

    def euler_characteristic(self) -> int:
        if self.n == 0:
            return 2 - 2 * self.genus
        return self.n - 2 * self.n + sum(self.region_table[0])

    def is_disc_face(self, fi: int) -> bool:
        r = self.face_region[fi]
        chis, members = self.region_table
        return chis[r] == 1 and len(members[r]) == 1

    def bigon_faces(self) -> list[int]:
        return [
            fi
            for fi, cyc in enumerate(self.face_cycles)
            if len(cyc) == 2 and self.is_disc_face(fi)
        ]

    def walk_a(self) -> list:
        return [(v, "a+") for v in self.a_cycle]

    def walk_b(self) -> list:
        return [(v, "b+") for v in self.b_cycle]

    def key(self) -> tuple:
        regs = tuple(sorted((r.chi, tuple(sorted(r.faces))) for r in (self.regions or ())))
        return (
            self.a_cycle,
            self.b_cycle,
            tuple(self.signs[v] for v in self.a_cycle),
            self.genus,
            regs,
        )

    def to_raw(self) -> dict:
        raw = {
            "vertices": self.vertices,
            "a_cycle": list(self.a_cycle),
            "b_cycle": list(self.b_cycle),
            "rotations": {str(v): list(ROT[self.signs[v]]) for v in self.vertices},
            "genus": self.genus,
        }
        if self.regions:
            nondisc = [r for r in self.regions if not (r.chi == 1 and len(r.faces) == 1)]
            if nondisc:
                raw["regions"] = [
                    {"chi": r.chi, "faces": [list(d) for d in r.faces]} for r in nondisc
                ]
        return raw


# -- construction --------------------------------------------------------


def _parse_rotation(v, labels) -> int:
    if isinstance(labels, int) and labels in (1, -1):
        return labels
    labels = list(labels)
    if sorted(labels) != sorted(KINDS):
        raise NonAlternatingRotation(f"vertex {v}: labels {labels}")
    curves = [lab[0] for lab in labels]
    if curves[0] == curves[1] or curves[1] == curves[2] or curves[2] == curves[3]:
        raise NonAlternatingRotation(f"vertex {v}: rotation {labels} does not alternate")
    i = labels.index("a+")
    r = labels[i:] + labels[:i]
    return 1 if r[1] == "b+" else -1


def build_curve_pair(raw: Mapping, allow_bigons: bool = False) -> CurvePair:
    """Validate a raw rotation-system description and return a CurvePair."""
    verts = [int(v) for v in raw.get("vertices", [])]
    a_cycle = [int(v) for v in raw.get("a_cycle", [])]
    b_cycle = [int(v) for v in raw.get("b_cycle", [])]
    vset = set(verts)
    if len(vset) != len(verts):
        raise DisconnectedCurve("repeated vertex id")
    for name, cyc in (("a", a_cycle), ("b", b_cycle)):
        if len(cyc) != len(set(cyc)) or set(cyc) != vset:
            raise DisconnectedCurve(f"{name}_cycle must visit every vertex exactly once")
    rots = {int(k): val for k, val in dict(raw.get("rotations", {})).items()}
    if set(rots) != vset:
        raise NonAlternatingRotation("rotation data missing for some vertices")
    signs = {v: _parse_rotation(v, rots[v]) for v in verts}
    declared = raw.get("genus")
    regions = None
    if raw.get("regions"):
        regions = tuple(
            Region(int(r["chi"]), tuple((int(d[0]), str(d[1])) for d in r["faces"]))
            for r in raw["regions"]
        )
    if not verts:
        if declared is None or int(declared) < 1:
            raise EulerMismatch("disjoint curves need a declared genus >= 1")
        return CurvePair((), (), {}, int(declared))
    probe = CurvePair(a_cycle, b_cycle, signs, 0, regions)
    chi = probe.euler_characteristic()
    if chi % 2:
        raise EulerMismatch(f"odd Euler characteristic {chi}")
    genus = (2 - chi) // 2
    if declared is not None and int(declared) != genus:
        raise EulerMismatch(f"declared genus {declared} but faces give {genus}")
    if genus < 0:
        raise EulerMismatch(f"negative genus {genus}")
    cp = CurvePair(a_cycle, b_cycle, signs, genus, regions)
    _check_regions(cp)
    if not allow_bigons:
        bad = cp.bigon_faces()
        if bad:
            raise BigonPresent(bad[0])
    return cp


def _check_regions(cp: CurvePair) -> None:
    chis, members = cp.region_table
    for chi, idx in zip(chis, members):
        top = 2 - chi - len(idx)
        if top < 0 or top % 2:
            raise EulerMismatch(f"region with chi={chi} and {len(idx)} boundary cycles")


def from_signs(a_cycle, b_cycle, signs, genus=None, regions=None, allow_bigons=False):
    raw = {
        "vertices": sorted(a_cycle),
        "a_cycle": list(a_cycle),
        "b_cycle": list(b_cycle),
        "rotations": {v: int(signs[v]) for v in a_cycle},
    }
    if genus is not None:
        raw["genus"] = genus
    if regions:
        raw["regions"] = [{"chi": r.chi, "faces": [list(d) for d in r.faces]} for r in regions]
    return build_curve_pair(raw, allow_bigons=allow_bigons)


def load_instance(path: str) -> CurvePair:
    with open(path) as fh:
        return build_curve_pair(json.load(fh))


def dump_instance(cp: CurvePair) -> str:
    return json.dumps(cp.to_raw(), sort_keys=True, indent=1)


def to_dot(cp: CurvePair, name: str = "curvepair") -> str:
    lines = [f"graph {name} {{"]
    for v in cp.vertices:
        lines.append(f'  v{v} [label="{v}{"+" if cp.signs[v] > 0 else "-"}"];')
    for curve, cyc, colour in (("a", cp.a_cycle, "red"), ("b", cp.b_cycle, "blue")):
        for i, v in enumerate(cyc):
            w = cyc[(i + 1) % len(cyc)]
            lines.append(f'  v{v} -- v{w} [color={colour}, label="{curve}{i}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- face census ---------------------------------------------------------


def faces(cp: CurvePair) -> list[Face]:
    if cp.n == 0:
        return [
            Face(0, (), (("A", None, None),), "non-disc", 0, 0),
            Face(1, (), (("B", None, None),), "non-disc", 1, 0),
        ]
    chis, members = cp.region_table
    out = []
    for fi, cyc in enumerate(cp.face_cycles):
        word = tuple(
            (d[1][0].upper(), d[0], cp.opposite(d)[0]) for d in cyc
        )
        r = cp.face_region[fi]
        if chis[r] == 1 and len(members[r]) == 1:
            kind = {2: "bigon", 4: "rectangle"}.get(len(cyc), "non-rectangle")
        else:
            kind = "non-disc"
        out.append(Face(fi, cyc, word, kind, r, chis[r]))
    return out


def euler_ok(cp: CurvePair) -> bool:
    return cp.euler_characteristic() == 2 - 2 * cp.genus


# -- bigon removal ---------------------------------------------------------


def _rebuild(old: CurvePair, keep: list, uf: ChiUnionFind, cell_of) -> CurvePair:
    """New pair on vertices ``keep`` whose regions come from ``uf``.

    ``cell_of`` maps a dart of the new pair to a cell key in ``uf``.
    """
    keep_set = set(keep)
    a_cycle = list(keep)
    b_cycle = [v for v in old.b_cycle if v in keep_set]
    signs = {v: old.signs[v] for v in a_cycle}
    if not a_cycle:
        return CurvePair((), (), {}, old.genus)
    bare = CurvePair(a_cycle, b_cycle, signs, old.genus)
    by_root: dict = {}
    for cyc in bare.face_cycles:
        roots = {uf.find(cell_of(d)) for d in cyc}
        if len(roots) != 1:
            raise RuntimeError(f"face {cyc[0]} straddles regions {sorted(roots)}")
        by_root.setdefault(roots.pop(), []).append(cyc[0])
    live = set(by_root)
    if live != set(uf.roots()):
        raise RuntimeError("a complementary region lost all of its boundary")
    regions = tuple(Region(uf.chi[r], tuple(by_root[r])) for r in sorted(live))
    out = CurvePair(a_cycle, b_cycle, signs, old.genus, regions)
    _check_regions(out)
    if not euler_ok(out):
        raise RuntimeError("Euler characteristic not preserved")
    return out


def remove_bigon(cp: CurvePair, fi: int) -> CurvePair:
    cyc = cp.face_cycles[fi]
    if len(cyc) != 2 or not cp.is_disc_face(fi):
        raise ValueError(f"face {fi} is not a bigon")
    d1, d2 = cyc
    u, w = d1[0], d2[0]
    if u == w or cp.signs[u] == cp.signs[w]:
        raise NonOrientableSmoothing(f"bigon at {u},{w} cannot be resmoothed")
    uf = ChiUnionFind()
    chis = cp.region_table[0]
    for r, chi in enumerate(chis):
        uf.add(r, chi)
    reg = cp.region_of_dart
    uf.glue(reg(d1), reg(cp.opposite(d1)))
    uf.glue(reg((u, FLIP[d1[1]])), reg((w, FLIP[d2[1]])))
    keep = [v for v in cp.a_cycle if v not in (u, w)]
    return _rebuild(cp, keep, uf, reg)


def reduce_to_minimal_position(cp: CurvePair) -> CurvePair:
    """Remove bigons one at a time (lowest face first) until none remain."""
    cur = cp
    while cur.n:
        bad = cur.bigon_faces()
        if not bad:
            break
        cur = remove_bigon(cur, bad[0])
    return cur


# -- crossings between closed walks ------------------------------------------


def _edge(cp: CurvePair, d) -> tuple:
    return min(d, cp.opposite(d))


def _ccw_between(cp: CurvePair, v, start, stop) -> set:
    rot = ROT[cp.signs[v]]
    i = rot.index(start[1])
    out = set()
    for step in range(1, 4):
        k = rot[(i + step) % 4]
        if k == stop[1]:
            break
        out.add((v, k))
    return out


def crossing_count(cp: CurvePair, p: Sequence, q: Sequence) -> int:
    """Transverse crossings between two simple closed walks in the a/b graph.

    Walks are cyclic lists of departing darts.  Shared stretches count as a
    crossing only when the walks leave them on opposite sides.
    """
    p, q = list(p), list(q)
    q_edges = {_edge(cp, d) for d in q}
    q_rays: dict = {}
    for i, d in enumerate(q):
        q_rays.setdefault(d[0], set()).update({d, cp.opposite(q[i - 1])})
    p_in = {i: cp.opposite(p[i - 1]) for i in range(len(p))}
    shared = [_edge(cp, d) in q_edges for d in p]
    if all(shared):
        return 0
    total = 0
    for i, d in enumerate(p):
        v = d[0]
        if v not in q_rays or shared[i - 1]:
            continue
        j = i
        while shared[j]:
            j = (j + 1) % len(p)
        if j == i:
            rot = ROT[cp.signs[v]]
            marks = ["p" if (v, k) in (d, p_in[i]) else "q" for k in rot]
            if marks in (["p", "q", "p", "q"], ["q", "p", "q", "p"]):
                total += 1
            continue
        e = p[j][0]
        r_s = d
        (q_s,) = q_rays[v] - {r_s}
        left_s = p_in[i] in _ccw_between(cp, v, r_s, q_s)
        r_e = p_in[j]
        (q_e,) = q_rays[e] - {r_e}
        left_e = p[j] in _ccw_between(cp, e, q_e, r_e)
        if left_s != left_e:
            total += 1
    return total


# -- returning arcs and surgery ------------------------------------------------


def returning_arcs(cp: CurvePair) -> list[ReturningArc]:
    if cp.n == 0:
        raise NoIntersections("curves are disjoint")
    out = []
    for i, x in enumerate(cp.b_cycle):
        y = cp.next_b(x)
        if cp.signs[x] != cp.signs[y]:
            side = "left" if cp.signs[x] > 0 else "right"
            out.append(ReturningArc(Subarc("B", x, y, 1), side))
    return out


def innermost_b_arcs(cp: CurvePair) -> list[Subarc]:
    return [Subarc("B", x, cp.next_b(x), 1) for x in cp.b_cycle]


@dataclass
class SurgeryRecord:
    new_curve_pair: CurvePair
    c_vs_a_disjoint: bool
    i_c_b: int
    piece: Subarc
    arc: Subarc
    unreduced: CurvePair | None = None
    c_walk: list = field(default_factory=list)
    crossing: bool = False


def _a_piece(cp: CurvePair, p, q) -> list:
    out = [p]
    while True:
        out.append(cp.next_a(out[-1]))
        if out[-1] == q:
            return out


def arc_surgery(cp: CurvePair, arc, choice: str = "left_piece") -> SurgeryRecord:
    """Surgery of a along a returning innermost arc of b.

    ``left_piece`` keeps the subarc of a that leaves the first endpoint of the
    arc in the positive direction of a; ``right_piece`` keeps the other one.
    The new curve c is oriented along a and pushed off a onto the side where
    the arc lies, so c meets b exactly at the interior points of the piece.
    """
    sub = arc.arc if isinstance(arc, ReturningArc) else arc
    if cp.n == 0:
        raise NoIntersections("curves are disjoint")
    if sub.curve != "B" or sub.steps != 1 or cp.next_b(sub.start) != sub.end:
        raise NotReturning(f"{sub} is not an innermost arc of b")
    x, y = sub.start, sub.end
    if cp.signs[x] == cp.signs[y]:
        raise NotReturning(f"arc {x}->{y} crosses from one side of a to the other")
    if choice not in ("left_piece", "right_piece"):
        raise ValueError(f"unknown choice {choice!r}")
    s = "L" if cp.signs[x] > 0 else "R"
    p, q = (x, y) if choice == "left_piece" else (y, x)
    alpha = _a_piece(cp, p, q)
    inner = alpha[1:-1]
    m = len(inner)
    beta_p = (p, "b+" if p == x else "b-")
    beta_q = (q, "b+" if q == x else "b-")
    if s == "L":
        ok = cp.pred(beta_p) == (p, "a+") and cp.pred((q, "a-")) == beta_q
        hug_beta = beta_q
        hugged = {(v, "a+"): k for k, v in enumerate(alpha[:-1])}
    else:
        ok = cp.pred((p, "a+")) == beta_p and cp.pred(beta_q) == (q, "a-")
        hug_beta = beta_p
        hugged = {(v, "a-"): k for k, v in enumerate(alpha[1:])}
    if not ok:
        raise RuntimeError("corner data inconsistent with a returning arc")
    c_walk = [(v, "a+") for v in alpha[:-1]] + [beta_q]
    disjoint = crossing_count(cp, c_walk, cp.walk_a()) == 0
    if crossing_count(cp, c_walk, cp.walk_b()) != m:
        raise RuntimeError("push-off of the surgery curve meets b unexpectedly")

    chis = cp.region_table[0]
    reg = cp.region_of_dart

    close = max(m - 1, 0)

    def strip_of_edge(k: int) -> int:
        return close if k in (0, m) else k - 1

    def cell(d):
        if d in hugged:
            return ("strip", strip_of_edge(hugged[d]))
        if d == hug_beta:
            return ("strip", close)
        return ("core", reg(d))

    uf = ChiUnionFind()
    for r, chi in enumerate(chis):
        uf.add(("core", r), chi)
    for j in range(max(m, 1)):
        # with no interior points the collar between c and the piece is an annulus
        uf.add(("strip", j), 1 if m else 0)
    for v in cp.a_cycle:
        d = (v, "a+")
        uf.glue(cell(d), cell(cp.opposite(d)))

    if m == 0:
        side_uf = uf
        for v in cp.b_cycle:
            d = (v, "b+")
            side_uf.glue(cell(d), cell(cp.opposite(d)))
        for v in cp.a_cycle:
            side_uf.bump(cell((v, "b+")), 1)
        comps = [side_uf.chi[r] for r in side_uf.roots()]
        _check_sides(cp, comps)
        new = CurvePair((), (), {}, cp.genus)
        return SurgeryRecord(new, disjoint, 0, Subarc("A", p, q, len(alpha) - 1), sub, new, c_walk)

    pos = {u: j for j, u in enumerate(inner)}

    def new_cell(d):
        u, k = d
        j = pos[u]
        if k == "a+":
            return ("core", reg((u, "a+"))) if s == "L" else ("strip", j)
        if k == "a-":
            return ("strip", (j - 1) % m) if s == "L" else ("core", reg((u, "a-")))
        return ("core", reg(d))

    raw = _rebuild(cp, inner, uf, new_cell)
    side_uf = ChiUnionFind()
    rchis = raw.region_table[0]
    for r, chi in enumerate(rchis):
        side_uf.add(r, chi)
    for v in raw.b_cycle:
        d = (v, "b+")
        side_uf.glue(raw.region_of_dart(d), raw.region_of_dart(raw.opposite(d)))
    _check_sides(cp, [side_uf.chi[r] for r in side_uf.roots()])
    reduced = reduce_to_minimal_position(raw)
    piece = Subarc("A", p, q, len(alpha) - 1)
    return SurgeryRecord(reduced, disjoint, reduced.n, piece, sub, raw, c_walk)


def crossing_arc_surgery(cp: CurvePair, arc, choice: str = "left_piece") -> SurgeryRecord:
    """Surgery of a along an innermost arc of b that crosses a.

    The arc leaves a on one side and comes back from the other, so the
    surgery curve cannot be pushed off a: it follows the piece on the side
    where the arc leaves its first end, crosses the other ray of b at the far
    end of the piece, and then crosses a once.  Combinatorially (c, b) is the
    old pair restricted to the piece without its first point.  ``left_piece``
    runs forward along a from the arc's start; for a one-point pair it is
    the empty piece, whose surgery curve is a parallel copy of b, while
    ``right_piece`` is all of a and leaves the pair unchanged.
    """
    sub = arc.arc if isinstance(arc, ReturningArc) else arc
    if cp.n == 0:
        raise NoIntersections("curves are disjoint")
    if sub.curve != "B" or sub.steps != 1 or cp.next_b(sub.start) != sub.end:
        raise NotReturning(f"{sub} is not an innermost arc of b")
    x, y = sub.start, sub.end
    if cp.signs[x] != cp.signs[y]:
        raise NotReturning(f"arc {x}->{y} is returning; use arc_surgery")
    if choice not in ("left_piece", "right_piece"):
        raise ValueError(f"unknown choice {choice!r}")
    if x == y:
        if choice == "left_piece":
            new = CurvePair((), (), {}, cp.genus)
            piece = Subarc("A", x, x, 0)
            return SurgeryRecord(new, False, 0, piece, sub, new, [(x, "b+")], crossing=True)
        # the piece is all of a and c is the twist of a along b, so (c, b) is
        # a copy of (a, b) and the intersection number does not drop
        walk = [(x, "a+"), (x, "b+")]
        return SurgeryRecord(cp, False, 1, Subarc("A", x, x, 1), sub, cp, walk, crossing=True)
    p, q = (x, y) if choice == "left_piece" else (y, x)
    alpha = _a_piece(cp, p, q)
    inner = alpha[1:-1]
    m = len(inner)
    beta_p = (p, "b+" if p == x else "b-")
    beta_q = (q, "b-" if q == y else "b+")
    north = {v: ("b+" if cp.signs[v] > 0 else "b-") for v in (p, q)}
    s = "L" if beta_p[1] == north[p] else "R"
    s_ray = (q, FLIP[beta_q[1]])
    c_walk = [(v, "a+") for v in alpha[:-1]] + [beta_q]
    disjoint = crossing_count(cp, c_walk, cp.walk_a()) == 0
    if crossing_count(cp, c_walk, cp.walk_b()) != m + 1:
        raise RuntimeError("surgery curve meets b unexpectedly")

    chis = cp.region_table[0]
    reg = cp.region_of_dart
    uf = ChiUnionFind()
    for r, chi in enumerate(chis):
        uf.add(("core", r), chi)
    for j in range(m + 1):
        uf.add(("strip", j), 1)
    uf.add(("tip",), 1)
    piece_side = {}
    for j, v in enumerate(alpha[:-1]):
        d = (v, "a+") if s == "L" else cp.opposite((v, "a+"))
        piece_side[d] = ("strip", j)
    out_edge = (q, "a+")
    for v in cp.a_cycle:
        d = (v, "a+")
        if d == out_edge:
            uf.glue(("tip",), ("strip", 0))
            uf.glue(("core", reg(d)), ("core", reg(cp.opposite(d))))
            continue
        left = piece_side.get(d, ("core", reg(d)))
        od = cp.opposite(d)
        right = piece_side.get(od, ("core", reg(od)))
        uf.glue(left, right)

    pos = {u: j + 1 for j, u in enumerate(inner)}
    pos[q] = m + 1

    def new_cell(d):
        u, k = d
        j = pos[u]
        if u == q:
            ray = "N" if k == north[q] else ("S" if k[0] == "b" else k)
            corner = {"a+": "NE", "N": "NW", "a-": "SW", "S": "SE"}[ray]
            outer = {"L": ("NE", "NW"), "R": ("SE", "SW")}[s]
            if corner in outer:
                return ("core", reg(d))
            if corner in ("SW", "NW"):
                return ("strip", m)
            return ("tip",)
        if k == "a+":
            return ("core", reg(d)) if s == "L" else ("strip", j)
        if k == "a-":
            return ("strip", j - 1) if s == "L" else ("core", reg(d))
        return ("core", reg(d))

    keep = inner + [q]
    raw = _rebuild(cp, keep, uf, new_cell)
    side_uf = ChiUnionFind()
    for r, chi in enumerate(raw.region_table[0]):
        side_uf.add(r, chi)
    for v in raw.b_cycle:
        d = (v, "b+")
        side_uf.glue(raw.region_of_dart(d), raw.region_of_dart(raw.opposite(d)))
    _check_sides(cp, [side_uf.chi[r] for r in side_uf.roots()])
    reduced = reduce_to_minimal_position(raw)
    piece = Subarc("A", p, q, len(alpha) - 1)
    return SurgeryRecord(reduced, disjoint, reduced.n, piece, sub, raw, c_walk, crossing=True)


def _check_sides(cp: CurvePair, comps: list[int]) -> None:
    if sum(comps) != 2 - 2 * cp.genus:
        raise RuntimeError("complement of the surgery curve has the wrong Euler characteristic")
    if any(c == 1 for c in comps):
        raise InessentialResult("surgery curve bounds a disc")


def default_strategy(cp: CurvePair, arcs: list[ReturningArc]):
    if not arcs:
        return None
    return min(arcs, key=lambda r: (cp.b_index(r.arc.start), r.arc.start))


def disc_pairings(cp: CurvePair) -> list[tuple]:
    """Unlinked pairings in which every pair has opposite crossing signs.

    Two discs with these boundary curves would meet in arcs realising such a
    pairing, so this is the certificate used by ``outermost_strategy``.
    """
    if cp.n % 2:
        return []
    out = []
    for m in _noncrossing(list(cp.a_cycle)):
        if all(cp.signs[u] != cp.signs[v] for u, v in m) and _unlinked_on(cp.b_cycle, m):
            out.append(tuple(sorted(tuple(sorted(pr)) for pr in m)))
    return out


def outermost_strategy(cp: CurvePair, arcs: list[ReturningArc]):
    """Prefer arcs whose endpoints are paired by a disc pairing.

    These play the role of outermost arcs of a disc: both ends of the arc
    bound a half-disc, so the surgered curve inherits a pairing.  Falls back
    to the default order when no certificate exists.
    """
    paired = {pr for m in disc_pairings(cp) for pr in m}
    good = [r for r in arcs if tuple(sorted((r.arc.start, r.arc.end))) in paired]
    return default_strategy(cp, good or arcs)


@dataclass
class SurgerySequence:
    curves: list  # CurvePair (a_i, b) for each i
    steps: list  # SurgeryRecord per step

    @property
    def intersections(self) -> list[int]:
        return [c.n for c in self.curves]

    def __len__(self) -> int:
        return len(self.steps)


def _crossing_fallback(cp: CurvePair, choice: str) -> SurgeryRecord:
    """Surgery along the first innermost arc of b when every arc crosses a."""
    other = "right_piece" if choice == "left_piece" else "left_piece"
    for v in cp.b_cycle:
        arc = Subarc("B", v, cp.next_b(v), 1)
        for ch in (choice, other):
            rec = crossing_arc_surgery(cp, arc, ch)
            if rec.i_c_b < cp.n:
                return rec
    raise StrategyStuck(f"no innermost arc of b reduces i={cp.n}")


def curve_surgery_sequence(
    cp: CurvePair,
    strategy: Callable | None = None,
    choice: str = "left_piece",
) -> SurgerySequence:
    """Repeated surgery of a along b until the current curve misses b."""
    strategy = strategy or default_strategy
    curves, steps = [cp], []
    cur = cp
    while cur.n:
        arcs = returning_arcs(cur)
        if not arcs:
            rec = _crossing_fallback(cur, choice)
            steps.append(rec)
            cur = rec.new_curve_pair
            curves.append(cur)
            continue
        pick = strategy(cur, arcs)
        if pick is None:
            raise StrategyStuck(f"strategy declined all {len(arcs)} returning arcs at i={cur.n}")
        this_choice = choice
        if isinstance(pick, tuple):
            pick, this_choice = pick
        rec = arc_surgery(cur, pick, this_choice)
        if rec.i_c_b >= cur.n:
            raise StrategyStuck("surgery did not reduce intersection number")
        steps.append(rec)
        cur = rec.new_curve_pair
        curves.append(cur)
    return SurgerySequence(curves, steps)


# -- Casson-Long pairings ---------------------------------------------------------


@dataclass(frozen=True)
class Pairing:
    matching: tuple  # sorted tuple of (u, v) with u < v


@dataclass
class PairingResult:
    pairing: Pairing | None
    count: int


def chords_interleave(order: Sequence, c1, c2) -> bool:
    pos = {v: i for i, v in enumerate(order)}
    lo, hi = sorted((pos[c1[0]], pos[c1[1]]))
    inside = [lo < pos[w] < hi for w in c2]
    return inside[0] != inside[1]


def _noncrossing(seq: list):
    if not seq:
        yield []
        return
    for k in range(1, len(seq), 2):
        for left in _noncrossing(seq[1:k]):
            for right in _noncrossing(seq[k + 1 :]):
                yield [(seq[0], seq[k])] + left + right


def _unlinked_on(order: Sequence, matching) -> bool:
    pos = {v: i for i, v in enumerate(order)}
    arcs = [tuple(sorted((pos[u], pos[v]))) for u, v in matching]
    arcs.sort()
    stack: list[int] = []
    for lo, hi in arcs:
        while stack and stack[-1] < lo:
            stack.pop()
        if stack and stack[-1] < hi:
            return False
        stack.append(hi)
    return True


def casson_long_pairing(cp: CurvePair, limit: int = 16) -> PairingResult:
    """Perfect matchings of a∩b unlinked along both a and b."""
    if cp.n % 2:
        raise OddIntersection(f"{cp.n} intersection points")
    if cp.n > limit:
        raise TooLarge(f"{cp.n} points exceeds search bound {limit}")
    first, count = None, 0
    for m in _noncrossing(list(cp.a_cycle)):
        if _unlinked_on(cp.b_cycle, m):
            count += 1
            if first is None:
                first = Pairing(tuple(sorted(tuple(sorted(pr)) for pr in m)))
    return PairingResult(first, count)


# -- bicorns ---------------------------------------------------------------------


@dataclass(frozen=True)
class Bicorn:
    a_arc: Subarc
    b_arc: Subarc

    def walk(self, cp: CurvePair) -> list:
        out = self.a_arc.darts(cp)
        bv = self.b_arc.vertices(cp)
        if bv[-1] == self.a_arc.end:
            out += [(v, "b-") for v in reversed(bv[1:])]
        else:
            out += [(v, "b+") for v in bv[:-1]]
        return out

    def endpoints(self) -> tuple:
        return (self.a_arc.start, self.a_arc.end)

    def is_embedded(self, cp: CurvePair) -> bool:
        av, bv = self.a_arc.vertices(cp), self.b_arc.vertices(cp)
        if {av[0], av[-1]} != {bv[0], bv[-1]} or av[0] == av[-1]:
            return False
        verts = [d[0] for d in self.walk(cp)]
        return len(verts) == len(set(verts))


@dataclass
class BicornSequence:
    bicorns: list
    alpha: tuple  # the a-edge avoided by every a_i, as its starting dart
    nondegenerate: list
    disjoint_next: list  # crossing count between c_i and c_{i+1} is zero
    final_misses_b: bool


def _piece_avoiding(cp: CurvePair, x, y, alpha_start) -> Subarc:
    fwd = _a_piece(cp, x, y)
    if alpha_start in fwd[:-1]:
        bwd = _a_piece(cp, y, x)
        return Subarc("A", y, x, len(bwd) - 1)
    return Subarc("A", x, y, len(fwd) - 1)


def nondegenerate(cp: CurvePair, a_arc: Subarc, census: list | None = None) -> bool:
    census = census if census is not None else faces(cp)
    inside = {(v, "a+") for v in a_arc.vertices(cp)[:-1]}
    for f in census:
        if f.kind == "rectangle":
            continue
        for d in f.darts:
            if d[1][0] == "a":
                e = d if d[1] == "a+" else cp.opposite(d)
                if e not in inside:
                    return True
    return False


def bicorn_returning_arcs(cp: CurvePair, a_arc: Subarc) -> list[Subarc]:
    """Subarcs of b returning to the bicorn through the interior of ``a_arc``.

    Endpoints are interior points of ``a_arc`` that are consecutive along b
    among such points.  The arc may cross a outside ``a_arc`` and may run
    through the ends of ``a_arc``; once the b-part of the bicorn is pushed off
    b it misses the bicorn anyway.  Near the interior of ``a_arc`` the bicorn
    runs along a, so "same side" is read off the crossing signs.
    """
    inner = a_arc.interior(cp)
    if len(inner) < 2:
        return []
    inner_set = set(inner)
    order = [v for v in cp.b_cycle if v in inner_set]
    out = []
    for i, u in enumerate(order):
        w = order[(i + 1) % len(order)]
        if cp.signs[u] != cp.signs[w]:
            steps = (cp.b_index(w) - cp.b_index(u)) % cp.n
            out.append(Subarc("B", u, w, steps))
    return out


def nested_bicorn_sequence(cp: CurvePair) -> BicornSequence:
    """Nested sequence of returning bicorns starting next to a non-rectangle."""
    if cp.n == 0:
        raise NoIntersections("curves are disjoint")
    census = faces(cp)
    alpha = None
    for f in census:
        if f.kind == "rectangle":
            continue
        for d in f.darts:
            if d[1][0] == "a":
                alpha = d if d[1] == "a+" else cp.opposite(d)
                break
        if alpha is not None:
            break
    if alpha is None:
        raise NoNonRectangularFace("every complementary region is a rectangle")
    first = outermost_strategy(cp, returning_arcs(cp))
    if first is None:
        raise NoReturningArcForBicorn("no returning arc of b with respect to a")
    ends = tuple(sorted((first.arc.start, first.arc.end)))
    # a disc pairing through the first arc plays the role of the arcs of
    # intersection between the two discs; later arcs are taken from it
    chords = next((set(m) for m in disc_pairings(cp) if ends in m), None)
    a_arc = _piece_avoiding(cp, first.arc.start, first.arc.end, alpha)
    bicorns = [Bicorn(a_arc, first.arc)]
    flags = [nondegenerate(cp, a_arc, census)]
    disjoint = []
    while a_arc.interior(cp):
        cands = bicorn_returning_arcs(cp, a_arc)
        if chords is not None:
            cands = [c for c in cands if tuple(sorted((c.start, c.end))) in chords]
        if not cands:
            raise NoReturningArcForBicorn(
                f"no returning arc for bicorn {len(bicorns)} with {len(a_arc.interior(cp))} interior points"
            )
        b_arc = min(cands, key=lambda s: (cp.b_index(s.start), s.start))
        av = a_arc.vertices(cp)
        i, j = sorted((av.index(b_arc.start), av.index(b_arc.end)))
        a_arc = Subarc("A", av[i], av[j], j - i)
        nxt = Bicorn(a_arc, b_arc)
        disjoint.append(crossing_count(cp, bicorns[-1].walk(cp), nxt.walk(cp)) == 0)
        bicorns.append(nxt)
        flags.append(nondegenerate(cp, a_arc, census))
    misses = crossing_count(cp, bicorns[-1].walk(cp), cp.walk_b()) == 0
    return BicornSequence(bicorns, alpha, flags, disjoint, misses)
