"""Combinatorial train tracks.

A track is a ribbon graph whose vertices (switches) carry a two-sided
structure.  Each switch stores its branch ends as ``(left, right)`` with the
counter-clockwise order around the switch equal to ``left + right``.  A branch
end is ``(branch, i)`` with ``i`` in {0, 1}.

Corners sit between consecutive ends in ccw order.  A corner between two ends
on the same side is a cusp, the two corners between the sides are gaps.
Faces are traced with the face to the left of each end, so that the face of
end ``x`` contains the corner between ``x`` and its ccw successor.

Complementary regions default to discs.  Non-disc regions, and punctured
faces (peripheral annuli), are carried as ``TrackRegion`` records.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from ._uf import ChiUnionFind
from .curvepair import Bicorn, CurvePair, Subarc

LEFT, RIGHT = 0, 1


class TrackError(ValueError):
    pass


class MalformedTrack(TrackError):
    pass


class ValenceTwoSwitch(TrackError):
    pass


class EmptySide(TrackError):
    pass


class MonogonFace(TrackError):
    def __init__(self, face, cusps: int):
        super().__init__(f"face {face} is a disc with {cusps} cusp(s)")
        self.face, self.cusps = face, cusps


class BigonFace(TrackError):
    def __init__(self, face):
        super().__init__(f"face {face} is a disc with 2 cusps")
        self.face = face


class MissingBranchWeight(TrackError):
    pass


class NotLargeBranch(TrackError):
    pass


class InvalidResult(TrackError):
    def __init__(self, msg: str, track=None):
        super().__init__(msg)
        self.track = track


class PatternMismatch(TrackError):
    pass


class BrokenRoute(TrackError):
    def __init__(self, branch, msg: str):
        super().__init__(f"branch {branch}: {msg}")
        self.branch = branch


class EmptyArc(TrackError):
    pass


class CollapseFailed(TrackError):
    def __init__(self, msg: str, face=None):
        super().__init__(msg)
        self.face = face


class EmbeddingMismatch(TrackError):
    pass


@dataclass(frozen=True)
class TrackRegion:
    chi: int
    faces: tuple  # one end per boundary face
    punctures: int = 0


@dataclass(frozen=True)
class TrackFace:
    index: int
    ends: tuple
    cusps: int
    region: int
    kind: str  # disc | punctured | non-disc


@dataclass(frozen=True, eq=False)
class TrainTrack:
    switches: Mapping  # sid -> (left ends, right ends)
    regions: tuple | None = None

    def __post_init__(self):
        sw = {s: (tuple(map(tuple, lr[0])), tuple(map(tuple, lr[1]))) for s, lr in dict(self.switches).items()}
        object.__setattr__(self, "switches", sw)
        where = {}
        for s, (left, right) in sw.items():
            for i, x in enumerate(left + right):
                if x in where:
                    raise MalformedTrack(f"end {x} appears twice")
                where[x] = (s, i)
        object.__setattr__(self, "_where", where)

    # -- local structure --------------------------------------------------
    @property
    def single_switch(self) -> bool:
        return len(self.switches) == 1

    @cached_property
    def branches(self) -> list:
        return sorted({x[0] for x in self._where})

    def ends(self) -> list:
        return sorted(self._where)

    def ccw(self, s) -> tuple:
        left, right = self.switches[s]
        return left + right

    def switch_of(self, x):
        return self._where[x][0]

    def side_of(self, x) -> int:
        s, i = self._where[x]
        return LEFT if i < len(self.switches[s][0]) else RIGHT

    def position(self, x) -> int:
        return self._where[x][1]

    @staticmethod
    def other(x):
        return (x[0], 1 - x[1])

    def ccw_next(self, x):
        s, i = self._where[x]
        rot = self.ccw(s)
        return rot[(i + 1) % len(rot)]

    def ccw_prev(self, x):
        s, i = self._where[x]
        return self.ccw(s)[i - 1]

    def corner(self, x) -> tuple:
        """Corner between ``x`` and its ccw successor, as (switch, index)."""
        return self._where[x]

    def is_cusp(self, s, i: int) -> bool:
        left, right = self.switches[s]
        k = len(left) + len(right)
        return i != len(left) - 1 and i != k - 1

    def gaps(self, s) -> tuple:
        left, right = self.switches[s]
        return (len(left) - 1, len(left) + len(right) - 1)

    def endpoints(self, b) -> tuple:
        return (self.switch_of((b, 0)), self.switch_of((b, 1)))

    # -- faces ----------------------------------------------------------------
    @cached_property
    def face_cycles(self) -> list[tuple]:
        seen, cycles = set(), []
        for x in self.ends():
            if x in seen:
                continue
            cyc, cur = [], x
            while cur not in seen:
                seen.add(cur)
                cyc.append(cur)
                cur = self.ccw_prev(self.other(cur))
            i = cyc.index(min(cyc))
            cycles.append(tuple(cyc[i:] + cyc[:i]))
        cycles.sort()
        return cycles

    @cached_property
    def face_of(self) -> dict:
        return {x: i for i, cyc in enumerate(self.face_cycles) for x in cyc}

    def cusps(self, fi: int) -> int:
        return sum(self.is_cusp(*self.corner(x)) for x in self.face_cycles[fi])

    @cached_property
    def region_table(self) -> tuple[list[int], list[list[int]], list[int]]:
        """(chi, face indices, punctures) per region."""
        chis, members, punct, claimed = [], [], [], set()
        for reg in self.regions or ():
            idx = []
            for x in reg.faces:
                x = tuple(x)
                if x not in self.face_of:
                    raise MalformedTrack(f"region names unknown end {x}")
                fi = self.face_of[x]
                if fi in claimed:
                    raise MalformedTrack(f"face {fi} claimed twice")
                claimed.add(fi)
                idx.append(fi)
            chis.append(reg.chi)
            members.append(sorted(idx))
            punct.append(reg.punctures)
        for fi in range(len(self.face_cycles)):
            if fi not in claimed:
                chis.append(1)
                members.append([fi])
                punct.append(0)
        return chis, members, punct

    @cached_property
    def face_region(self) -> list[int]:
        out = [0] * len(self.face_cycles)
        for r, idx in enumerate(self.region_table[1]):
            for fi in idx:
                out[fi] = r
        return out

    def region_of_end(self, x) -> int:
        return self.face_region[self.face_of[x]]

    def face_kind(self, fi: int) -> str:
        chis, members, punct = self.region_table
        r = self.face_region[fi]
        if len(members[r]) == 1 and chis[r] + punct[r] == 1:
            return "disc" if punct[r] == 0 else "punctured"
        return "non-disc"

    def euler_characteristic(self) -> int:
        return len(self.switches) - len(self.branches) + sum(self.region_table[0])

    @property
    def punctures(self) -> int:
        return sum(self.region_table[2])

    @property
    def genus(self) -> int:
        return (2 - self.euler_characteristic() - self.punctures) // 2

    # -- conversion -----------------------------------------------------------
    def to_raw(self) -> dict:
        ends = {}
        for s in sorted(self.switches):
            left, right = self.switches[s]
            for side, group in (("left", left), ("right", right)):
                for pos, x in enumerate(group):
                    ends[x] = {"switch": s, "side": side, "position": pos}
        raw = {
            "switches": sorted(self.switches),
            "branches": [
                {"id": b, "ends": [ends[(b, 0)], ends[(b, 1)]]} for b in self.branches
            ],
        }
        regs = [
            r for r in self.regions or ()
            if not (len(r.faces) == 1 and r.chi == 1 and r.punctures == 0)
        ]
        if regs:
            raw["regions"] = [
                {"chi": r.chi, "faces": [list(x) for x in r.faces], "punctures": r.punctures}
                for r in regs
            ]
        return raw


class PreTrack(TrainTrack):
    """A track in which bigons, monogons and parallel branches are allowed."""


# -- construction and validation ------------------------------------------------


def track_from_raw(raw: Mapping, cls=TrainTrack) -> TrainTrack:
    """Build (without face checks) from the branch-endpoint file format."""
    sides: dict = {}
    for s in raw.get("switches", []):
        sides[s] = ({}, {})
    for br in raw.get("branches", []):
        b = br["id"]
        if len(br["ends"]) != 2:
            raise MalformedTrack(f"branch {b} needs two ends")
        for i, e in enumerate(br["ends"]):
            s = e["switch"]
            if s not in sides:
                raise MalformedTrack(f"branch {b} ends at unknown switch {s}")
            group = sides[s][0 if e["side"] == "left" else 1]
            pos = int(e["position"])
            if pos in group:
                raise MalformedTrack(f"switch {s} has two ends at {e['side']} position {pos}")
            group[pos] = (b, i)
    switches = {}
    for s, (left, right) in sides.items():
        for name, group in (("left", left), ("right", right)):
            if sorted(group) != list(range(len(group))):
                raise MalformedTrack(f"switch {s}: {name} positions are not contiguous")
        switches[s] = (
            tuple(left[i] for i in range(len(left))),
            tuple(right[i] for i in range(len(right))),
        )
    regions = None
    if raw.get("regions") or raw.get("punctured_faces"):
        regions = tuple(
            TrackRegion(
                int(r["chi"]),
                tuple(tuple(x) for x in r["faces"]),
                int(r.get("punctures", 0)),
            )
            for r in raw.get("regions", [])
        ) + tuple(TrackRegion(0, (tuple(x),), 1) for x in raw.get("punctured_faces", []))
    return cls(switches, regions)


def face_census(t: TrainTrack) -> list[TrackFace]:
    return [
        TrackFace(fi, cyc, t.cusps(fi), t.face_region[fi], t.face_kind(fi))
        for fi, cyc in enumerate(t.face_cycles)
    ]


def check_structure(t: TrainTrack) -> None:
    """Switch-level checks: both sides occupied, no valence two."""
    for b in t.branches:
        if (b, 0) not in t._where or (b, 1) not in t._where:
            raise MalformedTrack(f"branch {b} is missing an end")
    for s in sorted(t.switches):
        left, right = t.switches[s]
        if not left or not right:
            raise EmptySide(f"switch {s} has an empty side")
        if len(left) + len(right) == 2:
            raise ValenceTwoSwitch(f"switch {s} has valence two")


def check_regions(t: TrainTrack) -> None:
    chis, members, punct = t.region_table
    for chi, idx, p in zip(chis, members, punct):
        top = 2 - chi - len(idx) - p
        if top < 0 or top % 2:
            raise MalformedTrack(f"region with chi={chi}, {len(idx)} faces, {p} punctures")
    if t.genus < 0 or (2 - t.euler_characteristic() - t.punctures) % 2:
        raise MalformedTrack("Euler characteristic does not fit a closed surface")


def bad_faces(t: TrainTrack) -> list[tuple[int, int]]:
    """Disc faces with fewer than three cusps, as (face, cusps)."""
    return [
        (fi, t.cusps(fi))
        for fi in range(len(t.face_cycles))
        if t.face_kind(fi) == "disc" and t.cusps(fi) < 3
    ]


def validate_track(raw) -> TrainTrack:
    t = raw if isinstance(raw, TrainTrack) else track_from_raw(raw)
    check_structure(t)
    check_regions(t)
    for fi, k in bad_faces(t):
        if k == 2:
            raise BigonFace(fi)
        raise MonogonFace(fi, k)
    return TrainTrack(t.switches, t.regions)


def load_track(path: str) -> TrainTrack:
    with open(path) as fh:
        return validate_track(json.load(fh))


def dump_track(t: TrainTrack, weights: Mapping | None = None) -> str:
    raw = t.to_raw()
    if weights is not None:
        raw["weights"] = {str(b): str(w) for b, w in sorted(weights.items())}
    return json.dumps(raw, sort_keys=True, indent=1)


def to_dot(t: TrainTrack, name: str = "track") -> str:
    lines = [f"graph {name} {{", "  node [shape=record];"]
    for s in sorted(t.switches):
        left, right = t.switches[s]
        lp = "|".join(f"<b{x[0]}e{x[1]}> L{i}" for i, x in enumerate(left))
        rp = "|".join(f"<b{x[0]}e{x[1]}> R{i}" for i, x in enumerate(right))
        lines.append(f'  s{s} [label="{{{{{lp}}}|s{s}|{{{rp}}}}}"];')
    for b in t.branches:
        s0, s1 = t.endpoints(b)
        lines.append(f'  s{s0}:b{b}e0 -- s{s1}:b{b}e1 [label="{b}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _rebuild(switches: Mapping, dart_key: Mapping, uf: ChiUnionFind, punct: Mapping, cls=TrainTrack):
    """Track on ``switches`` with regions read from ``uf``.

    ``dart_key`` maps (some) new ends to uf keys.  Every face must contain at
    least one mapped end and all mapped ends of a face must agree.
    """
    bare = cls(switches)
    by_root: dict = {}
    for cyc in bare.face_cycles:
        roots = {uf.find(dart_key[x]) for x in cyc if x in dart_key}
        if len(roots) != 1:
            raise InvalidResult(f"face {cyc[0]} maps to regions {sorted(map(str, roots))}", bare)
        by_root.setdefault(roots.pop(), []).append(cyc[0])
    regions = []
    for root in sorted(by_root, key=str):
        chi, faces_, p = uf.chi[root], tuple(by_root[root]), punct.get(root, 0)
        if not (len(faces_) == 1 and chi == 1 and p == 0):
            regions.append(TrackRegion(chi, faces_, p))
    return cls(switches, tuple(regions) or None)


def _region_uf(t: TrainTrack) -> tuple[ChiUnionFind, dict]:
    uf = ChiUnionFind()
    chis, _, punct = t.region_table
    for r, chi in enumerate(chis):
        uf.add(r, chi)
    return uf, {r: p for r, p in enumerate(punct) if p}


def _punct_by_root(uf: ChiUnionFind, punct: Mapping) -> dict:
    out: dict = {}
    for r, p in punct.items():
        root = uf.find(r)
        out[root] = out.get(root, 0) + p
    return out


# -- weights ----------------------------------------------------------------------


@dataclass(frozen=True)
class WeightVector:
    weights: tuple  # sorted (branch, Fraction)

    @classmethod
    def of(cls, mapping: Mapping) -> "WeightVector":
        return cls(tuple(sorted((b, Fraction(w)) for b, w in mapping.items())))

    def as_dict(self) -> dict:
        return dict(self.weights)

    def __getitem__(self, b):
        return self.as_dict()[b]

    def max_weight(self):
        return max((w for _, w in self.weights), default=Fraction(0))


def _weight_dict(t: TrainTrack, w) -> dict:
    w = w.as_dict() if isinstance(w, WeightVector) else dict(w)
    missing = [b for b in t.branches if b not in w]
    if missing:
        raise MissingBranchWeight(f"no weight on branches {missing}")
    return w


def switch_sums(t: TrainTrack, w) -> dict:
    w = _weight_dict(t, w)
    out = {}
    for s, (left, right) in t.switches.items():
        out[s] = (sum(Fraction(w[x[0]]) for x in left), sum(Fraction(w[x[0]]) for x in right))
    return out


def check_switch_equality(t: TrainTrack, w) -> bool:
    w = _weight_dict(t, w)
    if any(Fraction(v) < 0 for v in w.values()):
        return False
    return all(a == b for a, b in switch_sums(t, w).values())


def _switch_rows(t: TrainTrack, support: Sequence) -> list[list[int]]:
    col = {b: i for i, b in enumerate(support)}
    rows = []
    for s in sorted(t.switches):
        row = [0] * len(support)
        left, right = t.switches[s]
        for x in left:
            if x[0] in col:
                row[col[x[0]]] += 1
        for x in right:
            if x[0] in col:
                row[col[x[0]]] -= 1
        if any(row):
            rows.append(row)
    return rows


def _rank(rows: list[list[int]]) -> int:
    m = [[Fraction(v) for v in r] for r in rows]
    rank, ncol = 0, len(m[0]) if m else 0
    for c in range(ncol):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def carried_components(t: TrainTrack, w: Mapping) -> int:
    """Number of components of the multicurve with integer weights ``w``.

    Strands of a branch are stacked; at a switch the strands on the left side,
    counted counter-clockwise, meet the right-side strands in reverse order.
    """
    uf: dict = {}

    def find(k):
        while uf[k] != k:
            uf[k] = uf[uf[k]]
            k = uf[k]
        return k

    for b in t.branches:
        for k in range(int(w[b])):
            uf[(b, k)] = (b, k)
    if not uf:
        return 0
    for s, (left, right) in t.switches.items():
        stack = []
        for group in (left, right):
            seq = []
            for x in group:
                n = int(w[x[0]])
                order = range(n - 1, -1, -1) if x[1] == 0 else range(n)
                seq.extend((x[0], k) for k in order)
            stack.append(seq)
        lseq, rseq = stack
        if len(lseq) != len(rseq):
            raise ValueError("weights fail switch equality")
        for p, q in zip(lseq, reversed(rseq)):
            a, b = find(p), find(q)
            if a != b:
                uf[a] = b
    return len({find(k) for k in uf})


def is_extreme(t: TrainTrack, w: Mapping) -> bool:
    """One-dimensional solution space of switch equality on the support."""
    support = [b for b in t.branches if w[b]]
    if not support:
        return False
    rows = _switch_rows(t, support)
    return len(support) - (_rank(rows) if rows else 0) == 1


def enumerate_weights(t: TrainTrack, cap: int = 2) -> Iterable[dict]:
    """All integer weight vectors with entries in [0, cap] satisfying switch equality."""
    branches = t.branches
    # order branches by switch so partial sums can prune early
    order, seen = [], set()
    for s in sorted(t.switches):
        for x in t.ccw(s):
            if x[0] not in seen:
                seen.add(x[0])
                order.append(x[0])
    last_needed = {}
    for i, b in enumerate(order):
        for s in t.endpoints(b):
            last_needed[s] = i
    checks: dict = {}
    for s, i in last_needed.items():
        checks.setdefault(i, []).append(s)
    rows = {s: {} for s in t.switches}
    for s, (left, right) in t.switches.items():
        for x in left:
            rows[s][x[0]] = rows[s].get(x[0], 0) + 1
        for x in right:
            rows[s][x[0]] = rows[s].get(x[0], 0) - 1
    cur: dict = {}

    def rec(i):
        if i == len(order):
            yield {b: cur[b] for b in branches}
            return
        b = order[i]
        for v in range(cap + 1):
            cur[b] = v
            if all(sum(c * cur[bb] for bb, c in rows[s].items()) == 0 for s in checks.get(i, ())):
                yield from rec(i + 1)
        del cur[b]

    yield from rec(0)


def vertex_cycles(t: TrainTrack, cap: int = 2) -> set[WeightVector]:
    """Connected carried curves with weight at most ``cap`` that span extreme rays."""
    out = set()
    for w in enumerate_weights(t, cap):
        if not any(w.values()):
            continue
        if not is_extreme(t, w):
            continue
        if carried_components(t, w) != 1:
            continue
        out.add(WeightVector.of(w))
    return out


# -- route maps and carrying -------------------------------------------------------


@dataclass(frozen=True)
class RouteMap:
    """Carrying data: each branch of sigma goes to a directed path in tau.

    A path step is ``(branch, +1)`` when the tau branch is run from end 0 to
    end 1, ``(branch, -1)`` otherwise.
    """

    paths: Mapping  # sigma branch -> tuple of steps
    switch_map: Mapping  # sigma switch -> tau switch

    @classmethod
    def identity(cls, t: TrainTrack) -> "RouteMap":
        return cls({b: ((b, 1),) for b in t.branches}, {s: s for s in t.switches})


def _dep(step):
    b, d = step
    return (b, 0) if d > 0 else (b, 1)


def _arr(step):
    b, d = step
    return (b, 1) if d > 0 else (b, 0)


def reverse_path(path: Sequence) -> tuple:
    return tuple((b, -d) for b, d in reversed(path))


def compose(first: RouteMap, second: RouteMap) -> RouteMap:
    """Route map for sigma -> tau from sigma -> rho and rho -> tau."""
    paths = {}
    for b, path in first.paths.items():
        out = []
        for rb, d in path:
            img = second.paths[rb]
            out.extend(img if d > 0 else reverse_path(img))
        paths[b] = tuple(out)
    sw = {s: second.switch_map[r] for s, r in first.switch_map.items()}
    return RouteMap(paths, sw)


def _check_path(tau: TrainTrack, b, path) -> bool:
    for step in path:
        if step[0] not in tau.branches or step[1] not in (1, -1):
            raise BrokenRoute(b, f"unknown step {step}")
    ok = True
    for p, q in zip(path, path[1:]):
        arr, dep = _arr(p), _dep(q)
        if tau.switch_of(arr) != tau.switch_of(dep):
            raise BrokenRoute(b, f"path jumps from {p} to {q}")
        if tau.side_of(arr) == tau.side_of(dep):
            ok = False
    return ok


def verify_carrying(sigma, tau: TrainTrack, m: RouteMap | None = None) -> bool:
    """True iff ``m`` is a smooth, direction-respecting carrying map.

    ``sigma`` may be a track or a closed train route (sequence of steps) in
    tau; for a route ``m`` is ignored.
    """
    if not isinstance(sigma, TrainTrack):
        return _closed_route_ok(tau, list(sigma))
    if m is None:
        raise BrokenRoute(None, "no route map supplied")
    for s in sigma.switches:
        if m.switch_map.get(s) not in tau.switches:
            raise BrokenRoute(None, f"switch {s} has no image")
    ok = True
    # side variable per (sigma switch, side); values are tau sides
    fixed: dict = {}
    links: list = []

    def assign(key, val):
        nonlocal ok
        if fixed.setdefault(key, val) != val:
            ok = False

    for b in sigma.branches:
        if b not in m.paths:
            raise BrokenRoute(b, "no path")
        path = tuple(m.paths[b])
        e0, e1 = (b, 0), (b, 1)
        s0, s1 = m.switch_map[sigma.switch_of(e0)], m.switch_map[sigma.switch_of(e1)]
        k0 = (sigma.switch_of(e0), sigma.side_of(e0))
        k1 = (sigma.switch_of(e1), sigma.side_of(e1))
        if not path:
            if s0 != s1:
                raise BrokenRoute(b, "empty path between different switches")
            links.append((k0, k1))
            continue
        if not _check_path(tau, b, path):
            ok = False
        first, last = _dep(path[0]), _arr(path[-1])
        if tau.switch_of(first) != s0 or tau.switch_of(last) != s1:
            raise BrokenRoute(b, "path endpoints do not match switch images")
        assign(k0, tau.side_of(first))
        assign(k1, tau.side_of(last))
    # opposite sides of a switch depart from opposite tau sides, and an empty
    # path passes straight through so its two ends also see opposite sides
    for s in sigma.switches:
        links.append(((s, LEFT), (s, RIGHT)))
    adj: dict = {}
    for p, q in links:
        adj.setdefault(p, []).append(q)
        adj.setdefault(q, []).append(p)
    colour: dict = {}
    for start in sorted(adj, key=str):
        if start in colour:
            continue
        comp, queue = {start: 0}, deque([start])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in comp:
                    comp[v] = 1 - comp[u]
                    queue.append(v)
                elif comp[v] == comp[u]:
                    ok = False
        anchor = next((k for k in comp if k in fixed), None)
        for k, par in comp.items():
            if anchor is not None:
                want = fixed[anchor] ^ comp[anchor] ^ par
                if k in fixed and fixed[k] != want:
                    ok = False
            colour[k] = par
    return ok


def _closed_route_ok(tau: TrainTrack, route: list) -> bool:
    if not route:
        return False
    return _check_path(tau, "route", route + route[:1])


def pushforward(m: RouteMap, w: Mapping) -> dict:
    """Weights on tau induced by weights on sigma."""
    out: dict = {}
    for b, path in m.paths.items():
        for tb, _ in path:
            out[tb] = out.get(tb, 0) + Fraction(w[b])
    return out


def pushforward_on(tau: TrainTrack, m: RouteMap, w: Mapping) -> dict:
    out = {b: Fraction(0) for b in tau.branches}
    out.update(pushforward(m, w))
    return out


def route_weights(route: Sequence) -> dict:
    out: dict = {}
    for b, _ in route:
        out[b] = out.get(b, 0) + 1
    return out


# -- dual curves -------------------------------------------------------------------


@dataclass(frozen=True)
class SwitchMeet:
    switch: object
    corner_in: int
    corner_out: int


@dataclass(frozen=True)
class BranchMeet:
    branch: object
    left_to_right: bool  # relative to running the branch from end 0 to end 1


@dataclass(frozen=True)
class Along:
    branch: object
    start: int  # end the curve starts next to
    side: str  # "left" or "right" of the branch run away from ``start``


@dataclass(frozen=True)
class DualCurve:
    """A closed curve transverse to a track.

    ``steps`` is a cyclic list of ``(meeting, path)``: a meeting with the
    track followed by a walk through the complement, given as runs alongside
    branches.  An empty walk means the curve stays inside one face.
    """

    steps: tuple


def _along_corners(t: TrainTrack, a: Along) -> tuple:
    x = (a.branch, a.start)
    y = t.other(x)
    if a.side == "left":
        return t.corner(x), t.corner(t.ccw_prev(y))
    if a.side == "right":
        return t.corner(t.ccw_prev(x)), t.corner(y)
    raise EmbeddingMismatch(f"unknown side {a.side!r}")


def _corner_face(t: TrainTrack, corner: tuple) -> int:
    s, i = corner
    return t.face_of[t.ccw(s)[i]]


def _meet_faces(t: TrainTrack, m) -> tuple:
    """(face or corner before, face or corner after) of a meeting."""
    if isinstance(m, SwitchMeet):
        if m.switch not in t.switches:
            raise EmbeddingMismatch(f"unknown switch {m.switch}")
        k = len(t.ccw(m.switch))
        if not (0 <= m.corner_in < k and 0 <= m.corner_out < k):
            raise EmbeddingMismatch("corner index out of range")
        return (m.switch, m.corner_in), (m.switch, m.corner_out)
    if isinstance(m, BranchMeet):
        if m.branch not in t.branches:
            raise EmbeddingMismatch(f"unknown branch {m.branch}")
        left = t.face_of[(m.branch, 0)]
        right = t.face_of[(m.branch, 1)]
        return (left, right) if m.left_to_right else (right, left)
    raise EmbeddingMismatch(f"unknown meeting {m!r}")


def _as_face(t: TrainTrack, pos) -> int:
    return _corner_face(t, pos) if isinstance(pos, tuple) else pos


def dual_meetings(t: TrainTrack, c: DualCurve) -> list:
    """Check the curve is realisable in the complement; return its meetings."""
    steps = list(c.steps)
    if not steps:
        raise EmbeddingMismatch("curve never meets the track")
    for i, (meet, path) in enumerate(steps):
        _, here = _meet_faces(t, meet)
        for a in path:
            if a.branch not in t.branches or a.start not in (0, 1):
                raise EmbeddingMismatch(f"unknown branch end in {a}")
            start, stop = _along_corners(t, a)
            if isinstance(here, tuple):
                if here != start:
                    raise EmbeddingMismatch(f"run {a} does not start at corner {here}")
            elif here != _corner_face(t, start):
                raise EmbeddingMismatch(f"run {a} leaves face {here}")
            here = stop
        nxt, _ = _meet_faces(t, steps[(i + 1) % len(steps)][0])
        if isinstance(here, tuple) and isinstance(nxt, tuple):
            same = _corner_face(t, here) == _corner_face(t, nxt)
        else:
            same = _as_face(t, here) == _as_face(t, nxt)
        if not same:
            raise EmbeddingMismatch(f"step {i} ends in a different face from the next meeting")
    return [m for m, _ in steps]


def is_switch_dual(c, t: TrainTrack) -> bool:
    """Exactly one meeting, at a switch, passing from one gap to the other.

    A single transverse meeting cannot cut off a bigon with the track, so the
    bigon clause needs no separate test.
    """
    if not isinstance(c, DualCurve):
        # a train route or weight vector lies in the track, so it is carried, not transverse
        if isinstance(c, WeightVector):
            used = [b for b, w in c.weights if w]
        elif isinstance(c, Mapping):
            used = [b for b, w in c.items() if w]
        else:
            used = [b for b, _ in c]
        for b in used:
            if b not in t.branches:
                raise EmbeddingMismatch(f"unknown branch {b}")
        return False
    meets = dual_meetings(t, c)
    if len(meets) != 1 or not isinstance(meets[0], SwitchMeet):
        return False
    m = meets[0]
    return {m.corner_in, m.corner_out} == set(t.gaps(m.switch))


# -- pre-tracks from bicorns ----------------------------------------------------------


@dataclass
class PretrackData:
    track: PreTrack
    ray_end: dict  # curve-pair dart (v, "b+"/"b-") -> track end
    arc: Subarc


def _north(cp: CurvePair, v) -> str:
    return "b+" if cp.signs[v] > 0 else "b-"


def _south(cp: CurvePair, v) -> str:
    return "b-" if cp.signs[v] > 0 else "b+"


def pretrack_from_bicorn(cp: CurvePair, a_arc: Subarc) -> PretrackData:
    """Collapse ``a_arc`` to a switch and keep b; discard the rest of a.

    Branches are the arcs of b between consecutive points of ``a_arc``; the
    branch starting (along b) at point ``u`` gets id ``u``.
    """
    if a_arc.curve != "A" or cp.n == 0 or not 1 <= a_arc.steps < cp.n:
        raise EmptyArc(f"{a_arc} is not a proper subarc of a between intersection points")
    pts = a_arc.vertices(cp)
    on_arc = set(pts)
    ray_end = {}
    for u in pts:
        w = cp.next_b(u)
        while w not in on_arc:
            w = cp.next_b(w)
        ray_end[(u, "b+")] = (u, 0)
        ray_end[(w, "b-")] = (u, 1)
    left = tuple(ray_end[(v, _north(cp, v))] for v in reversed(pts))
    right = tuple(ray_end[(v, _south(cp, v))] for v in pts)
    switches = {0: (left, right)}

    uf = ChiUnionFind()
    chis = cp.region_table[0]
    for r, chi in enumerate(chis):
        uf.add(r, chi)
    arc_darts = {(v, "a+") for v in pts[:-1]}
    for v in cp.a_cycle:
        d = (v, "a+")
        if d not in arc_darts:
            uf.glue(cp.region_of_dart(d), cp.region_of_dart(cp.opposite(d)))
    key = {end: cp.region_of_dart(d) for d, end in ray_end.items()}
    t = _rebuild(switches, key, uf, {}, PreTrack)
    if t.euler_characteristic() != 2 - 2 * cp.genus:
        raise RuntimeError("pre-track does not live on the surface of the curve pair")
    return PretrackData(t, ray_end, a_arc)


@dataclass
class CollapseResult:
    track: TrainTrack
    route: RouteMap  # pre-track -> track
    merges: list  # (dropped branch, kept branch, relative direction)


def _step(x) -> tuple:
    """Path step running a branch away from end ``x``."""
    return (x[0], 1 if x[1] == 0 else -1)


def _collapsible(t: TrainTrack) -> tuple | None:
    """First bigon (disc with two cusps) with a side made of one branch.

    Returns (face, dart of that side, path of the other side run the same
    way).  When both sides are single branches the higher id is dropped.
    """
    for fi, cyc in enumerate(t.face_cycles):
        if t.face_kind(fi) != "disc" or t.cusps(fi) != 2:
            continue
        k = len(cyc)
        cusp = [i for i in range(k) if t.is_cusp(*t.corner(cyc[i]))]
        sides = []
        for a, b in ((cusp[0], cusp[1]), (cusp[1], cusp[0] + k)):
            sides.append([cyc[i % k] for i in range(a, b)])
        options = []
        for me, rest in ((sides[0], sides[1]), (sides[1], sides[0])):
            if len(me) == 1 and me[0][0] not in {x[0] for x in rest}:
                options.append((me[0][0], me[0], reverse_path([_step(x) for x in rest])))
        if options:
            _, dart, path = max(options)
            return fi, dart, path
    return None


def bigon_collapse(p: TrainTrack) -> CollapseResult:
    """Collapse bigons, lowest face first, until none is left.

    A bigon with a one-branch side is collapsed onto its other side: the
    branch is removed and routed along the other side.  Two parallel branches
    are the case where both sides are single branches; the lower id is kept.
    """
    t = p
    paths = {b: ((b, 1),) for b in p.branches}
    merges = []
    while True:
        hit = _collapsible(t)
        if hit is None:
            break
        fi, x, along = hit
        drop = x[0]
        img = along if x[1] == 0 else reverse_path(along)
        merges.append((drop, img))
        for b, path in paths.items():
            out = []
            for pb, d in path:
                if pb == drop:
                    out.extend(img if d > 0 else reverse_path(img))
                else:
                    out.append((pb, d))
            paths[b] = tuple(out)
        uf, punct = _region_uf(t)
        # the bigon merges into the face across the removed branch
        uf.glue(t.face_region[fi], t.region_of_end(t.other(x)))
        key = {e: t.region_of_end(e) for e in t.ends() if e[0] != drop}
        switches = {
            s: (
                tuple(e for e in left if e[0] != drop),
                tuple(e for e in right if e[0] != drop),
            )
            for s, (left, right) in t.switches.items()
        }
        t = _rebuild(switches, key, uf, _punct_by_root(uf, punct), PreTrack)
    out = TrainTrack(t.switches, t.regions)
    for fi, k in bad_faces(out):
        raise CollapseFailed(f"face {fi} is a disc with {k} cusp(s) after collapsing", fi)
    try:
        check_structure(out)
    except TrackError as exc:
        raise CollapseFailed(str(exc)) from exc
    route = RouteMap(paths, {s: s for s in p.switches})
    return CollapseResult(out, route, merges)


def bicorn_dual(cp: CurvePair, bicorn: Bicorn, collapsed: CollapseResult, data: PretrackData) -> DualCurve:
    """The bicorn curve as a curve transverse to its collapsed track.

    The a-part of the bicorn crosses the switch from the gap at the start of
    the arc to the gap at its end; the b-part runs back alongside the branch
    that carries the b-arc.
    """
    t = collapsed.track
    a_arc, b_arc = bicorn.a_arc, bicorn.b_arc
    pts = a_arc.vertices(cp)
    west, east = t.gaps(0)
    vk = pts[-1]
    ray = (vk, "b+") if b_arc.start == vk else (vk, "b-")
    pre_end = data.ray_end[ray]
    path = collapsed.route.paths[pre_end[0]]
    if pre_end[1] == 1:
        path = reverse_path(path)
    side = "right" if ray[1] == _north(cp, vk) else "left"
    runs = tuple(Along(b, 0 if d > 0 else 1, side) for b, d in path)
    return DualCurve(((SwitchMeet(0, west, east), runs),))


def natural_route(
    cp: CurvePair,
    inner: PretrackData,
    inner_collapse: CollapseResult,
    outer: PretrackData,
    outer_collapse: CollapseResult,
) -> RouteMap:
    """Route map from the track of a smaller arc into the track of a larger one.

    A branch of the inner track is an arc of b between points of the inner
    arc; in the outer pre-track it is cut at the outer arc's points.
    """
    outer_pts = set(outer.arc.vertices(cp))
    inner_pts = set(inner.arc.vertices(cp))
    paths = {}
    for b in inner_collapse.track.branches:
        pieces, u = [], b
        while True:
            pieces.append((u, 1))
            w = cp.next_b(u)
            while w not in outer_pts:
                w = cp.next_b(w)
            if w in inner_pts:
                break
            u = w
        out = []
        for pb, d in pieces:
            out.extend(outer_collapse.route.paths[pb])
        paths[b] = tuple(out)
    return RouteMap(paths, {0: 0})


# -- moves -----------------------------------------------------------------------------


@dataclass
class MoveResult:
    track: TrainTrack
    route: RouteMap  # new track -> old track


def large_branches(t: TrainTrack) -> list:
    out = []
    for b in t.branches:
        s0, s1 = t.endpoints(b)
        if s0 == s1:
            continue
        if all(
            len(t.switches[t.switch_of(x)][t.side_of(x)]) == 1
            and len(t.ccw(t.switch_of(x))) == 3
            for x in ((b, 0), (b, 1))
        ):
            out.append(b)
    return out


def _extended_paths(t: TrainTrack, moved: Mapping) -> dict:
    """Identity paths, extended through a branch for ends that moved.

    ``moved`` maps an end to a step running from the end's new image back to
    its old switch; the step is prepended (end 0) or appended (end 1).
    """
    paths = {}
    for b in t.branches:
        path = [(b, 1)]
        if (b, 0) in moved:
            path.insert(0, moved[(b, 0)])
        if (b, 1) in moved:
            path.append((moved[(b, 1)][0], -moved[(b, 1)][1]))
        paths[b] = tuple(path)
    return paths


def split(t: TrainTrack, large_branch, choice: str = "right") -> MoveResult:
    """Split along a large branch joining two trivalent switches.

    With the large branch e drawn horizontally from s1 (left) to s2 (right),
    A/B are the upper/lower branches at s1 and C/D the upper/lower ones at s2.
    The right split joins B to D and sends a diagonal from the lower strand
    up to the upper strand; the left split joins A to C with the diagonal
    running down; the central split leaves two disjoint strands A-C and B-D.
    """
    e = large_branch
    if e not in large_branches(t):
        raise NotLargeBranch(f"branch {e} is not a large branch between trivalent switches")
    if choice not in ("left", "right", "central"):
        raise ValueError(f"unknown split {choice!r}")
    e1, e2 = (e, 0), (e, 1)
    s1, s2 = t.switch_of(e1), t.switch_of(e2)
    A, B = t.ccw_next(e1), t.ccw_prev(e1)
    D, C = t.ccw_next(e2), t.ccw_prev(e2)
    if choice == "central":
        return _central_split(t, e, A, B, C, D)
    switches = dict(t.switches)
    # the new switches keep the ids s1, s2 and map to them; an end that
    # changed sides is carried across e, running e from its new image back
    # to its old switch ((e, 0) sits at s1)
    if choice == "right":
        switches[s1] = ((B,), (D, e1))
        switches[s2] = ((C,), (A, e2))
        moved = {A: (e, -1), D: (e, 1)}
    else:
        switches[s1] = ((A,), (e1, C))
        switches[s2] = ((D,), (e2, B))
        moved = {C: (e, 1), B: (e, -1)}
    uf, punct = _region_uf(t)
    key = {x: t.region_of_end(x) for x in t.ends() if x[0] != e}
    new = _rebuild(switches, key, uf, _punct_by_root(uf, punct))
    paths = _extended_paths(new, moved)
    paths[e] = ((e, 1),)
    result = MoveResult(new, RouteMap(paths, {s: s for s in new.switches}))
    _revalidate(new)
    return result


def _revalidate(t: TrainTrack) -> None:
    try:
        check_structure(t)
        check_regions(t)
    except TrackError as exc:
        raise InvalidResult(str(exc), t) from exc
    bad = bad_faces(t)
    if bad:
        fi, k = bad[0]
        raise InvalidResult(f"face {fi} is a disc with {k} cusp(s)", t)


def _central_split(t: TrainTrack, e, A, B, C, D) -> MoveResult:
    s1, s2 = t.switch_of((e, 0)), t.switch_of((e, 1))
    glue = {A: C, C: A, B: D, D: B}
    # (e, 0) sits at s1, so crossing from s1 to s2 runs e forwards
    step_from = {A: (e, 1), B: (e, 1), C: (e, -1), D: (e, -1)}
    gone = {s1, s2}
    chains, used = [], set()
    for x in t.ends():
        if x[0] == e or x in used or t.switch_of(x) in gone:
            continue
        steps, cur = [], x
        while True:
            used.add(cur)
            far = t.other(cur)
            steps.append((cur[0], 1 if cur[1] == 0 else -1))
            used.add(far)
            if t.switch_of(far) not in gone:
                break
            steps.append(step_from[far])
            cur = glue[far]
        chains.append((x, far, steps))
    for x in (A, B, C, D):
        if x not in used:
            raise InvalidResult("central split leaves a closed curve with no switch", None)
    switches = {s: lr for s, lr in t.switches.items() if s not in gone}
    rename, paths = {}, {}
    for start, stop, steps in chains:
        nid = min(b for b, _ in steps if b != e)
        first = next(d for b, d in steps if b == nid)
        if first < 0:
            start, stop, steps = stop, start, list(reverse_path(steps))
        rename[start], rename[stop] = (nid, 0), (nid, 1)
        paths[nid] = tuple(steps)
    switches = {
        s: (tuple(rename[x] for x in left), tuple(rename[x] for x in right))
        for s, (left, right) in switches.items()
    }
    uf, punct = _region_uf(t)
    uf.glue(t.region_of_end(A), t.region_of_end(D))
    key = {rename[x]: t.region_of_end(x) for x in rename}
    try:
        new = _rebuild(switches, key, uf, _punct_by_root(uf, punct))
    except InvalidResult as exc:
        raise InvalidResult(f"central split: {exc}", exc.track) from exc
    _revalidate(new)
    return MoveResult(new, RouteMap(paths, {s: s for s in new.switches}))


def shift_branches(t: TrainTrack) -> list[tuple]:
    """(branch, end index at the switch where it is alone) admitting a shift."""
    out = []
    for m in t.branches:
        for i in (0, 1):
            x, y = (m, i), (m, 1 - i)
            s1, s2 = t.switch_of(x), t.switch_of(y)
            if s1 == s2 or len(t.ccw(s1)) != 3 or len(t.ccw(s2)) != 3:
                continue
            if len(t.switches[s1][t.side_of(x)]) == 1 and len(t.switches[s2][t.side_of(y)]) == 2:
                out.append((m, i))
    return out


def shift(t: TrainTrack, branch, alone_end: int | None = None) -> MoveResult:
    """Slide the switch at the lonely end of ``branch`` past its other switch.

    The branch m is alone on its side at s1 and shares its side with Q at s2,
    where b2 is alone.  Afterwards Q joins the branch from s1 (b0) and the
    other s1 branch (P) joins at s2; m keeps its id and both new switches map
    to s2 in the carrying map.
    """
    options = [opt for opt in shift_branches(t) if opt[0] == branch]
    if alone_end is not None:
        options = [opt for opt in options if opt[1] == alone_end]
    if not options:
        raise PatternMismatch(f"branch {branch} does not sit in a shift configuration")
    m, i = options[0]
    m1, m2 = (m, i), (m, 1 - i)
    s1, s2 = t.switch_of(m1), t.switch_of(m2)
    (b2,) = t.switches[s2][1 - t.side_of(m2)]
    switches = dict(t.switches)
    if t.ccw_next(m2) != b2:
        Q = t.ccw_next(m2)
        P, b0 = t.ccw_next(m1), t.ccw_prev(m1)
        switches[s1] = ((m1,), (b0, Q))
        switches[s2] = ((b2,), (P, m2))
    else:
        Q = t.ccw_prev(m2)
        P, b0 = t.ccw_prev(m1), t.ccw_next(m1)
        switches[s1] = ((m1,), (Q, b0))
        switches[s2] = ((b2,), (m2, P))
    # P and b0 used to meet m at s1; now they sit at switches mapping to s2
    back = (m, -1) if m1[1] == 0 else (m, 1)
    moved = {P: back, b0: back}
    uf, punct = _region_uf(t)
    key = {x: t.region_of_end(x) for x in t.ends() if x[0] != m}
    new = _rebuild(switches, key, uf, _punct_by_root(uf, punct))
    _revalidate(new)
    paths = _extended_paths(new, moved)
    paths[m] = ()
    sw = {s: s for s in new.switches}
    sw[s1] = s2
    return MoveResult(new, RouteMap(paths, sw))


# -- isomorphism ------------------------------------------------------------------------


def _code_from(t: TrainTrack, x0) -> tuple[tuple, dict, dict]:
    sw_label: dict = {}
    sw_start: dict = {}
    br_label: dict = {}
    br_flip: dict = {}
    queue = deque([x0])
    sw_label[t.switch_of(x0)] = 0
    sw_start[t.switch_of(x0)] = x0
    order = [t.switch_of(x0)]
    while queue:
        x = queue.popleft()
        s = t.switch_of(x)
        rot = t.ccw(s)
        k = rot.index(x)
        for y in rot[k:] + rot[:k]:
            if y[0] not in br_label:
                br_label[y[0]] = len(br_label)
                br_flip[y[0]] = y[1]
            far = t.other(y)
            fs = t.switch_of(far)
            if fs not in sw_label:
                sw_label[fs] = len(sw_label)
                sw_start[fs] = far
                order.append(fs)
                queue.append(far)
    chis, _, punct = t.region_table
    reg_label: dict = {}
    code = []
    for s in order:
        rot = t.ccw(s)
        k = rot.index(sw_start[s])
        base = t.side_of(sw_start[s])
        row = []
        for y in rot[k:] + rot[:k]:
            r = t.region_of_end(y)
            reg_label.setdefault(r, len(reg_label))
            row.append(
                (br_label[y[0]], y[1] ^ br_flip[y[0]], int(t.side_of(y) != base),
                 reg_label[r], chis[r], punct[r])
            )
        code.append(tuple(row))
    return tuple(code), sw_label, {b: (br_label[b], br_flip[b]) for b in br_label}


def canonical_form(t: TrainTrack) -> tuple:
    """Orientation-preserving isomorphism invariant (complete for connected tracks)."""
    return min(_code_from(t, x)[0] for x in t.ends()) if t.ends() else ()


def isomorphism(src: TrainTrack, dst: TrainTrack) -> RouteMap | None:
    """An isomorphism src -> dst as a route map, or None."""
    if not src.ends() or not dst.ends():
        return None
    code_d, sw_d, br_d = min((_code_from(dst, x) for x in dst.ends()), key=lambda c: c[0])
    inv_sw = {v: k for k, v in sw_d.items()}
    inv_br = {v[0]: (k, v[1]) for k, v in br_d.items()}
    for x in src.ends():
        code_s, sw_s, br_s = _code_from(src, x)
        if code_s != code_d:
            continue
        paths = {}
        for b, (lab, flip) in br_s.items():
            db, dflip = inv_br[lab]
            paths[b] = ((db, 1 if flip == dflip else -1),)
        return RouteMap(paths, {s: inv_sw[lab] for s, lab in sw_s.items()})
    return None


def find_carrying(sigma: TrainTrack, tau: TrainTrack, depth: int = 6, budget: int = 20000) -> RouteMap | None:
    """Search split/shift sequences from tau (at most ``depth`` moves) for sigma."""
    target = canonical_form(sigma)
    frontier = [(tau, RouteMap.identity(tau))]
    seen = {canonical_form(tau)}
    steps = 0
    for level in range(depth + 1):
        nxt = []
        for cur, to_tau in frontier:
            if canonical_form(cur) == target:
                iso = isomorphism(sigma, cur)
                if iso is not None:
                    return compose(iso, to_tau)
            if level == depth:
                continue
            for move in _moves(cur):
                steps += 1
                if steps > budget:
                    return None
                key = canonical_form(move.track)
                if key in seen:
                    continue
                seen.add(key)
                nxt.append((move.track, compose(move.route, to_tau)))
        frontier = nxt
    return None


def _moves(t: TrainTrack) -> Iterable[MoveResult]:
    for b in large_branches(t):
        for choice in ("left", "right", "central"):
            try:
                yield split(t, b, choice)
            except TrackError:
                continue
    for m, i in shift_branches(t):
        try:
            yield shift(t, m, i)
        except TrackError:
            continue


# -- recurrence -----------------------------------------------------------------------------


@dataclass
class RecurrenceReport:
    recurrent: bool
    transversely_recurrent: bool | None
    large: bool
    filling: bool
    uncovered: list = field(default_factory=list)


def _sub_complement_ok(t: TrainTrack, keep: set) -> bool:
    """All complementary pieces of the sub-track on ``keep`` are discs or
    once-punctured discs."""
    uf, punct = _region_uf(t)
    for b in t.branches:
        if b not in keep:
            uf.glue(t.region_of_end((b, 0)), t.region_of_end((b, 1)))
    for s in t.switches:
        if not any(x[0] in keep for x in t.ccw(s)):
            uf.bump(t.region_of_end(t.ccw(s)[0]), 1)
    p = _punct_by_root(uf, punct)
    return all(uf.chi[r] + p.get(r, 0) == 1 and p.get(r, 0) <= 1 for r in uf.roots())


def recurrence_report(t: TrainTrack, duals: Sequence = (), cycles=None) -> RecurrenceReport:
    cycles = vertex_cycles(t) if cycles is None else cycles
    total = {b: Fraction(0) for b in t.branches}
    for w in cycles:
        for b, v in w.weights:
            total[b] += v
    uncovered = [b for b, v in total.items() if v <= 0]
    large = all(t.face_kind(fi) != "non-disc" for fi in range(len(t.face_cycles)))
    support = {b for b, v in total.items() if v > 0}
    filling = bool(support) and _sub_complement_ok(t, support)
    trans = None
    if duals:
        hit = set()
        for c in duals:
            for m in dual_meetings(t, c):
                if isinstance(m, BranchMeet):
                    hit.add(m.branch)
                else:
                    hit.update(x[0] for x in t.ccw(m.switch))
        trans = hit >= set(t.branches)
    return RecurrenceReport(not uncovered, trans, large, filling, uncovered)


# -- pipeline -------------------------------------------------------------------------------


@dataclass
class PipelineStage:
    bicorn: Bicorn
    pretrack: PretrackData
    collapsed: CollapseResult
    dual: DualCurve
    switch_dual: bool


def bicorn_pipeline(cp: CurvePair, bicorns: Sequence[Bicorn]) -> tuple[list[PipelineStage], list[bool]]:
    """Tracks for each bicorn plus carrying checks between neighbours."""
    stages = []
    for bc in bicorns:
        data = pretrack_from_bicorn(cp, bc.a_arc)
        col = bigon_collapse(data.track)
        validate_track(col.track)
        dual = bicorn_dual(cp, bc, col, data)
        stages.append(PipelineStage(bc, data, col, dual, is_switch_dual(dual, col.track)))
    carried = []
    for outer, inner in zip(stages, stages[1:]):
        m = natural_route(cp, inner.pretrack, inner.collapsed, outer.pretrack, outer.collapsed)
        carried.append(verify_carrying(inner.collapsed.track, outer.collapsed.track, m))
    return stages, carried


def weights_to_jsonable(w: Mapping) -> dict:
    return {str(b): str(v) for b, v in sorted(w.items())}

