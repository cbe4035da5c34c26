"""Random curve pairs for property tests and the acceptance suite."""

from __future__ import annotations

import random

from .curvepair import CurvePair, CurvePairError, faces, from_signs, reduce_to_minimal_position


def random_noncrossing(rng: random.Random, items: list) -> list[tuple]:
    """A random non-crossing perfect matching of ``items`` (linear order)."""
    if not items:
        return []
    k = rng.randrange(1, len(items), 2)
    return (
        [(items[0], items[k])]
        + random_noncrossing(rng, items[1:k])
        + random_noncrossing(rng, items[k + 1 :])
    )


def disc_like_pair(rng: random.Random, n: int, reduce: bool = True) -> CurvePair | None:
    """A pair whose points admit an unlinked pairing with opposite signs.

    This mimics the boundary pattern of two discs in a handlebody: arcs of
    intersection pair the points, and the two ends of an arc cross with
    opposite signs.  Bigons are removed when ``reduce`` is set (which may
    leave non-disc complementary regions); otherwise such patterns give None.
    """
    verts = list(range(n))
    a_match = random_noncrossing(rng, verts)
    slots = random_noncrossing(rng, list(range(n)))
    rng.shuffle(a_match)
    b_order = [0] * n
    for (i, j), (u, v) in zip(slots, a_match):
        if rng.random() < 0.5:
            u, v = v, u
        b_order[i], b_order[j] = u, v
    signs = {}
    for u, v in a_match:
        s = rng.choice((1, -1))
        signs[u], signs[v] = s, -s
    try:
        cp = from_signs(verts, b_order, signs, allow_bigons=reduce)
    except CurvePairError:
        return None
    return reduce_to_minimal_position(cp) if reduce else cp


def random_pair(rng: random.Random, n: int) -> CurvePair | None:
    verts = list(range(n))
    b_order = verts[:]
    rng.shuffle(b_order)
    signs = {v: rng.choice((1, -1)) for v in verts}
    try:
        return from_signs(verts, b_order, signs)
    except CurvePairError:
        return None


def sample_pairs(
    seed: int,
    count: int,
    genus: tuple[int, int] = (2, 3),
    sizes: tuple[int, ...] = (8, 10, 12, 14),
    max_points: int = 12,
    min_points: int = 1,
    filling: bool = False,
    max_tries: int = 200000,
) -> list[CurvePair]:
    """Distinct disc-like pairs in minimal position with genus in range.

    ``sizes`` are the point counts drawn before bigons are removed; kept pairs
    have between ``min_points`` and ``max_points`` intersections.
    """
    rng = random.Random(seed)
    out, seen = [], set()
    for _ in range(max_tries):
        if len(out) >= count:
            break
        cp = disc_like_pair(rng, rng.choice(sizes))
        if cp is None or not genus[0] <= cp.genus <= genus[1]:
            continue
        if not min_points <= cp.n <= max_points:
            continue
        if filling and any(chi != 1 for chi in cp.region_table[0]):
            continue
        if cp.key() in seen:
            continue
        seen.add(cp.key())
        out.append(cp)
    return out


def has_nonrectangle(cp: CurvePair) -> bool:
    return any(f.kind != "rectangle" for f in faces(cp))


def random_trivalent_track(rng: random.Random, switches: int):
    """A connected trivalent track with punctures in its small faces.

    Ends are paired at random.  A face that is a disc with one or two cusps
    gets a puncture; a smooth disc face makes the draw fail (returns None).
    """
    from .traintrack import TrackError, TrackRegion, TrainTrack, validate_track

    if switches % 2:
        raise ValueError("a trivalent track needs an even number of switches")
    slots = [(s, k) for s in range(switches) for k in range(3)]
    rng.shuffle(slots)
    ends = {}
    for b in range(len(slots) // 2):
        ends[slots[2 * b]] = (b, 0)
        ends[slots[2 * b + 1]] = (b, 1)
    sw = {}
    for s in range(switches):
        one, two = ends[(s, 0)], (ends[(s, 1)], ends[(s, 2)])
        sw[s] = ((one,), two) if rng.random() < 0.5 else (two, (one,))
    t = TrainTrack(sw)
    seen, stack = {0}, [0]
    while stack:
        s = stack.pop()
        for x in t.ccw(s):
            u = t.switch_of(t.other(x))
            if u not in seen:
                seen.add(u)
                stack.append(u)
    if len(seen) != switches:
        return None
    regions = []
    for fi, cyc in enumerate(t.face_cycles):
        c = t.cusps(fi)
        if c == 0:
            return None
        if c <= 2:
            regions.append(TrackRegion(0, (cyc[0],), 1))
    try:
        return validate_track(TrainTrack(sw, tuple(regions)))
    except TrackError:
        return None
