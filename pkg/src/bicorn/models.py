"""Finite model spaces for the coarse diagnostics.

The Farey graph stands in for the curve graph of the once-punctured torus.
It is a modelling choice: coned Farey subsets are not claimed to be disc
sets of any compression body.  Free-group tree balls give exact trees with
coset families, and random walks on either give drift curves.  Balls are
truncated, never wrapped: maps are partial and walks that leave the ball are
censored and counted.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd
from typing import Mapping, Sequence

from .coarse import (
    CoarseError,
    GraphAutomorphism,
    MetricGraph,
    SubsetFamily,
    csv_rows,
    tail_slope,
)


class BoundTooSmall(CoarseError):
    pass


class AllTrialsCensored(CoarseError):
    pass


# -- Farey graph ------------------------------------------------------------------


def slope_label(p: int, q: int) -> str:
    return f"{p}/{q}"


def _normal(p: int, q: int) -> tuple[int, int]:
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    return p, q


@dataclass
class FareyBall:
    bound: int
    graph: MetricGraph
    slopes: dict  # label -> (p, q)

    def label(self, p: int, q: int) -> str:
        return slope_label(*_normal(p, q))

    def action(self, matrix: Sequence[Sequence[int]], name: str = "M") -> GraphAutomorphism:
        """Partial automorphism p/q -> (ap+bq)/(cp+dq) for a determinant-one matrix."""
        (a, b), (c, d) = matrix
        if a * d - b * c != 1:
            raise CoarseError(f"matrix {matrix} does not have determinant 1")
        mapping = {}
        for lab, (p, q) in self.slopes.items():
            img = self.label(a * p + b * q, c * p + d * q)
            if img in self.slopes:
                mapping[lab] = img
        return GraphAutomorphism(mapping, True, name)


def farey_ball(bound: int) -> FareyBall:
    """Reduced slopes p/q with |p|, q <= bound, plus 1/0; edges when |ps - qr| = 1."""
    if bound < 1:
        raise BoundTooSmall(f"bound must be at least 1, got {bound}")
    slopes = {slope_label(1, 0): (1, 0)}
    for q in range(1, bound + 1):
        for p in range(-bound, bound + 1):
            if gcd(p, q) == 1:
                slopes[slope_label(p, q)] = (p, q)
    labels = list(slopes)
    edges = []
    for i, u in enumerate(labels):
        p, q = slopes[u]
        for v in labels[i + 1 :]:
            r, s = slopes[v]
            if abs(p * s - q * r) == 1:
                edges.append((u, v))
    return FareyBall(bound, MetricGraph(labels, edges), slopes)


# -- free group trees -----------------------------------------------------------------

INVERSE = {"a": "A", "A": "a", "b": "B", "B": "b"}
IDENTITY = "e"


def reduce_word(word: str) -> str:
    out: list[str] = []
    for ch in word:
        if ch == IDENTITY:
            continue
        if out and out[-1] == INVERSE[ch]:
            out.pop()
        else:
            out.append(ch)
    return "".join(out) or IDENTITY


def word_length(w: str) -> int:
    return 0 if w == IDENTITY else len(w)


@dataclass
class FreeTreeBall:
    radius: int
    graph: MetricGraph
    words: list

    def left_action(self, word: str, name: str | None = None) -> GraphAutomorphism:
        """Left multiplication by ``word`` where the image stays in the ball."""
        mapping = {}
        for w in self.words:
            img = reduce_word(word + w)
            if word_length(img) <= self.radius:
                mapping[w] = img
        return GraphAutomorphism(mapping, True, name or word)


def free_tree_ball(radius: int) -> FreeTreeBall:
    """Ball of the Cayley tree of F(a, b); edges by right multiplication."""
    if radius < 2:
        raise BoundTooSmall(f"radius must be at least 2, got {radius}")
    words, edges = [IDENTITY], []
    frontier = [IDENTITY]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for g in "aAbB":
                if w != IDENTITY and w[-1] == INVERSE[g]:
                    continue
                child = g if w == IDENTITY else w + g
                nxt.append(child)
                edges.append((w, child))
        words.extend(nxt)
        frontier = nxt
    return FreeTreeBall(radius, MetricGraph(words, edges), words)


def coset_representative(w: str, generator: str = "a") -> str:
    """Shortest element of w<g>: strip trailing powers of the generator."""
    g = {generator, INVERSE[generator]}
    if w == IDENTITY:
        return w
    k = len(w)
    while k and w[k - 1] in g:
        k -= 1
    return w[:k] or IDENTITY


def coset_family(ball: FreeTreeBall, generator: str = "a", translates: Sequence[str] | None = None) -> SubsetFamily:
    """Left cosets w<g> intersected with the ball.

    With ``translates`` only the cosets through those words are kept;
    otherwise every coset meeting the ball is included.
    """
    groups: dict[str, list] = {}
    for w in ball.words:
        groups.setdefault(coset_representative(w, generator), []).append(w)
    if translates is not None:
        keep = [coset_representative(reduce_word(t), generator) for t in translates]
        missing = [t for t in keep if t not in groups]
        if missing:
            raise CoarseError(f"translates outside the ball: {missing}")
        groups = {k: groups[k] for k in dict.fromkeys(keep)}
    return SubsetFamily.of({f"{rep}<{generator}>": ws for rep, ws in groups.items()})


# -- random walks ----------------------------------------------------------------------


@dataclass(frozen=True)
class WalkSpec:
    weights: tuple  # (generator name, probability) pairs
    length: int
    trials: int
    seed: int = 0

    def __post_init__(self):
        total = sum(p for _, p in self.weights)
        if abs(total - 1) > 1e-12:
            raise CoarseError(f"step probabilities sum to {total}, not 1")
        if self.length < 1 or self.trials < 1:
            raise CoarseError("length and trial count must be positive")

    @classmethod
    def uniform(cls, names: Sequence[str], length: int, trials: int, seed: int = 0) -> "WalkSpec":
        return cls(tuple((n, 1 / len(names)) for n in names), length, trials, seed)


@dataclass
class DriftReport:
    ns: list
    mean_ratio: list  # mean of d(x0, w_n x0) / n over kept trials
    mean_distance: list
    slope: float  # least-squares slope of mean distance over the tail
    above_fraction: float  # fraction of kept trials with d >= L n at the final step
    threshold: float
    kept: int
    censored: int
    seed: int = 0
    notes: list = field(default_factory=list)

    def to_csv(self) -> str:
        rows = [(n, m, r) for n, m, r in zip(self.ns, self.mean_distance, self.mean_ratio)]
        head = (
            f"# seed={self.seed} kept={self.kept} censored={self.censored} "
            f"slope={self.slope!r} L={self.threshold!r} above={self.above_fraction!r}\n"
        )
        return head + csv_rows(("n", "mean_distance", "mean_ratio"), rows)


def estimate_drift(
    g: MetricGraph,
    spec: WalkSpec,
    x0,
    generators: Mapping[str, GraphAutomorphism],
    threshold: float = 0.5,
) -> DriftReport:
    """Empirical drift of the walk x0 -> s_n ... s_1 x0.

    The steps are i.i.d., so the reversed product has the law of w_n at each
    fixed n and the distances d(x0, w_n x0) are sampled faithfully.  Each
    trial uses its own generator seeded from (seed, trial).
    """
    names = [n for n, _ in spec.weights]
    probs = [p for _, p in spec.weights]
    for n in names:
        if n not in generators:
            raise CoarseError(f"no automorphism named {n}")
    row = g.sssp2(x0)
    totals = [0] * spec.length
    above = kept = censored = 0
    for t in range(spec.trials):
        rng = random.Random(spec.seed * 1_000_003 + t)
        x, dists = x0, []
        for _ in range(spec.length):
            f = generators[rng.choices(names, probs)[0]]
            x = f.mapping.get(x)
            if x is None or x not in g.index:
                break
            dists.append(row[g.index[x]])
        if len(dists) < spec.length:
            censored += 1
            continue
        kept += 1
        for k, d2 in enumerate(dists):
            totals[k] += d2
        if dists[-1] / 2 >= threshold * spec.length:
            above += 1
    if not kept:
        raise AllTrialsCensored(f"all {spec.trials} trials left the domain")
    ns = list(range(1, spec.length + 1))
    mean_d = [tot / 2 / kept for tot in totals]
    ratio = [m / n for m, n in zip(mean_d, ns)]
    return DriftReport(
        ns, ratio, mean_d, tail_slope(ns, mean_d), above / kept, threshold, kept, censored, spec.seed
    )


def line_graph(n: int) -> MetricGraph:
    return MetricGraph(range(-n, n + 1), [(i, i + 1) for i in range(-n, n)])


def line_shift(n: int, step: int) -> GraphAutomorphism:
    return GraphAutomorphism(
        {i: i + step for i in range(-n, n + 1) if -n <= i + step <= n}, True, f"shift{step:+d}"
    )


def cycle_graph(n: int) -> MetricGraph:
    return MetricGraph(range(n), [(i, (i + 1) % n) for i in range(n)])


def cycle_rotation(n: int, step: int) -> GraphAutomorphism:
    return GraphAutomorphism({i: (i + step) % n for i in range(n)}, False, f"rot{step:+d}")


def coset_chain(ball: FreeTreeBall, b_step: int, a_step: int, half: int) -> tuple[list[str], list[list[str]]]:
    """Cosets w_i<a> with w_i = (b^L a^m)^i for -half <= i <= half.

    Consecutive cosets are L apart and the two projections onto each inner
    coset are m apart, so the chain is min(L, m)-well-separated.
    """
    unit = "b" * b_step + "a" * a_step
    inv = reduce_word("".join(INVERSE[ch] for ch in reversed(unit)))
    words = []
    for i in range(-half, half + 1):
        words.append(reduce_word((inv if i < 0 else unit) * abs(i)))
    for w in words:
        if word_length(w) > ball.radius:
            raise BoundTooSmall(f"{w} lies outside the ball of radius {ball.radius}")
    cosets: dict[str, list] = {}
    for w in ball.words:
        cosets.setdefault(coset_representative(w), []).append(w)
    return words, [cosets[coset_representative(w)] for w in words]
