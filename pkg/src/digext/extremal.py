"""Weighted extremal numbers, the container exponent, colouring checks and the census."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, floor
from typing import Sequence

from .constructions import dturan
from .digraph import (
    CanonicalKey,
    Digraph,
    Number,
    WeightParam,
    _num_json,
    bits,
    canonical_key,
    weighted_size,
)
from .enumeration import (
    ALPHABETS,
    enumerate_class,
    enumerate_flat,
    normalize_class,
    pair_order,
    run_sharded,
)
from .errors import InputError, UnsupportedSizeError
from .stability import min_inside_edges, split_masks

CHROMATIC_MAX_N = 12


def as_fraction(x) -> Fraction:
    """Exact value of a user-supplied decimal (0.1 means 1/10, not the nearest double)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


# -- extremal numbers ----------------------------------------------------


class FrontierCollector:
    """Keep every visited digraph whose ``(f1, f2)`` profile is Pareto-maximal.

    For any ``a > 0`` the maximum of ``a*f2 + f1`` is attained on this frontier,
    so one sweep serves every weight at once.
    """

    def __init__(self):
        self.frontier: dict[tuple[int, int], list[tuple]] = {}
        self._dominated: set[tuple[int, int]] = set()

    def __call__(self, out, f1, f2):
        key = (f1, f2)
        bucket = self.frontier.get(key)
        if bucket is not None:
            bucket.append(tuple(out))
            return
        if key in self._dominated:
            return
        for g1, g2 in self.frontier:
            if g1 >= f1 and g2 >= f2:
                self._dominated.add(key)
                return
        for k in [k for k in self.frontier if k[0] <= f1 and k[1] <= f2]:
            del self.frontier[k]
            self._dominated.add(k)
        self.frontier[key] = [tuple(out)]

    def merge(self, other: "FrontierCollector") -> None:
        for key, bucket in other.frontier.items():
            if key in self.frontier:
                self.frontier[key].extend(bucket)
                continue
            for out in bucket:
                self(list(out), *key)


@dataclass
class ExtremalRecord:
    n: int
    pattern: Digraph
    a: WeightParam
    value: Number
    witnesses: list[tuple[CanonicalKey, Digraph]]
    exhaustive: bool
    maximizers: int = 0  # labelled maximizers found
    visited: int = 0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "pattern": {"n": self.pattern.n, "edges": self.pattern.edges()},
            "a": self.a.as_json(),
            "value": _num_json(self.value),
            "exhaustive": self.exhaustive,
            "witness_classes": len(self.witnesses),
            "witnesses": [
                {"key": [k[0], k[1]], "edges": G.edges()} for k, G in self.witnesses
            ],
            "labelled_maximizers": self.maximizers,
            "visited": self.visited,
        }


def _records_from_frontier(n, H, weights, frontier, visited) -> list[ExtremalRecord]:
    records = []
    for a in weights:
        best = None
        for f1, f2 in frontier:
            v = a.weigh(f1, f2)
            if best is None or a.compare(v, best) > 0:
                best = v
        graphs = []
        for (f1, f2), bucket in sorted(frontier.items()):
            if a.eq(a.weigh(f1, f2), best):
                graphs += bucket
        classes: dict = {}
        for out in sorted(graphs):
            G = Digraph(n, out)
            classes.setdefault(canonical_key(G), G)
        witnesses = sorted(classes.items(), key=lambda kv: kv[0])
        records.append(ExtremalRecord(n, H, a, best, witnesses, True, len(graphs), visited))
    return records


def _frontier_factory():
    return FrontierCollector()


def extremal_records(
    n: int,
    H: Digraph,
    weights: Sequence[WeightParam],
    shards: int | None = None,
    jobs: int = 1,
) -> list[ExtremalRecord]:
    """One exhaustive sweep over H-free digraphs on n vertices, one record per weight."""
    if shards is None:
        collector = FrontierCollector()
        stats = enumerate_class(n, "digraph", H, collector)
    else:
        stats, collector = run_sharded(n, "digraph", H, _frontier_factory, shards, jobs=jobs)
    if not collector.frontier:
        raise InputError(f"every digraph on {n} vertices contains the pattern")
    return _records_from_frontier(n, H, weights, collector.frontier, stats.visited)


def extremal_number(
    n: int,
    H: Digraph,
    a: WeightParam,
    mode: str = "exhaustive",
    shards: int | None = None,
    jobs: int = 1,
) -> ExtremalRecord:
    """ex_a(n, H) with maximizers grouped by isomorphism class.

    ``construction-only`` returns the doubled Turán lower bound with
    ``r = chi(H) - 1`` parts, without any search.
    """
    if mode == "exhaustive":
        return extremal_records(n, H, [a], shards, jobs)[0]
    if mode != "construction-only":
        raise InputError(f"unknown mode {mode!r}")
    r = max(1, chromatic_number(H) - 1)
    G = dturan(n, r)
    return ExtremalRecord(n, H, a, weighted_size(G, a), [(canonical_key(G), G)] if n <= 10 else [], False, 1, 0)


def density_ratio(n: int, H: Digraph, a: WeightParam, record: ExtremalRecord | None = None) -> Number:
    """ex_a(n, H) / (a * C(n, 2))."""
    if n < 2:
        raise InputError("density ratio needs n >= 2")
    rec = record or extremal_number(n, H, a)
    return rec.value / (a.value * comb(n, 2))


# -- container exponent --------------------------------------------------


def m_exponent(H: Digraph) -> Fraction:
    """max (e(H') - 1) / (v(H') - 2) over subgraphs with at least two edges.

    For a fixed vertex set the induced subgraph has the most edges, so it is
    enough to scan induced subgraphs on at least three vertices.
    """
    if not H.is_oriented():
        raise InputError("m(H) is defined for oriented graphs only")
    if H.edge_count() < 2:
        raise InputError("m(H) needs at least two edges")
    best = None
    for mask in range(1 << H.n):
        k = mask.bit_count()
        if k < 3:
            continue
        e = sum((H.out[v] & mask).bit_count() for v in bits(mask))
        if e < 2:
            continue
        val = Fraction(e - 1, k - 2)
        if best is None or val > best:
            best = val
    return best


# -- colourings ----------------------------------------------------------


def _adjacency(H: Digraph) -> list[int]:
    return [H.nbr(v) for v in range(H.n)]


def _colourable(adj, n, k) -> list[int] | None:
    colour = [-1] * n
    order = sorted(range(n), key=lambda v: -adj[v].bit_count())

    def rec(idx, used):
        if idx == n:
            return True
        v = order[idx]
        banned = {colour[u] for u in bits(adj[v]) if colour[u] >= 0}
        # symmetry break: a fresh colour is only tried once
        for c in range(min(k, used + 1)):
            if c not in banned:
                colour[v] = c
                if rec(idx + 1, max(used, c + 1)):
                    return True
                colour[v] = -1
        return False

    return colour if rec(0, 0) else None


def chromatic_number(H: Digraph) -> int:
    """Chromatic number of the underlying undirected graph."""
    if H.n > CHROMATIC_MAX_N:
        raise UnsupportedSizeError(f"chromatic_number supports up to {CHROMATIC_MAX_N} vertices")
    if H.n == 0:
        return 0
    adj = _adjacency(H)
    k = 1
    while _colourable(adj, H.n, k) is None:
        k += 1
    return k


def proper_colourings(H: Digraph, k: int):
    """Every proper colouring with colours ``0..k-1``, up to renaming colours
    (colours appear in order of first use along vertex order)."""
    adj = _adjacency(H)
    colour = [-1] * H.n

    def rec(v, used):
        if v == H.n:
            yield list(colour)
            return
        banned = {colour[u] for u in bits(adj[v] & ((1 << v) - 1))}
        for c in range(min(k, used + 1)):
            if c not in banned:
                colour[v] = c
                yield from rec(v + 1, max(used, c + 1))
        colour[v] = -1

    yield from rec(0, 0)


def is_homogeneous(H: Digraph) -> tuple[bool, list[int] | None]:
    """Whether some proper chi(H)-colouring has all edges between any two classes in one direction."""
    chi = chromatic_number(H)
    for colouring in proper_colourings(H, chi):
        seen = set()
        for u, v in H.edges():
            seen.add((colouring[u], colouring[v]))
        if all((j, i) not in seen for i, j in seen):
            return True, colouring
    return False, None


# -- random members ------------------------------------------------------


def random_digraph(n: int, cls: str, seed: int) -> Digraph:
    """Uniform labelled member of the class (each pair state equally likely)."""
    alphabet = ALPHABETS[normalize_class(cls)]
    rng = random.Random(seed)
    out = [0] * n
    for i, j in pair_order(n):
        s = rng.choice(alphabet)
        if s & 1:
            out[i] |= 1 << j
        if s & 2:
            out[j] |= 1 << i
    return Digraph(n, out)


# -- census --------------------------------------------------------------


class CensusCounter:
    """Count members and histogram their distance to bipartite (deletions only)."""

    def __init__(self, n: int):
        self.n = n
        self.splits = split_masks(n)
        self.total = 0
        self.histogram: dict[int, int] = {}

    def __call__(self, out, f1, f2):
        d = min_inside_edges(out, self.splits)
        self.total += 1
        self.histogram[d] = self.histogram.get(d, 0) + 1

    def merge(self, other: "CensusCounter") -> None:
        self.total += other.total
        for d, c in other.histogram.items():
            self.histogram[d] = self.histogram.get(d, 0) + c


@dataclass(frozen=True)
class _CensusFactory:
    n: int

    def __call__(self):
        return CensusCounter(self.n)


@dataclass
class CensusRow:
    n: int
    cls: str
    pattern: Digraph
    total: int
    bipartite_editable: int
    budget: int
    alpha: Fraction
    histogram: dict = field(default_factory=dict)
    strategy: str = "pruned"
    shard: tuple | None = None

    def to_json(self) -> dict:
        d = {
            "n": self.n,
            "class": self.cls,
            "pattern": {"n": self.pattern.n, "edges": self.pattern.edges()},
            "total": self.total,
            "bipartite_editable": self.bipartite_editable,
            "budget": self.budget,
            "alpha": str(self.alpha),
            "distance_histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "strategy": self.strategy,
        }
        if self.shard is not None:
            d["shard"] = {"index": self.shard[0], "of": self.shard[1]}
        return d


def census(
    n: int,
    cls: str,
    H: Digraph,
    alpha,
    shards: int | None = None,
    shard: int | None = None,
    jobs: int = 1,
    strategy: str = "pruned",
) -> CensusRow:
    """Count labelled H-free members and those within floor(alpha n^2) deletions of bipartite."""
    cls = normalize_class(cls)
    alpha = as_fraction(alpha)
    if alpha < 0:
        raise InputError("alpha must be nonnegative")
    budget = floor(alpha * n * n)
    if strategy == "flat":
        counter = CensusCounter(n)
        enumerate_flat(n, cls, H, counter)
    elif strategy != "pruned":
        raise InputError(f"unknown strategy {strategy!r}")
    elif shards is None:
        counter = CensusCounter(n)
        enumerate_class(n, cls, H, counter)
    else:
        _, counter = run_sharded(n, cls, H, _CensusFactory(n), shards, only=shard, jobs=jobs)
    editable = sum(c for d, c in counter.histogram.items() if d <= budget)
    return CensusRow(
        n, cls, H, counter.total, editable, budget, alpha, dict(counter.histogram), strategy,
        (shard, shards) if shards is not None and shard is not None else None,
    )

