"""Distances to bipartite and to DTu_2(n), edge removal, and the near-extremal audit."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import floor

from .digraph import Digraph, WeightParam, bits, induced, vertex_weight
from .errors import InputError, UnsupportedSizeError
from .enumeration import enumerate_class
from .patterns import contains, iter_copies, pair_counts

BIPARTITION_MAX_N = 24
REMOVAL_EXACT_MAX_EDGES = 20


def _check_size(G: Digraph) -> None:
    if G.n > BIPARTITION_MAX_N:
        raise UnsupportedSizeError(f"exact bipartition scans support n <= {BIPARTITION_MAX_N}")


def _frac(x) -> Fraction:
    return Fraction(repr(x)) if isinstance(x, float) else Fraction(x)


@lru_cache(maxsize=64)
def split_masks(n: int) -> tuple:
    """All ``(S, complement)`` masks with vertex 0 in S (one mask pair per bipartition)."""
    full = (1 << n) - 1
    if n == 0:
        return ((0, 0),)
    return tuple((1 | (rest << 1), full & ~(1 | (rest << 1))) for rest in range(1 << (n - 1)))


def min_inside_edges(out, splits) -> int:
    """Fewest ordered edges inside the parts over the given bipartitions."""
    best = None
    for s, t in splits:
        c = 0
        for v in bits(s):
            c += (out[v] & s).bit_count()
        for v in bits(t):
            c += (out[v] & t).bit_count()
        if best is None or c < best:
            best = c
    return best


def _inside(G: Digraph, s: int) -> int:
    t = ((1 << G.n) - 1) & ~s
    return sum((G.out[v] & (s if s >> v & 1 else t)).bit_count() for v in range(G.n))


def bipartite_deletion_distance(G: Digraph) -> tuple[int, tuple[tuple, tuple]]:
    """Fewest ordered-edge deletions that leave the underlying graph bipartite.

    Scans every bipartition with vertex 0 in S (Gray-code order, O(1) update per
    step); among minimizers the lexicographically least S is returned.
    """
    _check_size(G)
    n = G.n
    if n == 0:
        return 0, ((), ())
    s = 1
    cur = _inside(G, s)
    best, best_s = cur, (0,)
    for k in range(1, 1 << (n - 1)):
        flip = (k & -k).bit_length()  # vertex toggled in the Gray sequence
        b = 1 << flip
        t = ((1 << n) - 1) & ~s
        to_s = (G.out[flip] & s).bit_count() + (G.inn[flip] & s).bit_count()
        to_t = (G.out[flip] & t & ~b).bit_count() + (G.inn[flip] & t & ~b).bit_count()
        if s & b:
            cur += to_t - to_s
            s &= ~b
        else:
            cur += to_s - to_t
            s |= b
        if cur <= best:
            st = tuple(bits(s))
            if cur < best or st < best_s:
                best, best_s = cur, st
    S = best_s
    return best, (S, tuple(v for v in range(n) if v not in S))


def dtu2_edit_distance(G: Digraph) -> tuple[int, tuple[tuple, tuple]]:
    """Ordered-edge symmetric difference to the nearest balanced complete double bipartite digraph."""
    _check_size(G)
    n = G.n
    if n == 0:
        return 0, ((), ())
    m = G.edge_count()
    sizes = {(n + 1) // 2, n // 2} - {0}
    best = None
    for k in sorted(sizes):
        for rest in combinations(range(1, n), k - 1):
            S = (0,) + rest
            s = 1
            for v in rest:
                s |= 1 << v
            dist = 2 * _inside(G, s) + 2 * k * (n - k) - m
            if best is None or (dist, S) < best:
                best = (dist, S)
    if best is None:  # n == 1
        return m, ((0,), ())
    dist, S = best
    return dist, (S, tuple(v for v in range(n) if v not in S))


# -- removal -------------------------------------------------------------


def _copy_edge_sets(G: Digraph, H: Digraph) -> list[frozenset]:
    sets = set()
    Hedges = H.edges()
    for mp in iter_copies(G, H):
        sets.add(frozenset((mp[x], mp[y]) for x, y in Hedges))
    return sorted(sets, key=lambda s: sorted(s))


def _greedy_deletions(G: Digraph, H: Digraph) -> list[tuple[int, int]]:
    deleted = []
    cur = G
    while True:
        counts: dict = {}
        for es in _copy_edge_sets(cur, H):
            for e in es:
                counts[e] = counts.get(e, 0) + 1
        if not counts:
            return deleted
        e = min(counts, key=lambda e: (-counts[e], e))
        deleted.append(e)
        cur = cur.with_edges(remove=[e])


def _exact_deletions(G: Digraph, H: Digraph, upper: list) -> list[tuple[int, int]]:
    sets = _copy_edge_sets(G, H)
    best = [list(upper)]

    def lower_bound(chosen: set) -> int:
        # disjoint unhit copies each need a distinct deletion
        used: set = set()
        lb = 0
        for s in sets:
            if s & chosen or s & used:
                continue
            lb += 1
            used |= s
        return lb

    def rec(chosen: list, cset: set):
        if len(chosen) + lower_bound(cset) >= len(best[0]):
            return
        target = next((s for s in sets if not s & cset), None)
        if target is None:
            best[0] = list(chosen)
            return
        for e in sorted(target):
            chosen.append(e)
            cset.add(e)
            rec(chosen, cset)
            cset.discard(e)
            chosen.pop()

    if sets:
        rec([], set())
    else:
        best[0] = []
    return best[0]


def removal(G: Digraph, H: Digraph, mode: str = "greedy") -> tuple[Digraph, int]:
    """Delete ordered edges until G is H-free; returns the edited digraph and the deletion count.

    ``greedy`` repeatedly drops the edge lying in the most copies (ties: smallest
    edge).  ``exact`` finds a minimum hitting set of the copies by branch and bound.
    """
    if H.edge_count() == 0 and H.n <= G.n:
        raise InputError("an edgeless pattern cannot be removed by deleting edges")
    if mode == "greedy":
        dels = _greedy_deletions(G, H)
    elif mode == "exact":
        if G.edge_count() > REMOVAL_EXACT_MAX_EDGES:
            raise UnsupportedSizeError(f"exact removal supports at most {REMOVAL_EXACT_MAX_EDGES} ordered edges")
        dels = _exact_deletions(G, H, _greedy_deletions(G, H))
    else:
        raise InputError(f"unknown removal mode {mode!r}")
    out = G.with_edges(remove=dels)
    assert not contains(out, H), "removal left a copy of the pattern"
    return out, len(dels)


# -- audit ---------------------------------------------------------------


@dataclass(frozen=True)
class StabilityParams:
    gamma: float = 0.1
    beta: float = 0.1
    alpha: float = 0.1
    theta: float = 0.1

    def __post_init__(self):
        for name in ("gamma", "beta", "alpha", "theta"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise InputError(f"{name} must lie in (0,1), got {v}")


@dataclass
class StabilityReport:
    pruned: list[int]
    good_pairs: int
    case: str
    distance: int
    bipartition: tuple[tuple, tuple]
    remaining: list[int]
    pruning_rounds: list[list[int]] = field(default_factory=list)
    beta_budget: int = 0
    within_beta: bool = False
    double_edge_overlap: dict | None = None

    def to_json(self) -> dict:
        return {
            "pruned": self.pruned,
            "pruning_rounds": self.pruning_rounds,
            "iterated_pruning": True,
            "remaining": self.remaining,
            "good_pairs": self.good_pairs,
            "case": self.case,
            "distance": self.distance,
            "bipartition": [list(self.bipartition[0]), list(self.bipartition[1])],
            "beta_budget": self.beta_budget,
            "within_beta": self.within_beta,
            "double_edge_overlap": self.double_edge_overlap,
        }


def stability_audit(G: Digraph, a: WeightParam, p: StabilityParams) -> StabilityReport:
    """Replay the branch structure of the stability argument on a concrete digraph.

    1. repeatedly drop every vertex of weight below ``a * m/2 * (1 - gamma)``,
       where ``m`` is the current vertex count;
    2. count good pairs (at least ``theta * m`` transitive triangles);
    3. case 1 if good pairs reach ``alpha * m^2``, otherwise delete good-pair
       edges and split on whether a double edge survives (2.1) or not (2.2);
    4. report the distance of the pruned digraph to DTu_2.
    """
    _check_size(G)
    gamma = _frac(p.gamma) if a.exact else p.gamma
    alive = list(range(G.n))
    rounds = []
    while alive:
        H = induced(G, alive)
        m = len(alive)
        threshold = a.value * m * (1 - gamma) / 2
        light = [alive[i] for i in range(m) if a.compare(vertex_weight(H, i, a), threshold) < 0]
        if not light:
            break
        rounds.append(light)
        alive = [v for v in alive if v not in set(light)]
    P = induced(G, alive)
    m = P.n
    counts = pair_counts(P)
    good = [pr for pr, c in counts.items() if c >= _frac(p.theta) * m]
    overlap = None
    if good and len(good) >= _frac(p.alpha) * m * m:
        case = "1"
    else:
        Gp = P.with_edges(remove=[e for u, v in good for e in ((u, v), (v, u))])
        doubles = [(u, v) for u in range(m) for v in bits(Gp.both(u)) if u < v]
        if doubles:
            case = "2.1"
            u, v = doubles[0]
            overlap = {
                "pair": [alive[u], alive[v]],
                "common_neighbours": (Gp.nbr(u) & Gp.nbr(v)).bit_count(),
                "double_degrees": [Gp.both(u).bit_count(), Gp.both(v).bit_count()],
            }
        else:
            case = "2.2"
    dist, (S, T) = dtu2_edit_distance(P)
    bip = (tuple(alive[i] for i in S), tuple(alive[i] for i in T))
    budget = floor(_frac(p.beta) * G.n * G.n)
    pruned = sorted(set(range(G.n)) - set(alive))
    return StabilityReport(pruned, len(good), case, dist, bip, alive, rounds, budget, dist <= budget, overlap)


# -- desk-scale sweep ----------------------------------------------------


@dataclass
class SweepResult:
    n: int
    min_weight: object
    members: int
    max_distance: int | None
    histogram: dict
    argmax: tuple | None


class _SweepVisitor:
    def __init__(self, n, a: WeightParam, min_weight):
        self.n, self.a, self.min_weight = n, a, min_weight
        self.members = 0
        self.histogram: dict = {}
        self.argmax = None
        self.best = None

    def __call__(self, out, f1, f2):
        if self.a.compare(self.a.weigh(f1, f2), self.min_weight) < 0:
            return
        d, _ = dtu2_edit_distance(Digraph(self.n, out))
        self.members += 1
        self.histogram[d] = self.histogram.get(d, 0) + 1
        if self.best is None or d > self.best:
            self.best, self.argmax = d, tuple(out)


def near_extremal_sweep(n: int, H: Digraph, a: WeightParam, min_weight) -> SweepResult:
    """Largest DTu_2 distance among all H-free digraphs on n vertices with weight >= min_weight."""
    v = _SweepVisitor(n, a, min_weight)
    enumerate_class(n, "digraph", H, v)
    return SweepResult(n, min_weight, v.members, v.best, dict(sorted(v.histogram.items())), v.argmax)
