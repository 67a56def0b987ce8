"""Regular pairs, reduced digraphs, pure digraphs and candidate partitions.

A pair (A, B) is eps-regular when every X in A, Y in B with |X| > eps|A| and
|Y| > eps|B| has |d(X,Y) - d(A,B)| < eps, with d counting only A -> B edges.

For a fixed X, d(X, Y) over all Y of a given size is extremal at the Y made of
the vertices with the most (or fewest) in-neighbours in X, so the exact check
enumerates subsets of A only and sorts B once per X.
"""
from __future__ import annotations

import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Sequence

from .digraph import Digraph, bits, mask_of
from .errors import InfeasiblePartitionError, InputError, UnsupportedSizeError

EXACT_MAX_SIDE = 12
DEFAULT_TRIALS = 10_000


def _frac(x) -> Fraction:
    return Fraction(repr(x)) if isinstance(x, float) else Fraction(x)


def _check_sides(G: Digraph, A, B) -> tuple[list, list]:
    A, B = sorted(set(A)), sorted(set(B))
    if not A or not B:
        raise InputError("both sides of a pair must be nonempty")
    if set(A) & set(B):
        raise InputError("the two sides of a pair must be disjoint")
    for v in A + B:
        if not 0 <= v < G.n:
            raise InputError(f"vertex {v} outside [0,{G.n})")
    return A, B


@dataclass
class RegularityVerdict:
    regular: bool
    mode: str
    density: Fraction
    max_deviation: Fraction
    witness: tuple | None = None  # (X, Y, deviation) when irregular
    subsets_checked: int = 0

    @property
    def one_sided(self) -> bool:
        """A sampled 'regular' only means no counterexample was found."""
        return self.mode == "sampled" and self.regular

    def to_json(self) -> dict:
        d = {
            "regular": self.regular,
            "mode": self.mode,
            "one_sided": self.one_sided,
            "density": float(self.density),
            "max_deviation": float(self.max_deviation),
            "subsets_checked": self.subsets_checked,
            "witness": None,
        }
        if self.witness is not None:
            X, Y, dev = self.witness
            d["witness"] = {"X": list(X), "Y": list(Y), "deviation": float(dev), "deviation_exact": str(dev)}
        return d


class _Scanner:
    """Track the most deviant (X, Y) seen so far, scanning all Y sizes per X."""

    def __init__(self, G: Digraph, A: list, B: list, eps: Fraction):
        self.G, self.A, self.B, self.eps = G, A, B, eps
        self.nA, self.nB = len(A), len(B)
        self.e = sum((G.out[a] & mask_of(B)).bit_count() for a in A)
        self.min_x = floor(eps * self.nA) + 1
        self.min_y = floor(eps * self.nB) + 1
        self.ab = self.nA * self.nB
        self.best = None  # (num, den, xs, ys, X, Y)
        self.checked = 0

    def scan(self, xmask: int) -> None:
        G, B = self.G, self.B
        xs = xmask.bit_count()
        c = [(G.inn[y] & xmask).bit_count() for y in B]
        idx = range(self.nB)
        for order in (sorted(idx, key=lambda i: (-c[i], B[i])), sorted(idx, key=lambda i: (c[i], B[i]))):
            total = 0
            for m in range(1, self.nB + 1):
                total += c[order[m - 1]]
                if m < self.min_y:
                    continue
                self.checked += 1
                num = abs(total * self.ab - self.e * xs * m)
                den = xs * m * self.ab
                b = self.best
                if b is None or num * b[1] > b[0] * den or (
                    num * b[1] == b[0] * den and (xs, m) > (b[2], b[3])
                ):
                    self.best = (num, den, xs, m, xmask, tuple(sorted(B[i] for i in order[:m])))

    def verdict(self, mode: str) -> RegularityVerdict:
        density = Fraction(self.e, self.ab)
        if self.best is None:
            return RegularityVerdict(True, mode, density, Fraction(0), None, self.checked)
        num, den, _, _, xmask, Y = self.best
        dev = Fraction(num, den)
        if dev < self.eps:
            return RegularityVerdict(True, mode, density, dev, None, self.checked)
        return RegularityVerdict(False, mode, density, dev, (tuple(bits(xmask)), Y, dev), self.checked)


def check_regular_pair(
    G: Digraph,
    A: Sequence[int],
    B: Sequence[int],
    eps,
    mode: str = "exact",
    seed: int = 0,
    trials: int = DEFAULT_TRIALS,
) -> RegularityVerdict:
    """Decide (exact) or probe (sampled) eps-regularity of the ordered pair (A, B)."""
    A, B = _check_sides(G, A, B)
    eps = _frac(eps)
    sc = _Scanner(G, A, B, eps)
    if sc.min_x > len(A) or sc.min_y > len(B):
        return sc.verdict(mode)
    if mode == "exact":
        if len(A) > EXACT_MAX_SIDE or len(B) > EXACT_MAX_SIDE:
            raise UnsupportedSizeError(f"exact regularity checks need |A|,|B| <= {EXACT_MAX_SIDE}")
        for sub in range(1, 1 << len(A)):
            if sub.bit_count() >= sc.min_x:
                sc.scan(mask_of(A[i] for i in bits(sub)))
        return sc.verdict(mode)
    if mode != "sampled":
        raise InputError(f"unknown mode {mode!r}")
    bmask = mask_of(B)
    outdeg = {a: (G.out[a] & bmask).bit_count() for a in A}
    for key in (lambda a: (-outdeg[a], a), lambda a: (outdeg[a], a)):
        ranked = sorted(A, key=key)
        for k in range(sc.min_x, len(A) + 1):
            sc.scan(mask_of(ranked[:k]))
    rng = random.Random(seed)
    for _ in range(trials):
        k = rng.randint(sc.min_x, len(A))
        sc.scan(mask_of(rng.sample(A, k)))
    return sc.verdict("sampled")


def neighbor_concentration(
    G: Digraph,
    A: Sequence[int],
    B: Sequence[int],
    Y: Sequence[int],
    d,
    eps,
    X: Sequence[int] | None = None,
) -> tuple[int, int]:
    """Count A-vertices with fewer than (d-eps)|Y| out-neighbours in Y, and
    B-vertices with fewer than (d-eps)|X| in-neighbours in X (X defaults to A)."""
    A, B = _check_sides(G, A, B)
    X = list(A) if X is None else sorted(set(X))
    Y = sorted(set(Y))
    d, eps = _frac(d), _frac(eps)
    if not set(Y) <= set(B) or len(Y) < eps * len(B):
        raise InputError("Y must be a subset of B with |Y| >= eps|B|")
    if not set(X) <= set(A) or len(X) < eps * len(A):
        raise InputError("X must be a subset of A with |X| >= eps|A|")
    ym, xm = mask_of(Y), mask_of(X)
    bad_out = sum(1 for a in A if (G.out[a] & ym).bit_count() < (d - eps) * len(Y))
    bad_in = sum(1 for b in B if (G.inn[b] & xm).bit_count() < (d - eps) * len(X))
    return bad_out, bad_in


# -- partitions ----------------------------------------------------------


@dataclass
class RegularityPartition:
    exceptional: tuple
    clusters: tuple
    eps: float = 0.1
    d: float = 0.0

    @property
    def ell(self) -> int:
        return len(self.clusters[0]) if self.clusters else 0

    @property
    def k(self) -> int:
        return len(self.clusters)

    def validate(self, n: int) -> None:
        seen: set = set(self.exceptional)
        if len(seen) != len(self.exceptional):
            raise InputError("repeated vertex in the exceptional set")
        for c in self.clusters:
            if len(c) != self.ell:
                raise InputError("clusters must all have the same size")
            if seen & set(c) or len(set(c)) != len(c):
                raise InputError("clusters must be disjoint from each other and from V0")
            seen |= set(c)
        if seen != set(range(n)):
            raise InputError("partition does not cover the vertex set exactly")
        if len(self.exceptional) > _frac(self.eps) * n:
            raise InputError(f"|V0| = {len(self.exceptional)} exceeds eps*n")

    def to_json(self) -> dict:
        return {
            "exceptional": list(self.exceptional),
            "clusters": [list(c) for c in self.clusters],
            "eps": self.eps,
            "d": self.d,
        }

    @classmethod
    def from_json(cls, data: dict, eps=None, d=None) -> "RegularityPartition":
        return cls(
            tuple(data.get("exceptional", [])),
            tuple(tuple(sorted(c)) for c in data["clusters"]),
            eps if eps is not None else data.get("eps", 0.1),
            d if d is not None else data.get("d", 0.0),
        )

    @classmethod
    def load(cls, path, eps=None, d=None) -> "RegularityPartition":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh), eps, d)


@dataclass
class ReducedDigraph:
    R: Digraph
    eps: float
    d: float
    ell: int
    audit: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "k": self.R.n,
            "edges": [list(e) for e in self.R.edges()],
            "eps": self.eps,
            "d": self.d,
            "ell": self.ell,
            "audit": self.audit,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ReducedDigraph":
        from .digraph import from_edge_list

        R = from_edge_list(data["k"], [tuple(e) for e in data["edges"]])
        return cls(R, data.get("eps", 0.1), data.get("d", 0.0), data.get("ell", 0), data.get("audit", []))

    @classmethod
    def load(cls, path) -> "ReducedDigraph":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def _pair_mode(mode: str, ell: int) -> str:
    if mode == "auto":
        return "exact" if ell <= EXACT_MAX_SIDE else "sampled"
    return mode


def _check_pair_task(args):
    G, A, B, eps, mode, seed, trials = args
    return check_regular_pair(G, A, B, eps, mode, seed, trials)


def pair_verdicts(G: Digraph, P: RegularityPartition, eps, mode="auto", seed=0, trials=DEFAULT_TRIALS, jobs=1):
    """Verdicts for every ordered cluster pair, keyed by (i, j); seeded per pair."""
    P.validate(G.n)
    mode = _pair_mode(mode, P.ell)
    k = P.k
    keys = [(i, j) for i in range(k) for j in range(k) if i != j]
    tasks = [(G, P.clusters[i], P.clusters[j], eps, mode, seed ^ (i * k + j), trials) for i, j in keys]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_check_pair_task, tasks))
    else:
        results = [_check_pair_task(t) for t in tasks]
    return dict(zip(keys, results))


def reduced_digraph(
    G: Digraph,
    P: RegularityPartition,
    eps=None,
    d=None,
    mode: str = "auto",
    seed: int = 0,
    trials: int = DEFAULT_TRIALS,
    jobs: int = 1,
) -> ReducedDigraph:
    """Cluster digraph with i -> j iff (V_i, V_j) is eps-regular with density >= d."""
    eps = P.eps if eps is None else eps
    d = P.d if d is None else d
    verdicts = pair_verdicts(G, P, eps, mode, seed, trials, jobs)
    out = [0] * P.k
    audit = []
    for (i, j), v in verdicts.items():
        edge = v.regular and v.density >= _frac(d)
        if edge:
            out[i] |= 1 << j
        audit.append({
            "pair": [i, j],
            "density": float(v.density),
            "regular": v.regular,
            "mode": v.mode,
            "max_deviation": float(v.max_deviation),
            "edge": edge,
        })
    return ReducedDigraph(Digraph(P.k, out), eps, d, P.ell, audit)


def pure_digraph(
    G: Digraph,
    P: RegularityPartition,
    eps=None,
    d=None,
    mode: str = "auto",
    seed: int = 0,
    trials: int = DEFAULT_TRIALS,
) -> tuple[Digraph, dict]:
    """Drop edges inside clusters and cluster-pair edges of irregular or sparse (0 < density < d) pairs.

    Edges touching the exceptional set are kept.  The report gives each vertex's
    out/in degree loss next to the (d + eps) n allowance.
    """
    eps = P.eps if eps is None else eps
    d = P.d if d is None else d
    verdicts = pair_verdicts(G, P, eps, mode, seed, trials)
    out = list(G.out)
    cmasks = [mask_of(c) for c in P.clusters]
    for i, c in enumerate(P.clusters):
        for v in c:
            out[v] &= ~cmasks[i]
    dropped = []
    for (i, j), v in verdicts.items():
        if not v.regular or 0 < v.density < _frac(d):
            dropped.append([i, j])
            for u in P.clusters[i]:
                out[u] &= ~cmasks[j]
    Gp = Digraph(G.n, out)
    allowance = (_frac(d) + _frac(eps)) * G.n
    loss = []
    for x in range(G.n):
        lo = G.out[x].bit_count() - Gp.out[x].bit_count()
        li = G.inn[x].bit_count() - Gp.inn[x].bit_count()
        loss.append({"vertex": x, "out_loss": lo, "in_loss": li, "within_allowance": lo < allowance and li < allowance})
    report = {
        "dropped_pairs": dropped,
        "allowance": float(allowance),
        "violations": [r["vertex"] for r in loss if not r["within_allowance"]],
        "loss": loss,
    }
    return Gp, report


def irregular_count(G: Digraph, P: RegularityPartition, eps, seed=0, trials=200) -> int:
    return sum(1 for v in pair_verdicts(G, P, eps, "auto", seed, trials).values() if not v.regular)


def heuristic_partition(
    G: Digraph,
    k: int,
    eps,
    seed: int = 0,
    max_rounds: int = 3,
    trials: int = 200,
) -> RegularityPartition:
    """Seeded equal-size partition, then first-improvement vertex swaps that lower the
    number of irregular cluster pairs.  The n mod k leftover vertices form V0."""
    n = G.n
    if not 1 <= k <= n:
        raise InputError(f"need 1 <= k <= n, got k={k}, n={n}")
    ell, rem = divmod(n, k)
    if rem > _frac(eps) * n:
        raise InfeasiblePartitionError(f"|V0| = {rem} would exceed eps*n = {float(_frac(eps) * n)}")
    order = list(range(n))
    random.Random(seed).shuffle(order)
    V0 = tuple(sorted(order[:rem]))
    clusters = [sorted(order[rem + i * ell: rem + (i + 1) * ell]) for i in range(k)]

    def make(cl):
        return RegularityPartition(V0, tuple(tuple(sorted(c)) for c in cl), eps)

    score = irregular_count(G, make(clusters), eps, seed, trials) if k > 1 else 0
    for _ in range(max_rounds):
        if score == 0:
            break
        improved = False
        where = {v: i for i, c in enumerate(clusters) for v in c}
        for u in sorted(where):
            for v in sorted(where):
                if where[v] <= where[u]:
                    continue
                trial = [list(c) for c in clusters]
                trial[where[u]].remove(u)
                trial[where[u]].append(v)
                trial[where[v]].remove(v)
                trial[where[v]].append(u)
                s = irregular_count(G, make(trial), eps, seed, trials)
                if s < score:
                    clusters, score, improved = trial, s, True
                    break
            if improved:
                break
        if not improved:
            break
    return make(clusters)
