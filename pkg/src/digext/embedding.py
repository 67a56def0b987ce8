"""Greedy embedding of a pattern into a pure digraph along a cluster plan.

Pattern vertices are placed one at a time.  Every later vertex keeps a target
set inside its cluster, and placing a neighbour cuts that set down to the
out-neighbourhood, in-neighbourhood or both of the chosen host vertex,
depending on how the two pattern vertices are joined.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Sequence

from .digraph import Digraph, from_edge_list, mask_of
from .errors import InputError, PlanError
from .regularity import ReducedDigraph, RegularityPartition


@dataclass
class EmbeddingPlan:
    sigma: dict  # pattern vertex -> cluster index
    s: int

    @classmethod
    def from_json(cls, data: dict) -> "EmbeddingPlan":
        sig = data["sigma"]
        if isinstance(sig, list):
            sig = dict(enumerate(sig))
        return cls({int(k): int(v) for k, v in sig.items()}, int(data["s"]))

    @classmethod
    def load(cls, path) -> "EmbeddingPlan":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    def to_json(self) -> dict:
        return {"sigma": [self.sigma[x] for x in sorted(self.sigma)], "s": self.s}

    def check(self, H: Digraph, R: Digraph) -> None:
        """Raise PlanError unless H sits inside the s-blow-up of R along sigma."""
        if sorted(self.sigma) != list(range(H.n)):
            raise PlanError("plan must assign a cluster to every pattern vertex")
        load: dict = {}
        for x, c in self.sigma.items():
            if not 0 <= c < R.n:
                raise PlanError(f"pattern vertex {x} mapped to unknown cluster {c}")
            load[c] = load.get(c, 0) + 1
            if load[c] > self.s:
                raise PlanError(f"more than s={self.s} pattern vertices share cluster {c}")
        for x, y in H.edges():
            cx, cy = self.sigma[x], self.sigma[y]
            if cx == cy:
                raise PlanError(f"pattern edge {x}->{y} lies inside cluster {cx}")
            if not R.has_edge(cx, cy):
                raise PlanError(f"pattern edge {x}->{y} needs reduced edge {cx}->{cy}")


@dataclass
class EmbeddingResult:
    success: bool
    map: dict | None
    trace: list = field(default_factory=list)
    failed_step: int | None = None
    advisory: dict = field(default_factory=dict)
    attempts: int = 1

    def to_json(self) -> dict:
        return {
            "success": self.success,
            "map": None if self.map is None else {str(k): v for k, v in sorted(self.map.items())},
            "failed_step": self.failed_step,
            "attempts": self.attempts,
            "advisory": self.advisory,
            "trace": self.trace,
        }


def validate_embedding(G: Digraph, H: Digraph, mapping) -> bool:
    """True iff the map is total, injective and carries every ordered edge of H into G."""
    if isinstance(mapping, Sequence):
        mapping = dict(enumerate(mapping))
    if sorted(mapping) != list(range(H.n)):
        return False
    img = list(mapping.values())
    if len(set(img)) != len(img) or any(not 0 <= v < G.n for v in img):
        return False
    return all(G.has_edge(mapping[x], mapping[y]) for x, y in H.edges())


def advisory_guard(H: Digraph, d: float, eps: float) -> dict:
    """Evaluate (Delta+1)/(d-eps)^Delta * eps <= 1 for information only."""
    delta = max((H.nbr(v).bit_count() for v in range(H.n)), default=0)
    base = d - eps
    if base <= 0:
        return {"delta": delta, "value": None, "holds": False}
    value = (delta + 1) / base**delta * eps
    return {"delta": delta, "value": value, "holds": value <= 1}


def _refine(G: Digraph, H: Digraph, u: int, w: int, v: int, target: int) -> int:
    if H.out[u] >> w & 1:
        target &= G.out[v]
    if H.inn[u] >> w & 1:
        target &= G.inn[v]
    return target


def _embed_once(G, P, H, plan, d, eps, rng):
    clusters = [mask_of(c) for c in P.clusters]
    order = sorted(range(H.n), key=lambda x: (-H.nbr(x).bit_count(), x))
    Y = {x: clusters[plan.sigma[x]] for x in range(H.n)}
    used = 0
    mapping: dict = {}
    trace = []
    floor_ratio = d - eps
    for step, u in enumerate(order):
        later = [w for w in order[step + 1:] if H.nbr(u) >> w & 1]
        cand = Y[u] & ~used
        if not cand:
            trace.append({"step": step, "vertex": u, "candidates": 0})
            return None, trace, step
        best = None
        pool = [v for v in range(G.n) if cand >> v & 1]
        for v in pool:
            nused = used | (1 << v)
            sizes, ok = [], True
            for w in later:
                new = _refine(G, H, u, w, v, Y[w])
                if new.bit_count() < floor_ratio * Y[w].bit_count():
                    ok = False
                sizes.append((new & ~nused).bit_count())
            tie = rng.random() if rng is not None else 0
            key = (ok, min(sizes, default=G.n + 1), tie, -v)
            if best is None or key > best[0]:
                best = (key, v)
        (ok, _, _, _), v = best
        mapping[u] = v
        used |= 1 << v
        ratios = {}
        for w in later:
            before = Y[w].bit_count()
            Y[w] = _refine(G, H, u, w, v, Y[w])
            ratios[str(w)] = Y[w].bit_count() / before if before else 0.0
        trace.append({
            "step": step,
            "vertex": u,
            "cluster": plan.sigma[u],
            "chosen": v,
            "candidates": len(pool),
            "ratio_ok": ok,
            "ratios": ratios,
            "target_sizes": {str(w): Y[w].bit_count() for w in order[step + 1:]},
        })
    return mapping, trace, None


def embed(
    Gp: Digraph,
    P: RegularityPartition,
    R: ReducedDigraph,
    H: Digraph,
    plan: EmbeddingPlan,
    seed: int | None = None,
    restarts: int = 0,
) -> EmbeddingResult:
    """Embed H into Gp with every pattern vertex landing in its planned cluster.

    Candidates keeping every later target set above a (d - eps) fraction are
    preferred; among those the one leaving the largest smallest target set wins,
    ties going to the smallest vertex (or broken at random when seeded).
    Extra ``restarts`` retry with seeds ``seed + 1, seed + 2, ...``.
    """
    P.validate(Gp.n)
    if R.R.n != P.k:
        raise InputError(f"reduced digraph has {R.R.n} vertices but the partition has {P.k} clusters")
    plan.check(H, R.R)
    d, eps = float(R.d), float(R.eps)
    guard = advisory_guard(H, d, eps)
    res = None
    for attempt in range(restarts + 1):
        s = seed if attempt == 0 else (seed or 0) + attempt
        rng = None if s is None else random.Random(s)
        mapping, trace, failed = _embed_once(Gp, P, H, plan, d, eps, rng)
        res = EmbeddingResult(mapping is not None, mapping, trace, failed, guard, attempt + 1)
        if res.success:
            assert validate_embedding(Gp, H, mapping), "embedding failed its own validation"
            assert all(mapping[x] in P.clusters[plan.sigma[x]] for x in mapping)
            break
    return res


def greedy_plan(H: Digraph, R: Digraph, s: int) -> EmbeddingPlan | None:
    """Heuristic sigma: backtrack over clusters in index order, respecting the load bound s."""
    order = sorted(range(H.n), key=lambda x: (-H.nbr(x).bit_count(), x))
    sigma: dict = {}
    load = [0] * R.n

    def fits(x, c):
        for y, cy in sigma.items():
            if H.out[x] >> y & 1 and (c == cy or not R.has_edge(c, cy)):
                return False
            if H.inn[x] >> y & 1 and (c == cy or not R.has_edge(cy, c)):
                return False
        return True

    def rec(k):
        if k == len(order):
            return True
        x = order[k]
        for c in range(R.n):
            if load[c] < s and fits(x, c):
                sigma[x] = c
                load[c] += 1
                if rec(k + 1):
                    return True
                load[c] -= 1
                del sigma[x]
        return False

    return EmbeddingPlan(dict(sorted(sigma.items())), s) if rec(0) else None


def random_bipartite_host(ell: int, density: float, seed: int, eps: float = 0.1):
    """Two clusters of size ell with each edge V1 -> V2 present independently.

    The reduced digraph is the single edge 0 -> 1 with d set to the realised
    density; its regularity is assumed rather than checked.
    """
    rng = random.Random(seed)
    edges = [(a, ell + b) for a in range(ell) for b in range(ell) if rng.random() < density]
    G = from_edge_list(2 * ell, edges)
    P = RegularityPartition((), (tuple(range(ell)), tuple(range(ell, 2 * ell))), eps, density)
    R = ReducedDigraph(from_edge_list(2, [(0, 1)]), eps, len(edges) / ell**2, ell)
    return G, P, R
