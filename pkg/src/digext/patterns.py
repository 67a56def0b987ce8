"""Sub-digraph containment and labelled copy counting.

Copies are injective maps ``V(H) -> V(G)`` sending every ordered edge of H to an
ordered edge of G; a double edge of H needs both directions, a single edge only
its own direction.  Candidate sets are bitsets intersected along the search.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Sequence

from .digraph import Digraph, bits
from .errors import InputError

Plan = tuple  # of (pattern_vertex, outs, ins) per search position


def _search_order(H: Digraph, pinned: Sequence[int] = ()) -> list[int]:
    order = list(pinned)
    placed = set(order)
    deg = [H.nbr(v).bit_count() for v in range(H.n)]
    while len(order) < H.n:
        best = max(
            (v for v in range(H.n) if v not in placed),
            key=lambda v: (sum(1 for u in order if H.nbr(v) >> u & 1), deg[v], -v),
        )
        order.append(best)
        placed.add(best)
    return order


@lru_cache(maxsize=512)
def _plan(H: Digraph, pinned: tuple = ()) -> Plan:
    """Per search position: the pattern vertex plus the earlier positions whose
    image must point to it (``outs``) and those it must point to (``ins``)."""
    order = _search_order(H, pinned)
    pos = {v: k for k, v in enumerate(order)}
    steps = []
    for k, x in enumerate(order):
        outs = tuple(pos[y] for y in bits(H.inn[x]) if pos[y] < k)
        ins = tuple(pos[y] for y in bits(H.out[x]) if pos[y] < k)
        steps.append((x, outs, ins))
    return tuple(steps)


def _candidates(out, inn, full, step, images, used) -> int:
    _, outs, ins = step
    c = full & ~used
    for j in outs:
        c &= out[images[j]]
    for j in ins:
        c &= inn[images[j]]
    return c


def _iter_maps(out, inn, n, plan: Plan, images: list, used: int) -> Iterator[list]:
    k = len(images)
    if k == len(plan):
        yield images
        return
    c = _candidates(out, inn, (1 << n) - 1, plan[k], images, used)
    for v in bits(c):
        images.append(v)
        yield from _iter_maps(out, inn, n, plan, images, used | (1 << v))
        images.pop()


def _count_maps(out, inn, n, plan: Plan, images: list, used: int) -> int:
    k = len(images)
    c = _candidates(out, inn, (1 << n) - 1, plan[k], images, used)
    if k == len(plan) - 1:
        return c.bit_count()
    total = 0
    for v in bits(c):
        images.append(v)
        total += _count_maps(out, inn, n, plan, images, used | (1 << v))
        images.pop()
    return total


def _as_map(plan: Plan, images: Sequence[int]) -> dict:
    return {step[0]: v for step, v in zip(plan, images)}


def is_transitive_tournament(H: Digraph) -> bool:
    """True iff H is a transitive tournament (in any labelling)."""
    if any(H.both(v) for v in range(H.n)):
        return False
    if H.edge_count() != H.n * (H.n - 1) // 2:
        return False
    return sorted(m.bit_count() for m in H.out) == list(range(H.n))


def find_copy(G: Digraph, H: Digraph) -> dict | None:
    """A witness map ``pattern vertex -> host vertex``, or None."""
    if H.n > G.n:
        return None
    if H.n == 0:
        return {}
    plan = _plan(H)
    for images in _iter_maps(G.out, G.inn, G.n, plan, [], 0):
        return _as_map(plan, images)
    return None


def contains(G: Digraph, H: Digraph, return_witness: bool = False):
    """Whether G has a sub-digraph isomorphic to H (optionally with a witness map)."""
    w = find_copy(G, H)
    if return_witness:
        return w is not None, w
    return w is not None


def iter_copies(G: Digraph, H: Digraph) -> Iterator[dict]:
    """Every labelled copy of H in G as a map."""
    if H.n > G.n:
        return
    if H.n == 0:
        yield {}
        return
    plan = _plan(H)
    for images in _iter_maps(G.out, G.inn, G.n, plan, [], 0):
        yield _as_map(plan, images)


def _tt_exists(out, cand: int, need: int) -> bool:
    if need == 0:
        return True
    for v in bits(cand):
        c = cand & out[v]
        if c.bit_count() >= need - 1 and _tt_exists(out, c, need - 1):
            return True
    return False


def _tt_count(out, cand: int, need: int) -> int:
    if need == 1:
        return cand.bit_count()
    total = 0
    for v in bits(cand):
        c = cand & out[v]
        if c.bit_count() >= need - 1:
            total += _tt_count(out, c, need - 1)
    return total


def contains_transitive(G: Digraph, r: int) -> bool:
    """Whether some ``v1..vr`` has ``vi -> vj`` for all ``i < j``."""
    if r < 1:
        raise InputError(f"need r >= 1, got {r}")
    return _tt_exists(G.out, (1 << G.n) - 1, r)


def count_copies(G: Digraph, H: Digraph) -> int:
    """Number of labelled copies (injective edge-preserving maps) of H in G."""
    if H.n > G.n:
        return 0
    if H.n == 0:
        return 1
    if is_transitive_tournament(H):
        return _tt_count(G.out, (1 << G.n) - 1, H.n)
    return _count_maps(G.out, G.inn, G.n, _plan(H), [], 0)


# -- transitive triangles through a pair ---------------------------------


def t3_third_mask(out, inn, u: int, v: int) -> int:
    """Bitmask of vertices w such that {u, v, w} spans a transitive triangle."""
    m = 0
    if out[u] >> v & 1:  # u -> v: w before u, between, or after v
        m |= (inn[u] & inn[v]) | (out[u] & inn[v]) | (out[u] & out[v])
    if out[v] >> u & 1:
        m |= (inn[v] & inn[u]) | (out[v] & inn[u]) | (out[v] & out[u])
    return m & ~((1 << u) | (1 << v))


def t3_through_pair(G: Digraph, u: int, v: int) -> int:
    """Number of third vertices w that form a transitive triangle with the adjacent pair u, v."""
    for x in (u, v):
        if not 0 <= x < G.n:
            raise InputError(f"vertex {x} outside [0,{G.n})")
    if u == v:
        raise InputError("t3_through_pair needs two distinct vertices")
    if not G.nbr(u) >> v & 1:
        raise InputError(f"vertices {u} and {v} are not adjacent")
    return t3_third_mask(G.out, G.inn, u, v).bit_count()


def adjacent_pairs(G: Digraph) -> list[tuple[int, int]]:
    return [(u, v) for u in range(G.n) for v in bits(G.nbr(u) >> (u + 1) << (u + 1))]


def pair_counts(G: Digraph) -> dict[tuple[int, int], int]:
    return {(u, v): t3_third_mask(G.out, G.inn, u, v).bit_count() for u, v in adjacent_pairs(G)}


def classify_pairs(G: Digraph, theta: float) -> tuple[set, set]:
    """Split adjacent pairs into good (at least ``theta * n`` transitive triangles) and bad."""
    if not theta > 0:
        raise InputError(f"theta must be positive, got {theta}")
    good, bad = set(), set()
    for pair, c in pair_counts(G).items():
        (good if c >= theta * G.n else bad).add(pair)
    return good, bad


# -- incremental checks used by the enumerator ---------------------------


@lru_cache(maxsize=256)
def _pair_plans(H: Digraph) -> tuple:
    """For each adjacent pattern pair (x, y) and each orientation, a plan pinned on it,
    together with the edges needed between the first two images."""
    plans = []
    for x, y in adjacent_pairs(H):
        for a, b in ((x, y), (y, x)):
            need_ab = bool(H.out[a] >> b & 1)
            need_ba = bool(H.out[b] >> a & 1)
            plans.append((need_ab, need_ba, _plan(H, (a, b))))
    return tuple(plans)


def copy_through_pair(out, inn, n: int, H: Digraph, i: int, j: int) -> bool:
    """Whether the digraph given by raw masks has a copy of H with some edge of H
    landing on the pair {i, j}.

    Used for pruning: every copy is caught when the last of its edge pairs is set.
    """
    if _is_t3(H):
        return t3_third_mask(out, inn, i, j) != 0
    for need_ab, need_ba, plan in _pair_plans(H):
        if need_ab and not out[i] >> j & 1:
            continue
        if need_ba and not out[j] >> i & 1:
            continue
        if H.n == 2:
            return True
        for _ in _iter_maps(out, inn, n, plan, [i, j], (1 << i) | (1 << j)):
            return True
    return False


@lru_cache(maxsize=64)
def _is_t3(H: Digraph) -> bool:
    return H.n == 3 and is_transitive_tournament(H)
