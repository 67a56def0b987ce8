"""Exhaustive enumeration of labelled digraphs and oriented graphs.

Unordered pairs are visited in colex order ``(0,1), (0,2), (1,2), (0,3), ...``;
each pair takes a state from ``{none, i->j, j->i}`` plus ``both`` for digraphs.
With a forbidden pattern, a branch is cut as soon as the newest pair closes a copy.

Visitors are called as ``visitor(out, f1, f2)`` where ``out`` is the live list of
out-masks (copy it to keep it).  Sharded runs need visitors with a ``merge``
method so shard results can be reduced in shard-index order.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable

from .digraph import Digraph
from .errors import InputError, ShardRequiredError, UnsupportedSizeError
from .patterns import contains, copy_through_pair

log = logging.getLogger(__name__)

ALPHABETS = {"oriented": (0, 1, 2), "digraph": (0, 1, 2, 3)}
UNSHARDED_CAP = 2**24
TOTAL_CAP = 2**32
DEFAULT_SHARD_PREFIX = 8


def normalize_class(cls: str) -> str:
    c = {"o": "oriented", "d": "digraph"}.get(cls, cls)
    if c not in ALPHABETS:
        raise InputError(f"unknown class {cls!r}; expected oriented|digraph (o|d)")
    return c


def pair_order(n: int) -> list[tuple[int, int]]:
    return [(i, j) for j in range(1, n) for i in range(j)]


def class_size(n: int, cls: str) -> int:
    return len(ALPHABETS[normalize_class(cls)]) ** (n * (n - 1) // 2)


@dataclass
class EnumStats:
    visited: int = 0
    pruned: int = 0

    def merge(self, other: "EnumStats") -> "EnumStats":
        self.visited += other.visited
        self.pruned += other.pruned
        return self


def _shard_prefix(n: int, alphabet, shards: int | None, shard: int | None) -> list[int]:
    npairs = n * (n - 1) // 2
    total = len(alphabet) ** npairs
    if total > TOTAL_CAP:
        raise UnsupportedSizeError(f"class has {total} members, above the cap {TOTAL_CAP}")
    if shards is None:
        if total > UNSHARDED_CAP:
            req = len(alphabet) ** min(DEFAULT_SHARD_PREFIX, npairs)
            raise ShardRequiredError(
                f"class has {total} members; rerun with --shards {req} and --shard 0..{req - 1}", req
            )
        return []
    p = 0
    while len(alphabet) ** p < shards:
        p += 1
    if len(alphabet) ** p != shards or p > npairs:
        raise InputError(f"shard count must be a power of {len(alphabet)} up to {len(alphabet)}^{npairs}")
    if shard is None or not 0 <= shard < shards:
        raise InputError(f"shard index must be in [0,{shards})")
    if total // shards > UNSHARDED_CAP:
        req = len(alphabet) ** min(DEFAULT_SHARD_PREFIX, npairs)
        raise ShardRequiredError(f"each of {shards} shards is still too large; use {req} shards", req)
    digits = []
    x = shard
    for _ in range(p):
        x, d = divmod(x, len(alphabet))
        digits.append(alphabet[d])
    return digits[::-1]


def enumerate_class(
    n: int,
    cls: str,
    forbid: Digraph | None = None,
    visitor: Callable | None = None,
    shards: int | None = None,
    shard: int | None = None,
) -> EnumStats:
    """Visit every labelled member of the class on n vertices that avoids ``forbid``.

    With ``shards``, only the members whose first pair states spell ``shard`` in
    base ``|alphabet|`` are visited.
    """
    cls = normalize_class(cls)
    alphabet = ALPHABETS[cls]
    prefix = _shard_prefix(n, alphabet, shards, shard)
    stats = EnumStats()
    if forbid is not None and forbid.edge_count() == 0:
        if forbid.n <= n:
            return stats
        forbid = None
    if forbid is not None and forbid.n > n:
        forbid = None
    pairs = pair_order(n)
    npairs = len(pairs)
    out = [0] * n
    inn = [0] * n

    def rec(k: int, f1: int, f2: int, forced) -> None:
        if k == npairs:
            stats.visited += 1
            if visitor is not None:
                visitor(out, f1, f2)
            return
        i, j = pairs[k]
        bi, bj = 1 << i, 1 << j
        for s in forced[k] if k < len(forced) else alphabet:
            if s & 1:
                out[i] |= bj
                inn[j] |= bi
            if s & 2:
                out[j] |= bi
                inn[i] |= bj
            if s and forbid is not None and copy_through_pair(out, inn, n, forbid, i, j):
                stats.pruned += 1
            else:
                rec(k + 1, f1 + (s == 1 or s == 2), f2 + (s == 3), forced)
            if s & 1:
                out[i] &= ~bj
                inn[j] &= ~bi
            if s & 2:
                out[j] &= ~bi
                inn[i] &= ~bj

    rec(0, 0, 0, [(d,) for d in prefix])
    return stats


def decode(code: int, n: int, cls: str) -> list[int]:
    """Out-masks of the class member with the given mixed-radix code (first pair most significant)."""
    alphabet = ALPHABETS[normalize_class(cls)]
    base = len(alphabet)
    pairs = pair_order(n)
    out = [0] * n
    for i, j in reversed(pairs):
        code, s = divmod(code, base)
        s = alphabet[s]
        if s & 1:
            out[i] |= 1 << j
        if s & 2:
            out[j] |= 1 << i
    return out


def enumerate_flat(n: int, cls: str, forbid: Digraph | None = None, visitor: Callable | None = None) -> EnumStats:
    """Decode every code of the class and test the pattern on the finished digraph.

    Independent of the pruning path; intended as a cross-check at small n.
    """
    cls = normalize_class(cls)
    total = class_size(n, cls)
    if total > UNSHARDED_CAP:
        raise UnsupportedSizeError(f"flat enumeration capped at {UNSHARDED_CAP} members")
    stats = EnumStats()
    for code in range(total):
        out = decode(code, n, cls)
        G = Digraph(n, out)
        if forbid is not None and contains(G, forbid):
            stats.pruned += 1
            continue
        stats.visited += 1
        if visitor is not None:
            both = sum((G.out[v] & G.inn[v]).bit_count() for v in range(n)) // 2
            visitor(out, G.edge_count() - 2 * both, both)
    return stats


def _run_shard(args):
    n, cls, forbid, factory, shards, shard = args
    visitor = factory()
    stats = enumerate_class(n, cls, forbid, visitor, shards, shard)
    return stats, visitor


def run_sharded(
    n: int,
    cls: str,
    forbid: Digraph | None,
    factory: Callable,
    shards: int,
    only: int | None = None,
    jobs: int = 1,
):
    """Run all shards (or only one) and merge visitors in shard-index order.

    ``factory`` must be a picklable zero-argument callable producing a fresh visitor.
    """
    indices = [only] if only is not None else list(range(shards))
    tasks = [(n, cls, forbid, factory, shards, i) for i in indices]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_shard, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        results = [_run_shard(t) for t in tasks]
    stats, visitor = results[0]
    for s, v in results[1:]:
        stats.merge(s)
        visitor.merge(v)
    log.debug("merged %d shards: %s", len(results), stats)
    return stats, visitor
