"""Generators for the named digraph families: doubled Turán digraphs,
transitive tournaments, blow-ups and directed cycles."""
from __future__ import annotations

from math import comb
from typing import Sequence

from .digraph import Digraph, bits
from .errors import InputError


def turan_parts(n: int, r: int) -> list[int]:
    """Balanced part sizes of an r-partition of n vertices, largest first."""
    if r < 1:
        raise InputError(f"need r >= 1, got {r}")
    if n < 0:
        raise InputError(f"need n >= 0, got {n}")
    q, rem = divmod(n, r)
    return [q + 1] * rem + [q] * (r - rem)


def turan_number(n: int, r: int) -> int:
    """Edge count t_r(n) of the balanced complete r-partite graph."""
    return comb(n, 2) - sum(comb(s, 2) for s in turan_parts(n, r))


def dturan_parts(sizes: Sequence[int]) -> Digraph:
    """Complete multipartite digraph with every cross pair doubled.

    Parts occupy consecutive vertex ranges in the given order.
    """
    if len(sizes) < 1 or any(s < 0 for s in sizes):
        raise InputError(f"invalid part sizes {list(sizes)}")
    n = sum(sizes)
    full = (1 << n) - 1
    out = []
    start = 0
    for s in sizes:
        part = ((1 << s) - 1) << start
        out += [full & ~part] * s
        start += s
    return Digraph(n, out)


def dturan(n: int, r: int) -> Digraph:
    """DTu_r(n): balanced Turán graph with all edges doubled; larger parts get lower indices."""
    return dturan_parts(turan_parts(n, r))


def transitive_tournament(r: int) -> Digraph:
    if r < 1:
        raise InputError(f"need r >= 1, got {r}")
    full = (1 << r) - 1
    return Digraph(r, [full & ~((1 << (i + 1)) - 1) for i in range(r)])


def blow_up(H: Digraph, t: int) -> Digraph:
    """Replace each vertex of H by an independent t-set; vertex ``i`` of H owns ``i*t .. i*t+t-1``."""
    if t < 1:
        raise InputError(f"blow-up multiplicity must be >= 1, got {t}")
    block = (1 << t) - 1
    out = []
    for u in range(H.n):
        m = 0
        for v in bits(H.out[u]):
            m |= block << (v * t)
        out += [m] * t
    return Digraph(H.n * t, out)


def directed_cycle(n: int) -> Digraph:
    if n < 3:
        raise InputError(f"directed cycle needs n >= 3, got {n}")
    return Digraph(n, [1 << ((i + 1) % n) for i in range(n)])


def complete_digraph(n: int) -> Digraph:
    """All ordered pairs present (DK_n)."""
    full = (1 << n) - 1
    return Digraph(n, [full & ~(1 << v) for v in range(n)])
