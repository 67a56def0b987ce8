"""Bitset digraphs with double-edge-aware weighted counting.

A :class:`Digraph` stores one out-adjacency bitmask per vertex (bit ``v`` of
``out[u]`` is set iff ``u -> v``); in-masks are derived once at construction.
Values are immutable, so they can be shared freely between workers.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence, Tuple, Union

from .errors import InputError, UnsupportedSizeError

Number = Union[Fraction, float]
CanonicalKey = Tuple[int, int]

TOLERANCE = 1e-9
CANONICAL_MAX_N = 10
HEADER = "digraph/1"


def bits(mask: int) -> Iterable[int]:
    """Yield the indices of set bits in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class Digraph:
    """Loopless digraph on vertices ``0..n-1`` with at most one edge per ordered pair."""

    __slots__ = ("n", "out", "inn")

    def __init__(self, n: int, out: Sequence[int]):
        if n < 0 or len(out) != n:
            raise InputError(f"need {n} out-masks, got {len(out)}")
        full = (1 << n) - 1
        for u, m in enumerate(out):
            if m & ~full:
                raise InputError(f"vertex {u} has an out-neighbour outside [0,{n})")
            if m >> u & 1:
                raise InputError(f"loop at vertex {u}")
        inn = [0] * n
        for u, m in enumerate(out):
            for v in bits(m):
                inn[v] |= 1 << u
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "out", tuple(out))
        object.__setattr__(self, "inn", tuple(inn))

    def __setattr__(self, name, value):
        raise AttributeError("Digraph is immutable")

    def __eq__(self, other):
        return isinstance(other, Digraph) and self.n == other.n and self.out == other.out

    def __hash__(self):
        return hash((self.n, self.out))

    def __reduce__(self):
        return (Digraph, (self.n, self.out))

    def __repr__(self):
        return f"Digraph(n={self.n}, edges={self.edges()})"

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.out[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.out[u])]

    def edge_count(self) -> int:
        """Number of ordered edges."""
        return sum(m.bit_count() for m in self.out)

    def both(self, v: int) -> int:
        return self.out[v] & self.inn[v]

    def nbr(self, v: int) -> int:
        return self.out[v] | self.inn[v]

    def is_oriented(self) -> bool:
        return all(self.out[v] & self.inn[v] == 0 for v in range(self.n))

    def relabel(self, perm: Sequence[int]) -> "Digraph":
        """Return the digraph with vertex ``v`` renamed ``perm[v]``."""
        out = [0] * self.n
        for u in range(self.n):
            pu = perm[u]
            for v in bits(self.out[u]):
                out[pu] |= 1 << perm[v]
        return Digraph(self.n, out)

    def with_edges(self, add: Iterable[tuple[int, int]] = (), remove: Iterable[tuple[int, int]] = ()) -> "Digraph":
        out = list(self.out)
        for u, v in remove:
            out[u] &= ~(1 << v)
        for u, v in add:
            _check_pair(self.n, u, v)
            out[u] |= 1 << v
        return Digraph(self.n, out)

    def to_text(self) -> str:
        lines = [f"{HEADER} n={self.n}"]
        lines += [f"{u} {v}" for u, v in self.edges()]
        return "\n".join(lines) + "\n"


def _check_pair(n: int, u: int, v: int) -> None:
    if not (0 <= u < n and 0 <= v < n):
        raise InputError(f"edge ({u},{v}) has an endpoint outside [0,{n})")
    if u == v:
        raise InputError(f"edge ({u},{v}) is a loop")


def _check_vertex(G: Digraph, v: int) -> None:
    if not 0 <= v < G.n:
        raise InputError(f"vertex {v} outside [0,{G.n})")


def from_edge_list(n: int, edges: Iterable[tuple[int, int]]) -> Digraph:
    if n < 0:
        raise InputError(f"negative vertex count {n}")
    out = [0] * n
    for u, v in edges:
        _check_pair(n, u, v)
        out[u] |= 1 << v
    return Digraph(n, out)


def empty(n: int) -> Digraph:
    return Digraph(n, [0] * n)


_HEADER_RE = re.compile(r"^digraph/1\s+n=(\d+)$")


def parse_text(text: str) -> Digraph:
    """Parse the ``digraph/1`` text format (comments after ``#`` are ignored)."""
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            m = _HEADER_RE.match(line)
            if not m:
                raise InputError(f"line {lineno}: expected '{HEADER} n=<int>' header")
            n = int(m.group(1))
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InputError(f"line {lineno}: expected '<u> <v>'")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise InputError(f"line {lineno}: non-integer endpoint") from None
    if n is None:
        raise InputError("missing digraph header")
    return from_edge_list(n, edges)


def read_digraph(path) -> Digraph:
    with open(path, encoding="utf-8") as fh:
        return parse_text(fh.read())


def write_digraph(G: Digraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(G.to_text())


# -- weights -------------------------------------------------------------


@dataclass(frozen=True)
class WeightParam:
    """The double-edge weight ``a`` in (3/2, 2].

    Rational values are held as :class:`Fraction` and compared exactly;
    ``log3`` (log base 2 of 3) is a float compared with absolute tolerance 1e-9.
    """

    value: Number
    label: str = ""

    def __post_init__(self):
        v = self.value
        if isinstance(v, int):
            object.__setattr__(self, "value", Fraction(v))
            v = self.value
        if not Fraction(3, 2) < v <= 2:
            raise InputError(f"weight a={v} outside (3/2, 2]")
        if not self.label:
            object.__setattr__(self, "label", str(v))

    @property
    def exact(self) -> bool:
        return isinstance(self.value, Fraction)

    @property
    def kind(self) -> str:
        return "exact-rational" if self.exact else "irrational-with-tolerance"

    @classmethod
    def parse(cls, text: str) -> "WeightParam":
        t = str(text).strip()
        if t in ("log3", "log2(3)", "log_2 3"):
            return LOG2_3
        try:
            return cls(Fraction(t), t)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"cannot parse weight {text!r}") from None

    def weigh(self, f1: int, f2: int) -> Number:
        return self.value * f2 + f1

    def compare(self, x: Number, y: Number) -> int:
        """Three-way comparison honouring the tolerance for irrational weights."""
        if not self.exact:
            d = float(x) - float(y)
            if abs(d) <= TOLERANCE:
                return 0
            return 1 if d > 0 else -1
        return (x > y) - (x < y)

    def eq(self, x: Number, y: Number) -> bool:
        return self.compare(x, y) == 0

    def as_json(self) -> dict:
        return {"label": self.label, "value": _num_json(self.value), "kind": self.kind}


LOG2_3 = WeightParam(math.log2(3), "log3")


def _num_json(x: Number):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    return x


# -- counting ------------------------------------------------------------


def pair_profile(G: Digraph) -> tuple[int, int]:
    """Return ``(f1, f2)``: unordered pairs joined in exactly one / both directions."""
    f2x2 = sum((G.out[v] & G.inn[v]).bit_count() for v in range(G.n))
    f2 = f2x2 // 2
    return G.edge_count() - 2 * f2, f2


def weighted_size(G: Digraph, a: WeightParam) -> Number:
    f1, f2 = pair_profile(G)
    return a.weigh(f1, f2)


def vertex_weight(G: Digraph, v: int, a: WeightParam) -> Number:
    _check_vertex(G, v)
    both = G.both(v).bit_count()
    single = G.nbr(v).bit_count() - both
    return a.weigh(single, both)


def neighborhoods(G: Digraph, v: int) -> tuple[frozenset, frozenset, frozenset]:
    _check_vertex(G, v)
    return (frozenset(bits(G.out[v])), frozenset(bits(G.inn[v])), frozenset(bits(G.both(v))))


def max_degrees(G: Digraph) -> tuple[int, int, int, int]:
    """``(Delta, Delta+, Delta-, Delta0)`` over all vertices (zeros when empty)."""
    if G.n == 0:
        return (0, 0, 0, 0)
    d = max(G.nbr(v).bit_count() for v in range(G.n))
    dp = max(m.bit_count() for m in G.out)
    dm = max(m.bit_count() for m in G.inn)
    return (d, dp, dm, max(dp, dm))


def induced(G: Digraph, A: Iterable[int]) -> Digraph:
    """Sub-digraph induced by ``A``, relabelled in sorted order of ``A``."""
    verts = sorted(set(A))
    for v in verts:
        _check_vertex(G, v)
    pos = {v: i for i, v in enumerate(verts)}
    amask = mask_of(verts)
    out = [0] * len(verts)
    for u in verts:
        for v in bits(G.out[u] & amask):
            out[pos[u]] |= 1 << pos[v]
    return Digraph(len(verts), out)


def edges_between(G: Digraph, A: Iterable[int], B: Iterable[int]) -> int:
    bmask = mask_of(B)
    return sum((G.out[u] & bmask).bit_count() for u in A)


def density(G: Digraph, A: Iterable[int], B: Iterable[int]) -> float:
    """Fraction of ordered pairs ``(a, b)`` in ``A x B`` with ``a -> b``."""
    A, B = set(A), set(B)
    if not A or not B:
        raise InputError("density needs two nonempty vertex sets")
    if A & B:
        raise InputError("density needs disjoint vertex sets")
    for v in A | B:
        _check_vertex(G, v)
    return edges_between(G, A, B) / (len(A) * len(B))


def spanning_subdigraph_count(G: Digraph, cls: str = "digraph") -> int:
    """Labelled spanning sub-digraphs (``4^f2 2^f1``) or oriented subgraphs (``3^f2 2^f1``)."""
    f1, f2 = pair_profile(G)
    if cls == "digraph":
        return 4**f2 * 2**f1
    if cls == "oriented":
        return 3**f2 * 2**f1
    raise InputError(f"unknown class {cls!r}; expected 'digraph' or 'oriented'")


def symmetric_difference(G: Digraph, H: Digraph) -> int:
    """Number of ordered edges present in exactly one of two digraphs on the same vertices."""
    if G.n != H.n:
        raise InputError("symmetric difference needs equal vertex counts")
    return sum((x ^ y).bit_count() for x, y in zip(G.out, H.out))


def underlying_edges(G: Digraph) -> list[tuple[int, int]]:
    return [(u, v) for u, v in combinations(range(G.n), 2) if G.nbr(u) >> v & 1]


# -- canonical form ------------------------------------------------------


def _chunk(G: Digraph, prefix: Sequence[int], v: int) -> int:
    # bits (prefix[i] -> v), (v -> prefix[i]) for i in order, most significant first
    c = 0
    ov, iv = G.out[v], G.inn[v]
    for u in prefix:
        c = (c << 2) | ((iv >> u & 1) << 1) | (ov >> u & 1)
    return c


def canonical_key(G: Digraph) -> CanonicalKey:
    """Isomorphism-class key: lexicographic minimum over vertex orders of the edge bit string.

    Position ``j`` contributes the bits ``(i -> j), (j -> i)`` for ``i < j``, so the
    string is built one position at a time and only orders that tie on the minimal
    prefix are kept alive.
    """
    n = G.n
    if n > CANONICAL_MAX_N:
        raise UnsupportedSizeError(f"canonical_key supports n <= {CANONICAL_MAX_N}, got {n}")
    states = [((), (1 << n) - 1)]
    code = 0
    for p in range(n):
        best = None
        nxt = {}
        for prefix, rest in states:
            for v in bits(rest):
                c = _chunk(G, prefix, v)
                if best is None or c < best:
                    best, nxt = c, {}
                if c == best:
                    nprefix = prefix + (v,)
                    nrest = rest & ~(1 << v)
                    # two partial orders are interchangeable when every unplaced vertex
                    # sees the placed positions identically
                    sig = (nrest, tuple(_chunk(G, nprefix, w) for w in bits(nrest)))
                    nxt.setdefault(sig, (nprefix, nrest))
        code = (code << (2 * p)) | best
        states = list(nxt.values())
    return (n, code)


def is_isomorphic(G: Digraph, H: Digraph) -> bool:
    return G.n == H.n and G.edge_count() == H.edge_count() and canonical_key(G) == canonical_key(H)
