"""Quick release gate: every acceptance check at its smallest size, printed as a table."""
from __future__ import annotations

import time
from fractions import Fraction
from math import comb

from . import constructions
from .digraph import LOG2_3, WeightParam, canonical_key, pair_profile, spanning_subdigraph_count
from .embedding import EmbeddingPlan, embed
from .extremal import census, chromatic_number, density_ratio, extremal_records, is_homogeneous, m_exponent
from .regularity import ReducedDigraph, RegularityPartition, check_regular_pair
from .stability import dtu2_edit_distance, removal

GROUPS = ("lemma1", "counting", "census", "corollary", "regularity", "embedding", "stability", "mexp")


def brute_subdigraph_counts(G) -> tuple[int, int]:
    """Count spanning sub-digraphs and oriented ones by walking every subset of ordered edges."""
    edges = G.edges()
    index = {e: k for k, e in enumerate(edges)}
    doubles = [(1 << index[(u, v)]) | (1 << index[(v, u)]) for u, v in edges if u < v and (v, u) in index]
    total = oriented = 0
    for sub in range(1 << len(edges)):
        total += 1
        if all(sub & dm != dm for dm in doubles):
            oriented += 1
    return total, oriented


def _lemma1():
    rows = []
    weights = [WeightParam(2), LOG2_3, WeightParam(Fraction(8, 5))]
    tt = constructions.transitive_tournament
    for n in range(2, 5):
        for r in range(1, 4):
            records = extremal_records(n, tt(r + 1), weights)
            target = canonical_key(constructions.dturan(n, r))
            for rec in records:
                expected = rec.a.value * constructions.turan_number(n, r)
                ok = rec.a.eq(rec.value, expected) and [k for k, _ in rec.witnesses] == [target]
                rows.append((f"ex_{rec.a.label}({n},T{r + 1})", f"{float(expected):.6g} x1", f"{float(rec.value):.6g} x{len(rec.witnesses)}", ok))
    return rows


def _counting():
    import random

    from .digraph import from_edge_list

    rng = random.Random(7)
    rows = []
    for k in range(20):
        n = rng.randint(2, 5)
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
        G = from_edge_list(n, rng.sample(pairs, min(len(pairs), rng.randint(0, 12))))
        f1, f2 = pair_profile(G)
        total, oriented = brute_subdigraph_counts(G)
        ok = total == spanning_subdigraph_count(G) == 4**f2 * 2**f1
        ok = ok and oriented == spanning_subdigraph_count(G, "oriented") == 3**f2 * 2**f1
        rows.append((f"subdigraphs #{k} (f1={f1}, f2={f2})", f"{4**f2 * 2**f1}/{3**f2 * 2**f1}", f"{total}/{oriented}", ok))
    return rows


def _census():
    t3 = constructions.transitive_tournament(3)
    rows = []
    for cls, want in (("oriented", 21), ("digraph", 39)):
        got = [census(3, cls, t3, 0.25, strategy=s).total for s in ("pruned", "flat")]
        rows.append((f"census n=3 {cls}", f"{want} {want}", f"{got[0]} {got[1]}", got == [want, want]))
    return rows


def _corollary():
    rows = []
    two = WeightParam(2)
    t3 = constructions.transitive_tournament(3)
    for n in range(2, 5):
        got = density_ratio(n, t3, two)
        want = Fraction(constructions.turan_number(n, 2), comb(n, 2))
        rows.append((f"density_ratio({n})", str(want), str(got), got == want and got >= Fraction(1, 2)))
    for t in (1, 2):
        H = constructions.blow_up(t3, t)
        chi, (hom, _) = chromatic_number(H), is_homogeneous(H)
        rows.append((f"chi/homogeneous T3^{t}", "3 True", f"{chi} {hom}", chi == 3 and hom))
    return rows


def _regularity():
    from .digraph import from_edge_list

    G = from_edge_list(20, [(a, 10 + b) for a in range(5) for b in range(5)])
    v = check_regular_pair(G, range(10), range(10, 20), 0.2)
    ok = not v.regular and v.witness[0] == tuple(range(5)) and v.witness[2] == Fraction(3, 4)
    K = from_edge_list(20, [(a, 10 + b) for a in range(10) for b in range(10)])
    c = check_regular_pair(K, range(10), range(10, 20), 0.1)
    return [
        ("planted pair irregular", "dev 3/4", f"dev {v.max_deviation}", ok),
        ("complete pair regular", "True", str(c.regular), c.regular),
    ]


def _embedding():
    t3 = constructions.transitive_tournament(3)
    G = constructions.blow_up(t3, 10)
    P = RegularityPartition((), tuple(tuple(range(10 * i, 10 * i + 10)) for i in range(3)), 0.1, 0.5)
    R = ReducedDigraph(t3, 0.1, 0.5, 10)
    H = constructions.blow_up(t3, 2)
    res = embed(G, P, R, H, EmbeddingPlan({x: x // 2 for x in range(6)}, 2))
    return [("embed T3^2 into T3^10", "success", "success" if res.success else f"fail@{res.failed_step}", res.success)]


def _stability():
    c3 = constructions.directed_cycle(3)
    d, _ = dtu2_edit_distance(c3)
    _, k = removal(constructions.complete_digraph(3), constructions.transitive_tournament(3), "exact")
    zero = all(dtu2_edit_distance(constructions.dturan(n, 2))[0] == 0 for n in range(1, 7))
    return [
        ("dtu2 distance C3", "3", str(d), d == 3),
        ("dtu2 distance DTu2(n<=6)", "0", "0" if zero else "nonzero", zero),
        ("exact removal DK3/T3", "2", str(k), k == 2),
    ]


def _mexp():
    t3 = constructions.transitive_tournament(3)
    a, b = m_exponent(t3), m_exponent(constructions.blow_up(t3, 2))
    return [
        ("m(T3)", "2", str(a), a == 2),
        ("m(T3^2)", "11/4", str(b), b == Fraction(11, 4)),
    ]


CHECKS = {
    "lemma1": _lemma1,
    "counting": _counting,
    "census": _census,
    "corollary": _corollary,
    "regularity": _regularity,
    "embedding": _embedding,
    "stability": _stability,
    "mexp": _mexp,
}


def run(only=None, out=print) -> bool:
    groups = only or GROUPS
    all_ok = True
    out(f"{'group':<11} {'check':<34} {'expected':<16} {'actual':<16} result")
    for g in groups:
        t0 = time.perf_counter()
        try:
            rows = CHECKS[g]()
        except Exception as exc:  # a crash is a failed row, not a traceback
            rows = [(g, "no error", f"{type(exc).__name__}: {exc}", False)]
        for name, want, got, ok in rows:
            all_ok &= bool(ok)
            out(f"{g:<11} {name:<34} {want:<16} {got:<16} {'PASS' if ok else 'FAIL'}")
        out(f"{g:<11} ({time.perf_counter() - t0:.2f}s)")
    out("selftest: " + ("all checks passed" if all_ok else "FAILED"))
    return all_ok
