from __future__ import annotations

import math
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from conftest import digraphs
from oracles import bipartite_deletion, chromatic, has_copy, members, m_exponent as brute_m
from digext.constructions import blow_up, directed_cycle, dturan, transitive_tournament, turan_number
from digext.digraph import LOG2_3, WeightParam, canonical_key, from_edge_list, weighted_size
from digext.errors import InputError, UnsupportedSizeError
from digext.extremal import (
    FrontierCollector,
    census,
    chromatic_number,
    density_ratio,
    extremal_number,
    extremal_records,
    is_homogeneous,
    m_exponent,
    random_digraph,
)

T3 = transitive_tournament(3)
TWO = WeightParam(2)
WEIGHTS = [TWO, LOG2_3, WeightParam(Fraction(8, 5))]


def test_extremal_examples():
    rec = extremal_number(3, T3, TWO)
    assert rec.value == 4 and [k for k, _ in rec.witnesses] == [canonical_key(dturan(3, 2))]
    assert extremal_number(4, T3, TWO).value == 8
    assert abs(extremal_number(3, T3, LOG2_3).value - 2 * math.log2(3)) <= 1e-9
    assert rec.to_json()["witness_classes"] == 1


def test_construction_only():
    rec = extremal_number(7, T3, TWO, mode="construction-only")
    assert rec.value == 2 * turan_number(7, 2) and not rec.exhaustive
    with pytest.raises(InputError):
        extremal_number(3, T3, TWO, mode="guess")


@pytest.mark.parametrize("n", [2, 3, 4])
def test_extremal_matches_brute_force(n):
    recs = extremal_records(n, T3, WEIGHTS)
    for rec in recs:
        a = rec.a
        best, keys = None, set()
        for es in members(n, False):
            G = from_edge_list(n, es)
            if has_copy(G, T3):
                continue
            w = weighted_size(G, a)
            if best is None or a.compare(w, best) > 0:
                best, keys = w, {canonical_key(G)}
            elif a.eq(w, best):
                keys.add(canonical_key(G))
        assert a.eq(rec.value, best)
        assert [k for k, _ in rec.witnesses] == sorted(keys)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_heavier_digraphs_contain_t3(n):
    for a in WEIGHTS:
        bound = a.value * turan_number(n, 2)
        for es in members(n, False):
            G = from_edge_list(n, es)
            if a.compare(weighted_size(G, a), bound) > 0:
                assert has_copy(G, T3)


def test_frontier_keeps_maxima():
    fc = FrontierCollector()
    for prof in [(1, 0), (0, 1), (2, 0), (1, 1), (0, 1), (3, 0)]:
        fc([0], *prof)
    assert sorted(fc.frontier) == [(1, 1), (3, 0)]


def test_density_ratio():
    assert density_ratio(5, T3, TWO) == Fraction(3, 5)
    assert density_ratio(4, T3, TWO) == Fraction(2, 3)
    with pytest.raises(InputError):
        density_ratio(1, T3, TWO)


def test_m_exponent_examples():
    assert m_exponent(T3) == 2
    assert m_exponent(blow_up(T3, 2)) == Fraction(11, 4)
    with pytest.raises(InputError):
        m_exponent(from_edge_list(3, [(0, 1)]))
    with pytest.raises(InputError):
        m_exponent(from_edge_list(3, [(0, 1), (1, 0), (1, 2)]))


@given(digraphs(min_n=3, max_n=5, oriented=True))
def test_m_exponent_matches_oracle(H):
    if H.edge_count() >= 2:
        assert m_exponent(H) == brute_m(H)


@given(digraphs(min_n=3, max_n=5, oriented=True), st.data())
def test_m_exponent_monotone(H, data):
    es = H.edges()
    if len(es) < 3:
        return
    drop = data.draw(st.sampled_from(es))
    sub = H.with_edges(remove=[drop])
    assert m_exponent(sub) <= m_exponent(H)


def test_chromatic_examples():
    assert chromatic_number(T3) == 3
    assert all(chromatic_number(blow_up(T3, t)) == 3 for t in (1, 2, 3))
    assert chromatic_number(directed_cycle(4)) == 2
    with pytest.raises(UnsupportedSizeError):
        chromatic_number(blow_up(T3, 5))


@given(digraphs(max_n=6))
def test_chromatic_matches_oracle(G):
    assert chromatic_number(G) == chromatic(G)


def test_homogeneity():
    assert is_homogeneous(T3)[0]
    ok, colouring = is_homogeneous(blow_up(T3, 2))
    assert ok and len(set(colouring)) == 3
    # directed 4-cycle: both proper 2-colourings see edges in both directions
    assert is_homogeneous(directed_cycle(4)) == (False, None)
    # alternating source/sink orientation is homogeneous
    assert is_homogeneous(from_edge_list(4, [(0, 1), (2, 1), (2, 3), (0, 3)]))[0]


def test_random_digraph_is_seeded():
    assert random_digraph(6, "d", 5) == random_digraph(6, "d", 5)
    assert random_digraph(6, "o", 5).is_oriented()


@pytest.mark.parametrize(
    "n,cls,total,hist",
    [
        (3, "oriented", 21, {0: 19, 1: 2}),
        (3, "digraph", 39, {0: 37, 1: 2}),
        (4, "oriented", 317, {0: 249, 1: 68}),
        (4, "digraph", 921, {0: 829, 1: 92}),
        (5, "oriented", 9735, {0: 5881, 1: 3644, 2: 210}),
    ],
)
def test_census_frozen(n, cls, total, hist):
    row = census(n, cls, T3, 0.25)
    assert row.total == total and row.histogram == hist
    assert row.budget == math.floor(Fraction(1, 4) * n * n)
    assert row.bipartite_editable == sum(c for d, c in hist.items() if d <= row.budget) <= row.total


@pytest.mark.parametrize("n,cls", [(2, "o"), (3, "o"), (3, "d"), (4, "o"), (4, "d")])
def test_census_strategies_agree(n, cls):
    a, b = census(n, cls, T3, 0.1), census(n, cls, T3, 0.1, strategy="flat")
    assert (a.total, a.histogram) == (b.total, b.histogram)


@pytest.mark.parametrize("n,oriented", [(3, True), (3, False), (4, True)])
def test_census_matches_brute_force(n, oriented):
    hist: dict = {}
    for es in members(n, oriented):
        if not has_copy(from_edge_list(n, es), T3):
            d = bipartite_deletion(n, es)
            hist[d] = hist.get(d, 0) + 1
    row = census(n, "o" if oriented else "d", T3, 0)
    assert row.histogram == hist


def test_census_small_cases():
    row = census(2, "o", T3, 0)
    assert (row.total, row.bipartite_editable) == (3, 3)
    assert census(3, "o", T3, Fraction(1, 9)).total == 21
    assert census(3, "d", T3, 1).total == 39
    sharded = census(4, "d", T3, 0.25, shards=16, jobs=2)
    assert sharded.total == 921
    with pytest.raises(InputError):
        census(3, "o", T3, -0.1)
    assert density_ratio(3, T3, TWO) == Fraction(turan_number(3, 2), comb(3, 2))
