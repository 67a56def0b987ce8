from __future__ import annotations

import math
import pickle
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import digraphs
from oracles import isomorphic
from digext.constructions import directed_cycle, dturan, dturan_parts, transitive_tournament
from digext.digraph import (
    LOG2_3,
    Digraph,
    WeightParam,
    canonical_key,
    density,
    empty,
    from_edge_list,
    induced,
    max_degrees,
    neighborhoods,
    pair_profile,
    parse_text,
    read_digraph,
    spanning_subdigraph_count,
    vertex_weight,
    weighted_size,
    write_digraph,
)
from digext.errors import InputError, UnsupportedSizeError

TWO = WeightParam(2)


def test_from_edge_list_double_edge():
    G = from_edge_list(3, [(0, 1), (1, 0)])
    assert pair_profile(G) == (0, 1)
    assert pair_profile(from_edge_list(3, [])) == (0, 0)


@pytest.mark.parametrize("edges", [[(0, 2)], [(1, 1)], [(-1, 0)]])
def test_from_edge_list_rejects(edges):
    with pytest.raises(InputError, match=r"\("):
        from_edge_list(2, edges)


def test_pair_profile_examples():
    assert pair_profile(directed_cycle(3)) == (3, 0)
    assert pair_profile(dturan(4, 2)) == (0, 4)
    assert pair_profile(from_edge_list(4, [(0, 1), (1, 0), (2, 3)])) == (1, 1)


def test_weighted_size_examples():
    assert weighted_size(dturan(4, 2), TWO) == 8
    assert weighted_size(directed_cycle(3), TWO) == 3
    assert abs(weighted_size(dturan(4, 2), LOG2_3) - 4 * math.log2(3)) <= 1e-9


def test_vertex_weight_examples():
    G = dturan(4, 2)
    assert all(vertex_weight(G, v, TWO) == 4 for v in range(4))
    C = directed_cycle(3)
    assert all(vertex_weight(C, v, TWO) == 2 for v in range(3))
    with pytest.raises(InputError):
        vertex_weight(C, 3, TWO)


def test_neighborhoods():
    assert neighborhoods(dturan(2, 2), 0) == ({1}, {1}, {1})
    assert neighborhoods(from_edge_list(2, [(0, 1)]), 0) == ({1}, set(), set())
    assert neighborhoods(empty(3), 1) == (set(), set(), set())


def test_max_degrees():
    assert max_degrees(dturan(4, 2)) == (2, 2, 2, 2)
    assert max_degrees(transitive_tournament(3)) == (2, 2, 2, 2)
    assert max_degrees(empty(3)) == (0, 0, 0, 0)


def test_induced():
    assert induced(dturan(4, 2), [0, 1]).edge_count() == 0
    T = transitive_tournament(3)
    assert induced(T, range(3)) == T
    assert induced(T, [0, 2]).edges() == [(0, 1)]


def test_density():
    G = dturan(4, 2)
    assert density(G, [0, 1], [2, 3]) == 1.0
    assert density(empty(4), [0], [1, 2]) == 0.0
    E = from_edge_list(2, [(0, 1)])
    assert density(E, [0], [1]) == 1.0 and density(E, [1], [0]) == 0.0
    with pytest.raises(InputError):
        density(G, [0, 1], [1, 2])
    with pytest.raises(InputError):
        density(G, [], [1])


def test_canonical_key_examples():
    rng = random.Random(1)
    G = from_edge_list(6, [(0, 1), (1, 0), (1, 2), (3, 4), (5, 0), (2, 5)])
    key = canonical_key(G)
    for _ in range(100):
        p = list(range(6))
        rng.shuffle(p)
        assert canonical_key(G.relabel(p)) == key
    assert canonical_key(transitive_tournament(3)) != canonical_key(directed_cycle(3))
    D = dturan(3, 2)
    assert canonical_key(D) == canonical_key(D.relabel([2, 0, 1]))
    with pytest.raises(UnsupportedSizeError):
        canonical_key(empty(11))


def test_spanning_counts():
    G = from_edge_list(3, [(0, 1), (1, 0), (1, 2), (2, 0)])
    assert pair_profile(G) == (2, 1)
    assert spanning_subdigraph_count(G) == 16
    assert spanning_subdigraph_count(G, "oriented") == 12
    assert spanning_subdigraph_count(empty(3)) == 1 == spanning_subdigraph_count(empty(3), "oriented")


def test_text_round_trip(tmp_path):
    G = dturan_parts((1, 2))
    p = tmp_path / "g.dg"
    write_digraph(G, p)
    assert read_digraph(p) == G
    assert p.read_text().splitlines()[0] == "digraph/1 n=3"
    assert parse_text("# hi\ndigraph/1 n=2\n\n0 1  # edge\n") == from_edge_list(2, [(0, 1)])
    for bad in ("", "graph n=2", "digraph/1 n=2\n0", "digraph/1 n=2\n0 x"):
        with pytest.raises(InputError):
            parse_text(bad)


def test_digraph_is_immutable_and_picklable():
    G = dturan(4, 2)
    with pytest.raises(AttributeError):
        G.n = 3
    assert pickle.loads(pickle.dumps(G)) == G


def test_weight_param():
    assert WeightParam.parse("2").value == 2
    assert WeightParam.parse("8/5").value == Fraction(8, 5)
    assert WeightParam.parse("log3") is LOG2_3 and not LOG2_3.exact
    for bad in ("3/2", "1", "5/2", "abc"):
        with pytest.raises(InputError):
            WeightParam.parse(bad)
    assert LOG2_3.eq(2 * LOG2_3.value, 2 * math.log2(3) + 5e-10)


@given(digraphs())
def test_profile_counts_ordered_edges(G):
    f1, f2 = pair_profile(G)
    assert f1 + 2 * f2 == G.edge_count()


@given(digraphs(), st.sampled_from([TWO, LOG2_3, WeightParam(Fraction(8, 5))]))
def test_handshake(G, a):
    total = sum(vertex_weight(G, v, a) for v in range(G.n))
    assert a.eq(total, 2 * weighted_size(G, a))


@given(digraphs(min_n=2), st.data())
def test_adding_an_edge_increases_weight(G, data):
    missing = [(u, v) for u in range(G.n) for v in range(G.n) if u != v and not G.has_edge(u, v)]
    if not missing:
        return
    e = data.draw(st.sampled_from(missing))
    for a in (TWO, LOG2_3):
        assert a.compare(weighted_size(G.with_edges(add=[e]), a), weighted_size(G, a)) > 0


@given(digraphs(min_n=2), st.data())
def test_density_complement(G, data):
    k = data.draw(st.integers(1, G.n - 1))
    A, B = list(range(k)), list(range(k, G.n))
    comp = Digraph(G.n, [((1 << G.n) - 1) & ~G.out[v] & ~(1 << v) for v in range(G.n)])
    assert 0 <= density(G, A, B) <= 1
    assert abs(density(G, A, B) + density(comp, A, B) - 1) < 1e-12


@given(digraphs(max_n=4), digraphs(max_n=4))
def test_canonical_key_matches_permutation_search(G, H):
    assert (canonical_key(G) == canonical_key(H)) == isomorphic(G, H)


@given(digraphs(max_n=7), st.data())
def test_canonical_key_relabel_invariant(G, data):
    p = data.draw(st.permutations(list(range(G.n))))
    assert canonical_key(G.relabel(p)) == canonical_key(G)
