from __future__ import annotations

from math import comb

import pytest
from hypothesis import assume, given, strategies as st

from conftest import digraphs
from oracles import isomorphic
from digext.constructions import (
    blow_up,
    complete_digraph,
    directed_cycle,
    dturan,
    dturan_parts,
    transitive_tournament,
    turan_number,
    turan_parts,
)
from digext.digraph import LOG2_3, WeightParam, canonical_key, pair_profile, weighted_size
from digext.errors import InputError
from digext.patterns import contains


def test_turan_numbers():
    assert turan_number(4, 2) == 4
    assert turan_number(5, 2) == 6
    assert all(turan_number(n, 1) == 0 for n in range(8))
    assert turan_parts(7, 3) == [3, 2, 2]
    with pytest.raises(InputError):
        turan_number(4, 0)


def test_dturan_examples():
    G = dturan(4, 2)
    assert pair_profile(G) == (0, 4) and weighted_size(G, WeightParam(2)) == 8
    assert dturan(5, 1).edge_count() == 0
    assert not contains(dturan(6, 2), transitive_tournament(3))


def test_dturan_parts_examples():
    G = dturan_parts((1, 3))
    assert pair_profile(G) == (0, 3) and G.edge_count() == 6
    assert isomorphic(dturan_parts((2, 2)), dturan(4, 2))
    assert dturan_parts((4,)).edge_count() == 0
    assert dturan(5, 2) == dturan_parts((3, 2))


def test_transitive_tournament():
    assert transitive_tournament(3).edges() == [(0, 1), (0, 2), (1, 2)]
    assert transitive_tournament(1).edge_count() == 0
    assert contains(transitive_tournament(4), transitive_tournament(3))


def test_blow_up_examples():
    T3 = transitive_tournament(3)
    B = blow_up(T3, 2)
    assert B.n == 6 and B.edge_count() == 12 and pair_profile(B)[1] == 0
    K = blow_up(transitive_tournament(2), 3)
    assert K.edges() == [(a, b) for a in range(3) for b in range(3, 6)]
    assert blow_up(T3, 1) == T3
    D = blow_up(complete_digraph(2), 2)
    assert D.edge_count() == 2 * 2 * 2
    with pytest.raises(InputError):
        blow_up(T3, 0)


def test_cycles():
    C = directed_cycle(3)
    assert pair_profile(C) == (3, 0) and not contains(C, transitive_tournament(3))
    assert directed_cycle(4).edge_count() == 4
    with pytest.raises(InputError):
        directed_cycle(2)


@pytest.mark.parametrize("n", range(0, 51, 7))
@pytest.mark.parametrize("r", range(1, 6))
def test_weight_of_dturan(n, r):
    G = dturan(n, r)
    assert weighted_size(G, WeightParam(2)) == 2 * turan_number(n, r)
    assert abs(weighted_size(G, LOG2_3) - LOG2_3.value * turan_number(n, r)) <= 1e-9


@pytest.mark.parametrize("n", range(1, 9))
@pytest.mark.parametrize("r", range(1, 4))
def test_dturan_is_tt_free(n, r):
    assert not contains(dturan(n, r), transitive_tournament(r + 1))


@given(digraphs(min_n=1, max_n=3), st.integers(1, 2), st.integers(1, 2))
def test_blow_up_composes(H, s, t):
    assume(H.n * s * t <= 10)  # canonical keys stop at 10 vertices
    assert canonical_key(blow_up(blow_up(H, s), t)) == canonical_key(blow_up(H, s * t))


@pytest.mark.parametrize("r", range(1, 4))
@pytest.mark.parametrize("t", range(1, 4))
def test_blow_up_contains_base(r, t):
    T = transitive_tournament(r + 1)
    assert contains(blow_up(T, t), T)


@given(st.integers(0, 12), st.integers(1, 15))
def test_turan_parts_balanced(n, r):
    p = turan_parts(n, r)
    assert sum(p) == n and max(p) - min(p) <= 1 and p == sorted(p, reverse=True)
    if r >= n:
        assert turan_number(n, r) == comb(n, 2)
