import itertools

import pytest
from hypothesis import given, settings

from conftest import brute_bb, complete_multipartite, cycle, graphs
from k4bb.errors import PreconditionError, SizeLimitError
from k4bb.graph import Graph, TriPartition, class_edges
from k4bb.oracle import (
    bb_exact,
    check_bb_bound,
    check_packing_bound,
    enumerate_k4_free,
    max_independent_set,
)


def test_bb_of_k222(k222):
    res = bb_exact(k222)
    assert res.optimum == 4
    assert res.witness.side_a == (0, 1, 2)


def test_bb_small_values():
    assert bb_exact(cycle(5)).optimum == 1
    assert bb_exact(Graph(4, [(0, 1), (2, 3)])).optimum == 0
    assert bb_exact(complete_multipartite(3, 3)).optimum == 0
    assert bb_exact(Graph(0)).optimum == 0


def test_bb_cap():
    with pytest.raises(SizeLimitError):
        bb_exact(Graph(21))
    assert bb_exact(Graph(21), cap=21).optimum == 0


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=9))
def test_bb_matches_enumeration(g):
    res = bb_exact(g)
    assert res.optimum == brute_bb(g)
    assert class_edges(g, res.witness) == res.optimum
    assert res.witness.is_balanced


def test_mis_examples(k222, c5):
    assert max_independent_set(k222) == (0, 1)
    assert max_independent_set(c5) == (0, 2)
    assert max_independent_set(Graph(3)) == (0, 1, 2)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=10))
def test_mis_is_lexicographically_first_maximum(g):
    got = max_independent_set(g)
    a = g.adjacency
    best = None
    for size in range(g.n, -1, -1):
        for s in itertools.combinations(range(g.n), size):
            if not any(a[u, v] for u, v in itertools.combinations(s, 2)):
                best = s
                break
        if best is not None:
            break
    assert got == best


def test_enumeration_counts():
    assert [enumerate_k4_free(n) for n in range(1, 7)] == [1, 2, 8, 63, 958, 27626]
    seen = []
    enumerate_k4_free(3, seen.append)
    assert len(seen) == 8 and len(set(seen)) == 8


def test_enumeration_cap():
    with pytest.raises(SizeLimitError):
        enumerate_k4_free(8)


@pytest.mark.parametrize("n, max_bb", [(3, 1), (4, 1), (5, 2), (6, 4)])
def test_bound_sweep(n, max_bb):
    res = check_bb_bound(n)
    assert res["violations"] == 0
    assert res["max_bb"] == max_bb


def test_packing_bound():
    g = complete_multipartite(1, 2, 3)
    g = Graph(6, [e for e in g.edges() if not (e[0] == 0 and e[1] in (1, 2))])
    assert check_packing_bound(g, TriPartition.of([0], [1, 2], [3, 4, 5]))
    with pytest.raises(PreconditionError):
        check_packing_bound(complete_multipartite(2, 2, 2), TriPartition.of([0, 1], [2, 3], [4, 5]))
