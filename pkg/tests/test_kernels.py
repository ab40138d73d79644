"""The compiled and vectorised kernels must agree exactly."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import brute_bb, graphs
from k4bb import kernels
from k4bb.graph import Graph


def rows_of(g):
    return np.array(g.row_masks(), dtype=np.int64) if g.n else np.zeros(0, dtype=np.int64)


def test_pair_index_is_prefix_stable():
    seen = [kernels.pair_index(i, j) for j in range(6) for i in range(j)]
    assert seen == list(range(15))
    assert kernels.pair_index(3, 1) == kernels.pair_index(1, 3)


def test_balanced_subsets_counts():
    assert len(kernels.balanced_subsets(6)) == 10
    assert len(kernels.balanced_subsets(5)) == 10
    assert kernels.split_count(6) == 10 and kernels.split_count(7) == 35


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=10))
def test_bb_rows_backends_agree_with_brute_force(g):
    a = kernels.bb_rows_numba(rows_of(g), g.n)
    b = kernels.bb_rows_numpy(rows_of(g), g.n)
    assert (int(a[0]), int(a[1])) == (int(b[0]), int(b[1]))
    assert int(a[0]) == brute_bb(g)


@pytest.mark.parametrize("n", range(1, 7))
def test_k4free_and_bb_masks_backends_agree(n):
    quads = kernels.k4_pair_masks(n)
    m1 = kernels.k4free_masks_numba(n, quads) if n >= 4 else None
    m2 = kernels.k4free_masks_numpy(n, quads) if n >= 4 else None
    if n >= 4:
        assert np.array_equal(np.sort(m1), np.sort(m2))
    masks = kernels.k4free_masks(n)
    splits = kernels.split_pair_masks(n)
    assert np.array_equal(kernels.bb_masks_numba(masks, splits), kernels.bb_masks_numpy(masks, splits))


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=9))
def test_k4_and_triangle_backends_agree(g):
    a = g.adjacency
    assert kernels.has_k4_numba(a) == kernels.has_k4_numpy(a)
    assert np.array_equal(kernels.triangles_numba(a), kernels.triangles_numpy(a))
    brute = [t for t in itertools.combinations(range(g.n), 3)
             if a[t[0], t[1]] and a[t[0], t[2]] and a[t[1], t[2]]]
    assert [tuple(t) for t in kernels.triangles_numpy(a).tolist()] == brute


@settings(max_examples=25, deadline=None)
@given(graphs(min_n=1, max_n=5))
def test_tuple_histogram_backends_agree(g):
    red = np.array([v % 2 == 0 for v in range(g.n)])
    w = np.arange(1, g.n + 1, dtype=np.int64)
    for k, prefix in ((2, ()), (3, ()), (3, (0,)), (4, (0, g.n - 1))):
        p = np.array(prefix, dtype=np.int64)
        h1 = kernels.tuple_histogram_numba(g.adjacency, red, w, k, p)
        h2 = kernels.tuple_histogram_numpy(g.adjacency, red, w, k, p)
        assert np.array_equal(h1, h2)
        free = k - len(prefix)
        assert int(h1.sum()) == int(w.sum()) ** free


@pytest.mark.parametrize("n", range(1, 6))
def test_domination_sweep_backends_agree(n):
    masks = kernels.k4free_masks(n)
    bbs = kernels.bb_masks(masks, n)
    inside = kernels.inside_pair_table(n)
    pidx = kernels.pair_index_matrix(n)
    a = kernels.domination_sweep_numba(masks, bbs, n, inside, pidx)
    b = kernels.domination_sweep_numpy(masks, bbs, n, inside, pidx)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_k4free_counts_small():
    # direct count over all labelled graphs for n <= 5
    for n, want in ((1, 1), (2, 2), (3, 8), (4, 63), (5, 958)):
        pairs = list(itertools.combinations(range(n), 2))
        count = 0
        for bits in range(1 << len(pairs)):
            g = Graph(n, [p for i, p in enumerate(pairs) if bits >> i & 1])
            if not kernels.has_k4_numpy(g.adjacency):
                count += 1
        assert count == want
        assert len(kernels.k4free_masks(n)) == want
