import itertools
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from k4bb.graph import Graph, is_k4_free


def complete_multipartite(*sizes):
    label = [i for i, s in enumerate(sizes) for _ in range(s)]
    n = len(label)
    return Graph(n, [(u, v) for u, v in itertools.combinations(range(n), 2) if label[u] != label[v]])


def cycle(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def brute_bb(g):
    """Minimum class-edges over all balanced splits, by direct enumeration."""
    n = g.n
    edges = g.edges()
    best = None
    for side in itertools.combinations(range(n), n // 2):
        s = set(side)
        c = sum(1 for u, v in edges if (u in s) == (v in s))
        best = c if best is None else min(best, c)
    return best


@st.composite
def graphs(draw, min_n=0, max_n=8, k4_free=False):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    g = Graph(n, [p for p, b in zip(pairs, bits) if b])
    if k4_free:
        from k4bb.generators import repair_k4

        g = repair_k4(g)
    return g


@pytest.fixture
def k222():
    return complete_multipartite(2, 2, 2)


@pytest.fixture
def c5():
    return cycle(5)


HALF = Fraction(1, 2)
