import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs
from k4bb.errors import PreconditionError
from k4bb.expectation import derandomized_fill, fill_expectation
from k4bb.graph import Graph, class_edges


def average_over_completions(g, side_a, side_b, pool, target):
    a = target - len(side_a)
    total, count = Fraction(0), 0
    for chosen in itertools.combinations(pool, a):
        sa = set(side_a) | set(chosen)
        c = sum(1 for u, v in g.edges() if (u in sa) == (v in sa))
        total += c
        count += 1
    return total / count


@st.composite
def fill_cases(draw):
    g = draw(graphs(min_n=2, max_n=9))
    n = g.n
    labels = draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
    side_a = [v for v in range(n) if labels[v] == 0]
    side_b = [v for v in range(n) if labels[v] == 1]
    pool = [v for v in range(n) if labels[v] == 2]
    lo, hi = len(side_a), len(side_a) + len(pool)
    target = draw(st.integers(lo, hi))
    return g, side_a, side_b, pool, target


@settings(max_examples=150, deadline=None)
@given(fill_cases())
def test_expectation_is_the_average(case):
    g, a, b, p, t = case
    assert fill_expectation(g, a, b, p, t) == average_over_completions(g, a, b, p, t)


@settings(max_examples=150, deadline=None)
@given(fill_cases())
def test_derandomized_fill_never_exceeds(case):
    g, a, b, p, t = case
    part, e = derandomized_fill(g, a, b, p, t)
    assert len(part.side_a) == t
    assert set(a) <= set(part.side_a) and set(b) <= set(part.side_b)
    assert class_edges(g, part) <= e


def test_star_example():
    star = Graph(4, [(0, 1), (0, 2), (0, 3)])
    assert fill_expectation(star, [0], [], [1, 2, 3], 2) == 1


def test_bad_target():
    g = Graph(4)
    with pytest.raises(PreconditionError):
        fill_expectation(g, [0, 1, 2], [], [3], 2)
    with pytest.raises(PreconditionError):
        fill_expectation(g, [0], [1], [2], 2)
