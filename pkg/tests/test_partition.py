from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import complete_multipartite, cycle, graphs
from k4bb.errors import BoundViolation, PreconditionError
from k4bb.generators import GeneratorSpec, convenient_instance, generate
from k4bb.graph import Bipartition, Graph, TriPartition, blowup, class_edges, is_k4_free, triangles
from k4bb.oracle import bb_exact
from k4bb.partition import (
    ConvenientInstance,
    PartitionCertificate,
    blowup_reduce,
    cl_transform,
    convenient_greedy,
    greedy_bound,
    local_search_improve,
    low_degree_step,
    neighborhoods_shortcut,
    partition_auto,
    pay_for_triangles,
    three_coloring,
    trim_independent_sets,
    tripartite_closed_form,
    tripartite_partition,
    turan_partition,
    two_ind_partition,
)


def planted(n, s1, p, seed):
    return convenient_instance(GeneratorSpec("planted-two-ind", (n, s1), p=p, seed=seed))


def test_certificate_rejects_excess():
    g = complete_multipartite(2, 2, 2)
    with pytest.raises(BoundViolation):
        PartitionCertificate.make(g, Bipartition.of([0, 1, 2], [3, 4, 5]), 3, "turan")
    with pytest.raises(ValueError):
        PartitionCertificate.make(g, Bipartition.of([0, 1, 2], [3, 4, 5]), 9, "nope")


def test_turan_partition():
    g = complete_multipartite(3, 3)
    cert = turan_partition(g, [0, 1, 2])
    assert cert.achieved == 0
    with pytest.raises(PreconditionError):
        turan_partition(complete_multipartite(2, 2, 2), [0, 1])


def test_tripartite_k222(k222):
    cert = tripartite_partition(k222, TriPartition.of([0, 1], [2, 3], [4, 5]))
    assert cert.achieved == 4 and cert.method == "tripartite"


def test_tripartite_closed_form_values():
    assert tripartite_closed_form((2, 2, 2)) == 4
    assert tripartite_closed_form((1, 2, 3)) == 4 - Fraction(2, 3) * 36 * (
        (Fraction(1, 6) - Fraction(1, 3)) ** 2 + 0 + (Fraction(1, 2) - Fraction(1, 3)) ** 2
    )


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(1, 8), st.integers(1, 8))
def test_tripartite_meets_closed_form(a, b, c):
    n = a + b + c
    if n % 2 or max(a, b, c) > n // 2:
        return
    g = complete_multipartite(a, b, c)
    cert = tripartite_partition(g, TriPartition.of(range(a), range(a, a + b), range(a + b, n)))
    assert cert.achieved <= tripartite_closed_form((a, b, c))


def test_tripartite_requires_independent_parts(k222):
    with pytest.raises(PreconditionError):
        tripartite_partition(k222, TriPartition.of([0, 2], [1, 3], [4, 5]))


def test_convenient_instance_validation():
    g = Graph(6)
    inst = ConvenientInstance.create(g, [0, 1], [2, 3])
    assert inst.c1 == 1 and inst.c2 == 1 and inst.r == (4, 5)
    with pytest.raises(PreconditionError):
        ConvenientInstance.create(g, [0, 1, 2], [3])
    with pytest.raises(PreconditionError):
        ConvenientInstance.create(complete_multipartite(2, 2, 2), [0, 2], [1, 3])


def test_trim_rule():
    assert trim_independent_sets(6, [0, 1, 2], [3, 4]) == ((3, 4), (0, 1))
    assert trim_independent_sets(6, [0, 1], [2, 3, 4]) == ((0, 1), (2, 3))
    assert trim_independent_sets(6, [0, 1, 2], [3, 4, 5]) == ((0, 1), (3, 4))


def test_shortcut_on_designed_graph():
    # I1 = {0, 1}, I2 = {2, 3}, R = {4, 5} with 45 an edge whose ends share all of I1 + I2
    edges = [(4, 5)] + [(x, r) for x in range(4) for r in (4, 5)]
    g = Graph(6, edges)
    inst = ConvenientInstance.create(g, [0, 1], [2, 3])
    cert = neighborhoods_shortcut(inst, 4, 5)
    assert cert is not None and cert.method == "neighborhoods"
    assert cert.achieved <= cert.claimed_bound
    assert convenient_greedy(inst).achieved <= 4


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([6, 12, 18]), st.integers(0, 6), st.sampled_from([Fraction(1, 3), Fraction(2, 3)]),
       st.integers(0, 2 ** 32))
def test_two_ind_bound_and_sandwich(n, s1, p, seed):
    inst = planted(n, min(s1, n // 3), p, seed)
    cert = two_ind_partition(inst.graph, inst.i1, inst.i2)
    assert 9 * cert.achieved <= n * n
    assert cert.achieved == class_edges(inst.graph, cert.partition)
    if n <= 12:
        assert cert.achieved >= bb_exact(inst.graph).optimum


def test_two_ind_via_blowup():
    # n = 4 is not divisible by 6: the 6-blowup route is taken
    g = Graph(4, [(0, 2), (1, 3), (0, 3)])
    cert = two_ind_partition(g, [0, 1], [2])
    assert cert.details["route"] == "blowup"
    assert 9 * cert.achieved <= 16


def test_two_ind_hypotheses():
    g = complete_multipartite(2, 2, 2)
    with pytest.raises(PreconditionError):
        two_ind_partition(g, [0, 1], [2])
    with pytest.raises(PreconditionError):
        two_ind_partition(g, [0, 2], [1, 3])


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([12, 18]), st.integers(0, 2 ** 32))
def test_greedy_on_triangle_free_remainder(n, seed):
    inst = planted(n, n // 3, Fraction(1, 2), seed)
    clg, t = cl_transform(inst)
    assert not triangles(clg.induced(inst.r)) or t
    assert clg.count_edges(inst.i1) == 0 and clg.count_edges(inst.i2) == 0
    assert not [x for x in t if x not in inst.r]
    cert = convenient_greedy(inst.with_graph(clg))
    assert cert.achieved <= max(cert.claimed_bound, greedy_bound(inst))
    if cert.method == "convenient-greedy":
        q = pay_for_triangles(inst, t, cert.partition, clg)
        assert 9 * class_edges(inst.graph, q) <= n * n


def test_blowup_reduce_examples():
    p3 = Graph(3, [(0, 1), (1, 2)])
    h = blowup(p3, 2)
    q = blowup_reduce(p3, 2, bb_exact(h).witness)
    assert class_edges(p3, q) == 0 and q.is_balanced
    k3 = complete_multipartite(1, 1, 1)
    q = blowup_reduce(k3, 2, bb_exact(blowup(k3, 2)).witness)
    assert class_edges(k3, q) == 1


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=2, max_n=7), st.sampled_from([2, 3]), st.randoms(use_true_random=False))
def test_blowup_reduce_never_worse(g, k, rnd):
    n = g.n
    verts = list(range(n * k))
    rnd.shuffle(verts)
    p = Bipartition.of(verts[: n * k // 2], verts[n * k // 2:])
    h = blowup(g, k)
    trace = []
    q = blowup_reduce(g, k, p, trace)
    assert q.is_balanced
    assert k * k * class_edges(g, q) <= class_edges(h, p)
    assert all(after <= before for before, after in trace)


@settings(max_examples=30, deadline=None)
@given(graphs(min_n=4, max_n=8, k4_free=True))
def test_low_degree_step(g):
    step = low_degree_step(g)
    if step is None:
        return
    n = g.n
    assert 9 * step.degree < 4 * n - 1
    red = step.reduced_graph()
    w = bb_exact(blowup(red, 2))
    q = step.complete(w.witness)
    assert q.is_balanced
    if 9 * w.optimum <= 4 * (n - 1) ** 2:
        assert 9 * class_edges(g, q) <= n * n


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=2, max_n=10))
def test_local_search_monotone(g):
    n = g.n
    start = Bipartition.of(range(n // 2), range(n // 2, n))
    q = local_search_improve(g, start)
    assert q.is_balanced
    assert bb_exact(g).optimum <= class_edges(g, q) <= class_edges(g, start)


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=9))
def test_three_coloring_is_proper(g):
    tp = three_coloring(g)
    if tp is not None:
        tp.validate(g.n)
        assert all(g.count_edges(p) == 0 for p in tp.parts)


def test_three_coloring_none_for_k4():
    assert three_coloring(complete_multipartite(1, 1, 1, 1)) is None


@settings(max_examples=20, deadline=None)
@given(graphs(min_n=2, max_n=10, k4_free=True))
def test_partition_auto_sandwich(g):
    cert, tried = partition_auto(g)
    assert tried
    assert bb_exact(g).optimum <= cert.achieved == class_edges(g, cert.partition)


def test_partition_auto_pentagon_blowup():
    g = blowup(cycle(5), 2)
    cert, _ = partition_auto(g)
    assert cert.achieved == bb_exact(g).optimum == 4
