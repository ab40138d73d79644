from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import complete_multipartite, cycle, graphs
from k4bb.errors import GraphParseError, InvalidPartitionError, PreconditionError
from k4bb.graph import (
    Bipartition,
    ColoredGraph,
    Graph,
    TriPartition,
    blowup,
    blowup_copy,
    blowup_origin,
    class_edges,
    codegree,
    codegree_matrix,
    cross_edges,
    degree_coloring,
    disjoint_triangle_packing,
    format_graph,
    is_k4_free,
    maximal_matching_within,
    parse_graph_text,
    triangles,
    vertex_set,
)


def test_edge_count_and_neighbors(k222):
    assert k222.edge_count == 12
    assert k222.neighbors(0) == (2, 3, 4, 5)
    assert k222.degree(3) == 4


def test_graph_rejects_bad_edges():
    with pytest.raises(PreconditionError):
        Graph(3, [(1, 1)])
    with pytest.raises(PreconditionError):
        Graph(3, [(0, 3)])


def test_vertex_set_errors():
    assert vertex_set([3, 1], 4) == (1, 3)
    with pytest.raises(PreconditionError):
        vertex_set([1, 1])
    with pytest.raises(PreconditionError):
        vertex_set([4], 4)


def test_k4_detection():
    assert is_k4_free(complete_multipartite(2, 2, 2))
    assert not is_k4_free(complete_multipartite(1, 1, 1, 1))
    assert is_k4_free(Graph(0))


def test_codegree(k222):
    assert codegree(k222, 0, 1) == 4
    assert codegree(k222, 0, 2) == 2
    with pytest.raises(PreconditionError):
        codegree(k222, 0, 0)
    c = codegree_matrix(k222)
    assert c[0, 1] == 4 and c[0, 0] == 4


def test_class_and_cross_edges(k222):
    p = Bipartition.of([0, 1, 2], [3, 4, 5])
    assert class_edges(k222, p) == 4
    assert cross_edges(k222, p) == 8
    with pytest.raises(InvalidPartitionError):
        class_edges(k222, Bipartition.of([0, 1], [3, 4, 5]))


def test_bipartition_validation():
    with pytest.raises(InvalidPartitionError):
        Bipartition.of([0, 1], [1, 2]).validate(3)
    assert Bipartition.of([0], [1, 2]).is_balanced
    assert not Bipartition.of([], [0, 1]).is_balanced


def test_tripartition_sizes():
    tp = TriPartition.of([0], [1, 2], [3, 4, 5])
    tp.validate(6)
    assert tp.sizes == (1, 2, 3)
    assert tp.relative_sizes() == (Fraction(1, 6), Fraction(1, 3), Fraction(1, 2))


def test_triangles_of_k4_minus_edge():
    g = Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
    assert triangles(g) == [(0, 1, 2), (0, 1, 3)]


def test_degree_coloring():
    star = Graph(5, [(0, i) for i in range(1, 5)])
    assert degree_coloring(star).colors == "RBBBB"
    assert degree_coloring(cycle(5)).colors == "BBBBB"
    assert degree_coloring(complete_multipartite(2, 2, 2)).colors == "RRRRRR"


def test_blowup_labels_and_edges(c5):
    b = blowup(c5, 2)
    assert b.n == 10 and b.edge_count == 20
    assert blowup_copy(3, 1, 2) == 7 and blowup_origin(7, 2) == 3
    assert not b.has_edge(6, 7)
    assert b.has_edge(6, 8)


def test_six_blowup_is_three_blowup_of_two_blowup(c5):
    assert blowup(c5, 6) == blowup(blowup(c5, 2), 3)


@given(graphs(max_n=6), graphs(max_n=1))
def test_blowup_edge_formula(g, _):
    for k in (1, 2, 3):
        assert blowup(g, k).edge_count == k * k * g.edge_count


@given(graphs(max_n=8))
def test_k4_free_preserved_by_blowup(g):
    assert is_k4_free(blowup(g, 2)) == is_k4_free(g)


def test_matching_within_parts(k222):
    assert maximal_matching_within(k222, [[0, 2, 4], [1, 3, 5]]) == [(0, 2), (1, 3)]


def test_triangle_packing_is_disjoint(k222):
    pack = disjoint_triangle_packing(k222, range(6))
    assert pack == [(0, 2, 4), (1, 3, 5)]


def test_parse_round_trip():
    text = "3 3\n0 1\n0 2\n1 2\n"
    g = parse_graph_text(text)
    assert g.edge_count == 3 and format_graph(g) == text
    cg = parse_graph_text(text + "RRB\n")
    assert isinstance(cg, ColoredGraph) and cg.colors == "RRB"
    assert format_graph(cg) == text + "RRB\n"


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("2 1\n0 0\n", "line 2: self-loop"),
        ("2 1\n0 2\n", "line 2: vertex index out of range"),
        ("3 2\n0 1\n0 1\n", "line 3: duplicate edge"),
        ("3 1\n1 0\n", "u < v"),
        ("x\n", "line 1"),
        ("3 1\n0 1\nRR\n", "color line"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(GraphParseError, match=fragment):
        parse_graph_text(text)


@settings(max_examples=50)
@given(graphs(max_n=9))
def test_format_parse_identity(g):
    assert parse_graph_text(format_graph(g)) == g


def test_adjacency_is_read_only(k222):
    with pytest.raises(ValueError):
        k222.adjacency[0, 1] = False
    assert isinstance(k222.adjacency, np.ndarray)
