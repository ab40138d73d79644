from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k4bb.errors import PreconditionError
from k4bb.generators import (
    FAMILIES,
    GeneratorSpec,
    convenient_instance,
    generate,
    planted_sets,
    repair_k4,
    turan_sizes,
)
from k4bb.graph import Graph, is_k4_free


def is_independent(g, xs):
    return g.count_edges(list(xs)) == 0


def test_complete_tripartite():
    g = generate(GeneratorSpec("complete-tripartite", (2, 2, 2)))
    assert (g.n, g.edge_count) == (6, 12)


def test_turan():
    assert turan_sizes(8) == (3, 3, 2)
    assert generate(GeneratorSpec("turan", (8,))).edge_count == 21


def test_pentagon_blowup():
    g = generate(GeneratorSpec("pentagon-blowup", (2,)))
    assert (g.n, g.edge_count) == (10, 20)


def test_complete_bipartite():
    assert generate(GeneratorSpec("complete-bipartite", (3, 4))).edge_count == 12


def test_blowup_of():
    base = Graph(3, [(0, 1), (1, 2), (0, 2)])
    g = generate(GeneratorSpec("blowup-of", (2,), base=base))
    assert (g.n, g.edge_count) == (6, 12)
    with pytest.raises(PreconditionError):
        GeneratorSpec("blowup-of", (2,))


@pytest.mark.parametrize("family, sizes", [
    ("random-tripartite", (4, 5, 6)),
    ("random-k4free-repair", (12,)),
    ("planted-two-ind", (12,)),
])
def test_seeded_families_are_deterministic(family, sizes):
    a = generate(GeneratorSpec(family, sizes, p=Fraction(1, 2), seed=7))
    b = generate(GeneratorSpec(family, sizes, p=Fraction(1, 2), seed=7))
    c = generate(GeneratorSpec(family, sizes, p=Fraction(1, 2), seed=8))
    assert a.edges() == b.edges()
    assert a.edges() != c.edges()


def test_probability_extremes():
    assert generate(GeneratorSpec("random-tripartite", (3, 3, 3), p=0)).edge_count == 0
    assert generate(GeneratorSpec("random-tripartite", (3, 3, 3), p=1)).edge_count == 27


def test_repair_on_k5():
    k5 = Graph(5, [(u, v) for u in range(5) for v in range(u + 1, 5)])
    g = repair_k4(k5)
    assert is_k4_free(g)
    assert not g.has_edge(0, 1)


def test_repair_prefers_low_degree_edge():
    # K4 on 0..3 plus pendant vertices on 0 and 1: edge (2, 3) has the least degree sum
    g = Graph(6, [(u, v) for u in range(4) for v in range(u + 1, 4)] + [(0, 4), (1, 5)])
    h = repair_k4(g)
    assert h.edge_count == 7 and not h.has_edge(2, 3)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["random-k4free-repair", "random-tripartite", "planted-two-ind"]),
       st.integers(0, 2 ** 64 - 1), st.fractions(0, 1, max_denominator=8))
def test_random_families_are_k4_free(family, seed, p):
    sizes = {"random-k4free-repair": (9,), "random-tripartite": (3, 4, 2), "planted-two-ind": (12,)}[family]
    assert is_k4_free(generate(GeneratorSpec(family, sizes, p=p, seed=seed)))


@pytest.mark.parametrize("spec, err", [
    (("nope", (3,)), "unknown family"),
    (("turan", (3, 3)), "size parameter"),
    (("turan", (-1,)), "nonnegative"),
    (("planted-two-ind", (10,)), "divisible by 6"),
    (("planted-two-ind", (12, 5)), "n/3"),
    (("pentagon-blowup", (0,)), "at least 1"),
])
def test_invalid_specs(spec, err):
    with pytest.raises(PreconditionError, match=err):
        GeneratorSpec(*spec)
    with pytest.raises(PreconditionError):
        GeneratorSpec("turan", (3,), p=Fraction(3, 2))


def test_planted_sets():
    spec = GeneratorSpec("planted-two-ind", (12, 1), seed=3)
    i1, i2 = planted_sets(spec)
    assert (i1, i2) == ((0,), tuple(range(1, 8)))
    g = generate(spec)
    assert is_independent(g, i1) and is_independent(g, i2)


def test_convenient_instance_paths():
    inst = convenient_instance(GeneratorSpec("complete-tripartite", (2, 4, 6)))
    assert (inst.i1, inst.i2) == ((0, 1), (6, 7, 8, 9, 10, 11))
    inst = convenient_instance(GeneratorSpec("turan", (12,)))
    assert len(inst.i1) + len(inst.i2) == 8
    inst = convenient_instance(GeneratorSpec("planted-two-ind", (6,), seed=1))
    assert len(inst.i1) + len(inst.i2) == 4
    with pytest.raises(PreconditionError, match="pass I1 and I2"):
        convenient_instance(GeneratorSpec("pentagon-blowup", (3,)))
    with pytest.raises(PreconditionError, match="add up"):
        convenient_instance(GeneratorSpec("complete-tripartite", (1, 2, 4)))
    with pytest.raises(PreconditionError, match="pass I1 and I2"):
        convenient_instance(GeneratorSpec("random-k4free-repair", (6,)))
    inst = convenient_instance(GeneratorSpec("complete-bipartite", (2, 4)), [0, 1], [2, 3])
    assert inst.i2 == (2, 3)


def test_family_list():
    assert set(FAMILIES) >= {"complete-tripartite", "turan", "pentagon-blowup", "random-tripartite",
                             "random-k4free-repair", "blowup-of"}
