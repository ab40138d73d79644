from fractions import Fraction

import pytest

import k4bb.partition
import k4bb.verify as verify_module
from k4bb.graph import Bipartition, class_edges
from k4bb.verify import (
    CriterionResult,
    kmmm_optimum,
    recount_class_edges,
    run_criterion,
    verify,
)
from conftest import brute_bb, complete_multipartite


def test_recount_agrees_with_class_edges():
    g = complete_multipartite(2, 3, 3)
    p = Bipartition.of([0, 2, 4, 6], [1, 3, 5, 7])
    assert recount_class_edges(g, p) == class_edges(g, p)


@pytest.mark.parametrize("m", [1, 2])
def test_kmmm_optimum_matches_brute_force(m):
    assert kmmm_optimum(m) == brute_bb(complete_multipartite(m, m, m))


def test_kmmm_optimum_even():
    for m in (2, 4, 6, 20):
        assert 9 * kmmm_optimum(m) == (3 * m) ** 2


def test_mutated_class_count_is_caught(monkeypatch):
    """An off-by-one in the certificate count must fail the independent recount."""
    real = k4bb.partition.class_edges
    monkeypatch.setattr(k4bb.partition, "class_edges", lambda g, p: real(g, p) + 1)
    res = run_criterion(2, n_max=10)
    assert not res.passed


def test_mutated_bound_is_caught(monkeypatch):
    monkeypatch.setattr(verify_module, "tripartite_closed_form", lambda sizes: Fraction(-1))
    assert not run_criterion(2, n_max=8).passed


def test_errors_become_failures(monkeypatch):
    def boom(**kwargs):
        raise AssertionError("kaput")

    monkeypatch.setitem(verify_module.CRITERIA, 7, boom)
    res = run_criterion(7)
    assert not res.passed and "kaput" in res.detail
    assert res.line().startswith("[FAIL] criterion 7")


def test_result_line_format():
    r = CriterionResult(3, "title", True, "ok")
    assert r.line() == "[PASS] criterion 3: title - ok"


def test_unknown_suite():
    with pytest.raises(ValueError):
        verify("nope")


def test_threads_env(monkeypatch):
    from k4bb.verify import worker_count

    monkeypatch.setenv("K4B_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("K4B_THREADS", "x")
    assert worker_count() == 1
