"""Acceptance suite: one test per criterion, each printing a single pass/fail line.

Budgets are wall-clock limits on this machine with the default backend.
"""

import time

import pytest

from k4bb.verify import CriterionResult, run_criterion

BUDGET = {1: 30 * 60, 5: 60}


def report(res: CriterionResult, capsys, extra: str = "") -> None:
    with capsys.disabled():
        print(f"\n{res.line()}{extra} ({res.seconds:.1f}s)")


def check(number: int, capsys, **kwargs) -> CriterionResult:
    res = run_criterion(number, **kwargs)
    budget = BUDGET.get(number)
    if budget is not None and res.seconds >= budget:
        res.passed = False
        res.detail += f"; over the {budget}s budget"
    report(res, capsys)
    assert res.passed, res.detail
    return res


def test_criterion_1_small_sweep_under_a_minute(capsys):
    start = time.perf_counter()
    res = run_criterion(1, extended=False)
    seconds = time.perf_counter() - start
    if seconds >= 60:
        res.passed = False
        res.detail += "; over the 60s budget"
    res.title += " (n <= 6)"
    report(res, capsys)
    assert res.passed, res.detail


def test_criterion_1(capsys):
    check(1, capsys)


def test_criterion_2(capsys):
    check(2, capsys)


def test_criterion_3(capsys):
    check(3, capsys)


def test_criterion_4(capsys):
    check(4, capsys)


def test_criterion_5(capsys):
    check(5, capsys)


def test_criterion_6(capsys):
    check(6, capsys)


def test_criterion_7(capsys):
    check(7, capsys)


def test_criterion_8(capsys):
    res = check(8, capsys)
    assert "out of scope" in res.detail
