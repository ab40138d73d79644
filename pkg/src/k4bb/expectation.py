"""Exact expected class-edges of a random balanced completion, and its derandomisation.

Setting: vertices are split into a fixed part of side A, a fixed part of side
B and a pool P of m vertices.  A uniformly random a-subset of P joins A, the
other b = m - a join B.  Sampling is without replacement, so a pool pair lands
together on side A with probability a(a-1)/(m(m-1)) and

    E = e(A) + e(B) + sum_p [a/m e(p, A) + b/m e(p, B)]
        + e(P) (a(a-1) + b(b-1)) / (m(m-1)).

Derandomisation fixes pool vertices one at a time in ascending order, sending
each to the side with the smaller conditional expectation (ties to A).  Since
E is the a/m : b/m mixture of the two conditional values, the final count
never exceeds E.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import BoundViolation, PreconditionError
from .graph import Bipartition, Graph, class_edges


def _expectation(fixed: int, to_a: int, to_b: int, e_pool: int, m: int, a: int) -> Fraction:
    b = m - a
    if m == 0:
        return Fraction(fixed)
    val = Fraction(fixed) + Fraction(a * to_a + b * to_b, m)
    if m >= 2:
        val += Fraction(e_pool * (a * (a - 1) + b * (b - 1)), m * (m - 1))
    return val


class _Completion:
    def __init__(self, g: Graph, side_a: Iterable[int], side_b: Iterable[int], pool: Iterable[int], target_a: int):
        n = g.n
        self.g = g
        self.in_a = np.zeros(n, dtype=bool)
        self.in_b = np.zeros(n, dtype=bool)
        self.in_p = np.zeros(n, dtype=bool)
        sa, sb, sp = list(side_a), list(side_b), sorted(pool)
        self.in_a[sa] = True
        self.in_b[sb] = True
        self.in_p[sp] = True
        if len(sa) + len(sb) + len(sp) != n or not (self.in_a | self.in_b | self.in_p).all():
            raise PreconditionError("fixed sides and pool must partition the vertex set")
        self.pool = sp
        self.a = target_a - len(sa)
        if not 0 <= self.a <= len(sp):
            raise PreconditionError(
                f"side A has {len(sa)} fixed vertices and target {target_a} with pool of {len(sp)}"
            )
        adj = g.adjacency.astype(np.int64)
        self.adj = adj
        self.deg_a = adj @ self.in_a.astype(np.int64)
        self.deg_b = adj @ self.in_b.astype(np.int64)
        self.deg_p = adj @ self.in_p.astype(np.int64)
        self.fixed = int(self.deg_a[self.in_a].sum() + self.deg_b[self.in_b].sum()) // 2
        self.to_a = int(self.deg_a[self.in_p].sum())
        self.to_b = int(self.deg_b[self.in_p].sum())
        self.e_pool = int(self.deg_p[self.in_p].sum()) // 2
        self.m = len(sp)

    def value(self) -> Fraction:
        return _expectation(self.fixed, self.to_a, self.to_b, self.e_pool, self.m, self.a)

    def value_if(self, v: int, side_is_a: bool) -> Fraction:
        dp = int(self.deg_p[v])
        fixed = self.fixed + int(self.deg_a[v] if side_is_a else self.deg_b[v])
        to_a = self.to_a - int(self.deg_a[v]) + (dp if side_is_a else 0)
        to_b = self.to_b - int(self.deg_b[v]) + (0 if side_is_a else dp)
        a = self.a - 1 if side_is_a else self.a
        return _expectation(fixed, to_a, to_b, self.e_pool - dp, self.m - 1, a)

    def commit(self, v: int, side_is_a: bool) -> None:
        dp = int(self.deg_p[v])
        row = self.adj[v]
        if side_is_a:
            self.fixed += int(self.deg_a[v])
            self.to_a += dp - int(self.deg_a[v])
            self.to_b -= int(self.deg_b[v])
            self.deg_a += row
            self.in_a[v] = True
            self.a -= 1
        else:
            self.fixed += int(self.deg_b[v])
            self.to_b += dp - int(self.deg_b[v])
            self.to_a -= int(self.deg_a[v])
            self.deg_b += row
            self.in_b[v] = True
        self.e_pool -= dp
        self.deg_p -= row
        self.in_p[v] = False
        self.m -= 1


def fill_expectation(g: Graph, side_a, side_b, pool, target_a: int) -> Fraction:
    """Exact expected class-edges when ``target_a - |side_a|`` random pool vertices join A."""
    return _Completion(g, side_a, side_b, pool, target_a).value()


def derandomized_fill(g: Graph, side_a, side_b, pool, target_a: int) -> tuple[Bipartition, Fraction]:
    """Deterministic completion whose class-edge count is at most the expectation.

    Returns the bipartition and the expectation it is certified against.
    """
    state = _Completion(g, side_a, side_b, pool, target_a)
    start = state.value()
    for v in state.pool:
        b_left = state.m - state.a
        if state.a == 0:
            choice = False
        elif b_left == 0:
            choice = True
        else:
            choice = state.value_if(v, True) <= state.value_if(v, False)
        state.commit(v, choice)
    p = Bipartition.from_mask(state.in_a)
    got = class_edges(g, p)
    if got != state.fixed or got > start:
        raise BoundViolation(f"derandomised completion has {got} class-edges, expectation {start}")
    return p, start
