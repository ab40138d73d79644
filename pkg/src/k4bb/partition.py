"""Constructive balanced bipartitions with certified class-edge bounds.

Every random step of the underlying existence arguments is replaced by the
conditional-expectation completion of :mod:`k4bb.expectation`, so each
routine returns a concrete partition together with the bound it meets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import BoundViolation, PreconditionError
from .expectation import derandomized_fill, fill_expectation
from .graph import (
    Bipartition,
    Graph,
    TriPartition,
    blowup,
    class_edges,
    is_k4_free,
    maximal_disjoint_triangles,
    min_degree,
    vertex_set,
)

METHODS = (
    "turan",
    "tripartite",
    "neighborhoods",
    "convenient-greedy",
    "two-ind",
    "blowup-reduce",
    "nice",
    "local-search",
)


@dataclass(frozen=True)
class PartitionCertificate:
    partition: Bipartition
    achieved: int
    claimed_bound: Fraction
    method: str
    details: dict = field(default_factory=dict, compare=False)

    @classmethod
    def make(cls, g: Graph, partition: Bipartition, bound, method: str, check: bool = True, **details):
        if method not in METHODS:
            raise ValueError(f"unknown method tag {method!r}")
        partition.validate(g.n)
        if not partition.is_balanced:
            raise BoundViolation(f"{method} produced an unbalanced partition")
        achieved = class_edges(g, partition)
        bound = Fraction(bound)
        if check and achieved > bound:
            raise BoundViolation(f"{method}: {achieved} class-edges exceeds the bound {bound}")
        return cls(partition, achieved, bound, method, dict(details, bound_checked=check))


def _require_even(n: int, what: str) -> None:
    if n % 2:
        raise PreconditionError(f"{what} needs an even number of vertices, got n={n}")


def _require_independent(g: Graph, s: Sequence[int], name: str) -> None:
    if g.count_edges(s):
        raise PreconditionError(f"{name} is not independent")


def _require_k4_free(g: Graph) -> None:
    if not is_k4_free(g):
        raise PreconditionError("graph contains a K4")


# --------------------------------------------------------------------------
# simple cases


def turan_partition(g: Graph, ind: Iterable[int]) -> PartitionCertificate:
    """n/2 vertices of a large independent set against the rest (at most n^2/12 class-edges)."""
    n = g.n
    _require_even(n, "turan_partition")
    ind = vertex_set(ind, n)
    if 2 * len(ind) < n:
        raise PreconditionError(f"independent set has {len(ind)} < n/2 vertices")
    _require_independent(g, ind, "ind")
    _require_k4_free(g)
    side_a = ind[: n // 2]
    taken = set(side_a)
    p = Bipartition.of(side_a, [v for v in range(n) if v not in taken])
    return PartitionCertificate.make(g, p, Fraction(n * n, 12), "turan")


def tripartite_partition(g: Graph, tp: TriPartition) -> PartitionCertificate:
    """Balanced partition of a tripartite graph with at most n^2/9 class-edges.

    One part donates vertices to top up the other two to n/2; the donor with
    the smallest exact expectation is used and the donation derandomised.
    """
    n = g.n
    tp.validate(n)
    for i, p in enumerate(tp.parts):
        if g.count_edges(p):
            raise PreconditionError(f"part {i} is not independent")
    _require_even(n, "tripartite_partition")
    for p in tp.parts:
        if 2 * len(p) >= n:
            cert = turan_partition(g, p)
            return PartitionCertificate.make(g, cert.partition, Fraction(n * n, 9), "turan", route="large-part")
    expectations = []
    for d in range(3):
        i, j = [k for k in range(3) if k != d]
        expectations.append(fill_expectation(g, tp.parts[i], tp.parts[j], tp.parts[d], n // 2))
    donor = min(range(3), key=lambda d: (expectations[d], d))
    i, j = [k for k in range(3) if k != donor]
    p, target = derandomized_fill(g, tp.parts[i], tp.parts[j], tp.parts[donor], n // 2)
    return PartitionCertificate.make(
        g, p, Fraction(n * n, 9), "tripartite", donor=donor, expectations=expectations, target=target
    )


def tripartite_closed_form(sizes: Sequence[int]) -> Fraction:
    """n^2/9 - (2/3) n^2 sum (x/n - 1/3)^2 for part sizes x."""
    n = sum(sizes)
    return Fraction(n * n, 9) - Fraction(2, 3) * n * n * sum(
        (Fraction(x, n) - Fraction(1, 3)) ** 2 for x in sizes
    )


# --------------------------------------------------------------------------
# two independent sets


@dataclass(frozen=True)
class ConvenientInstance:
    graph: Graph
    i1: tuple[int, ...]
    i2: tuple[int, ...]

    @classmethod
    def create(cls, g: Graph, i1: Iterable[int], i2: Iterable[int]) -> "ConvenientInstance":
        inst = cls(g, vertex_set(i1, g.n), vertex_set(i2, g.n))
        inst.validate()
        return inst

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def c1(self) -> int:
        return self.n // 2 - len(self.i2)

    @property
    def c2(self) -> int:
        return self.n // 6

    @property
    def r(self) -> tuple[int, ...]:
        used = set(self.i1) | set(self.i2)
        return tuple(v for v in range(self.n) if v not in used)

    def validate(self) -> None:
        g, n = self.graph, self.n
        if n % 6:
            raise PreconditionError(f"convenient instances need 6 | n, got n={n}")
        if set(self.i1) & set(self.i2):
            raise PreconditionError("I1 and I2 intersect")
        _require_independent(g, self.i1, "I1")
        _require_independent(g, self.i2, "I2")
        if 3 * (len(self.i1) + len(self.i2)) != 2 * n:
            raise PreconditionError(
                f"|I1| + |I2| = {len(self.i1) + len(self.i2)} must equal 2n/3 = {2 * n // 3}"
            )
        if len(self.i2) < len(self.i1):
            raise PreconditionError("|I2| must be at least |I1|")
        _require_k4_free(g)

    def with_graph(self, g: Graph) -> "ConvenientInstance":
        return ConvenientInstance(g, self.i1, self.i2)


def _common(g: Graph, u: int, v: int) -> np.ndarray:
    a = g.adjacency
    return a[u] & a[v]


def neighborhoods_shortcut(inst: ConvenientInstance, u: int, v: int) -> PartitionCertificate | None:
    """Partition I2 + (c1 vertices of N(u,v) & I1) against the rest, when both thresholds fail."""
    g, n = inst.graph, inst.n
    r = set(inst.r)
    if u not in r or v not in r or not g.has_edge(u, v):
        raise PreconditionError(f"({u}, {v}) is not an edge inside R")
    if inst.c1 < 0:
        raise PreconditionError("|I2| > n/2: the shortcut needs c1 >= 0")
    common = _common(g, u, v)
    x1 = [x for x in inst.i1 if common[x]]
    x2 = [x for x in inst.i2 if common[x]]
    if len(x1) <= inst.c1 or len(x2) <= inst.c2:
        return None
    side_a = set(inst.i2) | set(x1[: inst.c1])
    p = Bipartition.of(side_a, [w for w in range(n) if w not in side_a])
    bound = Fraction(n * n, 9) - Fraction(len(inst.i2) * 3 - n, 3) ** 2
    return PartitionCertificate.make(g, p, bound, "neighborhoods", edge=(u, v))


def greedy_bound(inst: ConvenientInstance) -> Fraction:
    n = inst.n
    return Fraction(n * n, 9) - Fraction(3, 4) * Fraction(3 * len(inst.i2) - n, 3) ** 2


def _lowest_edge(g: Graph, within: Sequence[int]):
    if len(within) < 2:
        return None
    w = np.asarray(within, dtype=np.int64)
    sub = np.triu(g.adjacency[np.ix_(w, w)], 1)
    hits = np.argwhere(sub)
    if hits.size == 0:
        return None
    i, j = hits[0]
    return int(w[i]), int(w[j])


def _greedy(inst: ConvenientInstance):
    """The six-step greedy.  Returns ("partition", Bipartition, exit step) or ("shortcut", (u, v))."""
    g, n = inst.graph, inst.n
    half = n // 2
    if len(inst.i2) > half:
        raise PreconditionError("the greedy needs |I2| <= n/2 (use the Turan partition instead)")
    rset = list(inst.r)
    if len(maximal_disjoint_triangles(g, rset)):
        raise PreconditionError("G[R] is not triangle-free")
    a_side = set(inst.i1)
    b_side = set(inst.i2)
    rest = sorted(rset)
    adj = g.adjacency
    i1 = np.zeros(n, dtype=bool)
    i1[list(inst.i1)] = True
    i2 = np.zeros(n, dtype=bool)
    i2[list(inst.i2)] = True
    while True:
        edge = _lowest_edge(g, rest)
        if edge is None:
            p, _ = derandomized_fill(g, sorted(a_side), sorted(b_side), rest, half)
            return "partition", p, 1
        if len(a_side) == half:
            return "partition", Bipartition.of(a_side, b_side | set(rest)), 2
        if len(b_side) == half:
            return "partition", Bipartition.of(a_side | set(rest), b_side), 3
        u, v = edge
        common = adj[u] & adj[v]
        if int(np.count_nonzero(common & i1)) <= inst.c1:
            side, base = a_side, i1
        elif int(np.count_nonzero(common & i2)) <= inst.c2:
            side, base = b_side, i2
        else:
            return "shortcut", (u, v)
        if len(side) == half - 1:
            # only one slot left: take the endpoint with fewer neighbours in
            # the base independent set, so the per-vertex share of the
            # threshold bound still holds
            du = int(np.count_nonzero(adj[u] & base))
            dv = int(np.count_nonzero(adj[v] & base))
            moved = (u,) if du <= dv else (v,)
        else:
            moved = (u, v)
        side.update(moved)
        rest = [x for x in rest if x not in moved]


def convenient_greedy(inst: ConvenientInstance) -> PartitionCertificate:
    out = _greedy(inst)
    if out[0] == "shortcut":
        cert = neighborhoods_shortcut(inst, *out[1])
        if cert is None:
            raise AssertionError("greedy stalled but the shortcut does not apply")
        return cert
    _, p, step = out
    return PartitionCertificate.make(inst.graph, p, greedy_bound(inst), "convenient-greedy", exit_step=step)


def cl_transform(inst: ConvenientInstance) -> tuple[Graph, tuple[int, ...]]:
    """Detach a maximal disjoint triangle packing T of R and wire T to all of I1 + I2."""
    g = inst.graph
    t = maximal_disjoint_triangles(g, inst.r)
    if not t:
        return g, t
    adj = g.adjacency.copy()
    ts = list(t)
    adj[ts, :] = False
    adj[:, ts] = False
    ind = list(inst.i1) + list(inst.i2)
    adj[np.ix_(ts, ind)] = True
    adj[np.ix_(ind, ts)] = True
    return Graph.from_adjacency(adj), t


def pay_for_triangles(
    inst: ConvenientInstance, t: Iterable[int], p: Bipartition, cl_graph: Graph | None = None
) -> Bipartition:
    """Redistribute T inside a partition of cl(G) to get a partition of G.

    Keeps |T & A| vertices of T on side A; which ones is decided by
    conditional expectations of the class-edge count in G.
    """
    g, n = inst.graph, inst.n
    p.validate(n)
    if not p.is_balanced:
        raise PreconditionError("partition is not balanced")
    a, b = set(p.side_a), set(p.side_b)
    if not set(inst.i1) <= a or not set(inst.i2) <= b:
        raise PreconditionError("partition must have I1 inside side_a and I2 inside side_b")
    t = vertex_set(t, n)
    if not t:
        return p
    ts = set(t)
    out, _ = derandomized_fill(g, sorted(a - ts), sorted(b - ts), t, len(p.side_a))
    if cl_graph is None:
        cl_graph, _ = cl_transform(inst)
    limit = class_edges(cl_graph, p) + Fraction(3, 4) * Fraction(3 * len(inst.i2) - n, 3) ** 2
    got = class_edges(g, out)
    if got > limit:
        raise BoundViolation(f"triangle redistribution gave {got} > {limit}")
    return out


def trim_independent_sets(n: int, i1: Sequence[int], i2: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Shrink to total exactly 2n/3 with |I2| >= |I1| (labels swapped if needed).

    Removes the highest-index vertex of the currently larger set; on ties the
    vertex comes out of I1.
    """
    s1, s2 = sorted(i1), sorted(i2)
    if len(s1) > len(s2):
        s1, s2 = s2, s1
    goal = 2 * n // 3
    while len(s1) + len(s2) > goal:
        if len(s2) > len(s1):
            s2.pop()
        else:
            s1.pop()
    return tuple(s1), tuple(s2)


def _check_two_ind(g: Graph, i1, i2):
    n = g.n
    i1, i2 = vertex_set(i1, n), vertex_set(i2, n)
    if not is_k4_free(g):
        raise PreconditionError("hypothesis failed: graph contains a K4")
    if set(i1) & set(i2):
        raise PreconditionError("hypothesis failed: I1 and I2 are not disjoint")
    _require_independent(g, i1, "hypothesis failed: I1")
    _require_independent(g, i2, "hypothesis failed: I2")
    if 3 * (len(i1) + len(i2)) < 2 * n:
        raise PreconditionError(f"hypothesis failed: |I1| + |I2| = {len(i1) + len(i2)} < 2n/3")
    return i1, i2


def two_ind_partition(g: Graph, i1: Iterable[int], i2: Iterable[int]) -> PartitionCertificate:
    """Balanced partition with at most n^2/9 class-edges given two disjoint
    independent sets covering at least 2n/3 vertices."""
    n = g.n
    i1, i2 = _check_two_ind(g, i1, i2)
    bound = Fraction(n * n, 9)
    if n == 0:
        return PartitionCertificate.make(g, Bipartition((), ()), bound, "two-ind")
    if n % 6:
        # 6-blowup = 3-blowup of the 2-blowup under the copy labelling v*k + j
        h = blowup(g, 6)
        copies = lambda s: [6 * v + j for v in s for j in range(6)]
        big = two_ind_partition(h, copies(i1), copies(i2))
        mid = blowup_reduce(blowup(g, 2), 3, big.partition)
        p = blowup_reduce(g, 2, mid)
        return PartitionCertificate.make(g, p, bound, "two-ind", route="blowup", blowup_achieved=big.achieved)
    s1, s2 = trim_independent_sets(n, i1, i2)
    if 2 * len(s2) > n:
        cert = turan_partition(g, s2)
        return PartitionCertificate.make(g, cert.partition, bound, "two-ind", route="turan")
    inst = ConvenientInstance(g, s1, s2)
    clg, t = cl_transform(inst)
    out = _greedy(inst.with_graph(clg))
    if out[0] == "shortcut":
        # the chosen edge avoids T, so its neighbourhoods in I1, I2 are the
        # same in G and cl(G); build the shortcut directly on G
        cert = neighborhoods_shortcut(inst, *out[1])
        if cert is None:
            raise AssertionError("shortcut edge does not qualify in the original graph")
        return PartitionCertificate.make(g, cert.partition, bound, "two-ind", route="neighborhoods")
    _, p_cl, step = out
    cl_count = class_edges(clg, p_cl)
    if cl_count > greedy_bound(inst):
        raise BoundViolation(f"greedy on cl(G) gave {cl_count} > {greedy_bound(inst)}")
    p = pay_for_triangles(inst, t, p_cl, clg)
    return PartitionCertificate.make(
        g, p, bound, "two-ind", route="greedy", exit_step=step, triangles=len(t) // 3, cl_count=cl_count
    )


# --------------------------------------------------------------------------
# blowups and small degrees


def _copy_counts(n: int, k: int, p: Bipartition) -> np.ndarray:
    counts = np.zeros(n, dtype=np.int64)
    for x in p.side_a:
        counts[x // k] += 1
    return counts


def _blowup_cost(adj: np.ndarray, counts: np.ndarray, k: int) -> int:
    other = k - counts
    return int(counts @ adj @ counts + other @ adj @ other) // 2


def blowup_reduce(g: Graph, k: int, p: Bipartition, trace: list | None = None) -> Bipartition:
    """Turn a balanced partition of blowup(g, k) into a balanced partition of g.

    While two vertices have copies on both sides, move to the better of the
    consolidations that put one of them entirely on one side (the class-edge
    count is concave along such moves, so one of them never increases it).
    A last split vertex, if any, is placed on whichever side is better.
    """
    n = g.n
    if k < 1:
        raise PreconditionError("k must be positive")
    p.validate(n * k)
    if not p.is_balanced:
        raise PreconditionError("partition of the blowup is not balanced")
    adj = g.adjacency.astype(np.int64)
    counts = _copy_counts(n, k, p)
    cur = _blowup_cost(adj, counts, k)
    while True:
        split = [v for v in range(n) if 0 < counts[v] < k]
        if len(split) < 2:
            break
        u, v = split[0], split[1]
        s = int(counts[u] + counts[v])
        best = None
        for x, y in ((u, v), (v, u)):
            for full in (k, 0):
                rest = s - full
                if 0 <= rest <= k:
                    trial = counts.copy()
                    trial[x], trial[y] = full, rest
                    c = _blowup_cost(adj, trial, k)
                    if best is None or c < best[0]:
                        best = (c, trial)
        if best[0] > cur:
            raise BoundViolation("no consolidation step keeps the class-edge count")
        if trace is not None:
            trace.append((cur, best[0]))
        cur, counts = best
    in_a = [bool(c == k) for c in counts]
    split = [v for v in range(n) if 0 < counts[v] < k]
    if split:
        v = split[0]
        options = []
        for side in (True, False):
            trial = list(in_a)
            trial[v] = side
            q = Bipartition.from_mask(trial)
            options.append((class_edges(g, q), not side, q))
        result = min(options, key=lambda o: (o[0], o[1]))[2]
    else:
        result = Bipartition.from_mask(in_a)
    if not result.is_balanced:
        raise AssertionError("reduced partition is not balanced")
    return result


@dataclass(frozen=True)
class LowDegreeStep:
    """A vertex of degree below (4n-1)/9 and the recipe to reinsert it."""

    graph: Graph
    vertex: int
    degree: int

    @property
    def others(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.graph.n) if v != self.vertex)

    def reduced_graph(self) -> Graph:
        return self.graph.induced(self.others)

    def complete(self, p: Bipartition) -> Bipartition:
        """From a balanced partition of blowup(g - v, 2) to one of g.

        The two copies of v go to opposite sides (better orientation kept),
        then the 2-blowup is reduced.
        """
        g = self.graph
        others = self.others
        p.validate(2 * len(others))
        lift = lambda side: [2 * others[x // 2] + x % 2 for x in side]
        a, b = lift(p.side_a), lift(p.side_b)
        h = blowup(g, 2)
        v0, v1 = 2 * self.vertex, 2 * self.vertex + 1
        first = Bipartition.of(a + [v0], b + [v1])
        second = Bipartition.of(a + [v1], b + [v0])
        q = min((first, second), key=lambda x: class_edges(h, x))
        return blowup_reduce(g, 2, q)


def low_degree_step(g: Graph) -> LowDegreeStep | None:
    n = g.n
    if n == 0:
        return None
    degs = g.degrees
    d = min_degree(g)
    if 9 * d < 4 * n - 1:
        return LowDegreeStep(g, int(np.argmin(degs)), d)
    return None


# --------------------------------------------------------------------------
# local search and the automatic driver


def local_search_improve(g: Graph, p: Bipartition) -> Bipartition:
    """First-improvement hill climbing over single swaps between the sides."""
    n = g.n
    p.validate(n)
    if not p.is_balanced:
        raise PreconditionError("partition is not balanced")
    adj = g.adjacency.astype(np.int64)
    deg = adj.sum(axis=1)
    in_a = p.in_a(n)
    while True:
        d_a = adj @ in_a.astype(np.int64)
        d_b = deg - d_a
        gain = d_b - d_a  # change when a vertex of A moves to B (ignoring the partner)
        a_idx = np.flatnonzero(in_a)
        b_idx = np.flatnonzero(~in_a)
        if a_idx.size == 0 or b_idx.size == 0:
            break
        delta = gain[a_idx][:, None] - gain[b_idx][None, :] - 2 * adj[np.ix_(a_idx, b_idx)]
        hits = np.argwhere(delta < 0)
        if hits.size == 0:
            break
        i, j = hits[0]
        in_a[a_idx[i]] = False
        in_a[b_idx[j]] = True
    return Bipartition.from_mask(in_a)


def three_coloring(g: Graph, budget: int = 200_000) -> TriPartition | None:
    """Proper 3-colouring by backtracking in ascending vertex order, or None
    (also None when the search budget runs out)."""
    n = g.n
    nbrs = [g.neighbors(v) for v in range(n)]
    color = [-1] * n
    steps = [0]

    def go(v: int) -> bool | None:
        if v == n:
            return True
        steps[0] += 1
        if steps[0] > budget:
            return None
        used = {color[u] for u in nbrs[v] if u < v}
        for c in range(3):
            if c not in used:
                color[v] = c
                r = go(v + 1)
                if r is None or r:
                    return r
        color[v] = -1
        return False

    import sys

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, n + 100))
    try:
        ok = go(0)
    finally:
        sys.setrecursionlimit(limit)
    if not ok:
        return None
    return TriPartition.of(*[[v for v in range(n) if color[v] == c] for c in range(3)])


def _greedy_independent(g: Graph, candidates: Sequence[int]) -> tuple[int, ...]:
    """Min-degree greedy independent set inside candidates."""
    adj = g.adjacency
    cand = set(candidates)
    out = []
    while cand:
        sub = sorted(cand)
        degs = adj[np.ix_(sub, sub)].sum(axis=1)
        v = sub[int(np.argmin(degs))]
        out.append(v)
        cand -= {v} | set(np.flatnonzero(adj[v]).tolist())
    return tuple(sorted(out))


def independent_pair(g: Graph, mis_cap: int = 30) -> tuple[tuple[int, ...], tuple[int, ...]]:
    from .oracle import max_independent_set

    n = g.n
    if n <= mis_cap:
        i1 = max_independent_set(g, mis_cap)
        rest = [v for v in range(n) if v not in set(i1)]
        sub = max_independent_set(g.induced(rest), mis_cap)
        return i1, tuple(rest[x] for x in sub)
    i1 = _greedy_independent(g, range(n))
    rest = [v for v in range(n) if v not in set(i1)]
    return i1, _greedy_independent(g, rest)


def partition_auto(g: Graph, eps: Fraction = Fraction(1, 10000)) -> tuple[PartitionCertificate, list[dict]]:
    """Try every applicable construction, polish each by local search, return the best.

    The second value lists what was tried (method, achieved, or why skipped).
    """
    from .nice import nice_partition, niceness_report

    n = g.n
    tried: list[dict] = []
    found: list[PartitionCertificate] = []
    start = Bipartition.of(range(n // 2), range(n // 2, n))
    k4_free = is_k4_free(g)

    def attempt(name, fn):
        try:
            cert = fn()
        except PreconditionError as exc:
            tried.append({"method": name, "skipped": str(exc)})
            return
        found.append(cert)
        tried.append({"method": cert.method, "achieved": cert.achieved})

    if k4_free and n % 2 == 0:
        col = three_coloring(g)
        if col is not None:
            attempt("tripartite", lambda: tripartite_partition(g, col))
        else:
            tried.append({"method": "tripartite", "skipped": "no 3-colouring found"})
        i1, i2 = independent_pair(g)
        attempt("two-ind", lambda: two_ind_partition(g, i1, i2))
        if n >= 6 and niceness_report(g, eps).verdict:
            attempt("nice", lambda: nice_partition(g, eps))
        else:
            tried.append({"method": "nice", "skipped": "graph is not nice"})
    elif k4_free:
        i1, i2 = independent_pair(g)
        attempt("two-ind", lambda: two_ind_partition(g, i1, i2))
    else:
        tried.append({"method": "all", "skipped": "graph contains a K4; only local search applies"})
    polished = []
    for cert in found:
        q = local_search_improve(g, cert.partition)
        polished.append(
            PartitionCertificate.make(g, q, cert.claimed_bound, cert.method, polished=True, **{
                k: v for k, v in cert.details.items() if k in ("route", "donor")
            })
        )
    ls = local_search_improve(g, start)
    polished.append(PartitionCertificate.make(g, ls, class_edges(g, start), "local-search"))
    best = min(polished, key=lambda c: c.achieved)
    return best, tried
