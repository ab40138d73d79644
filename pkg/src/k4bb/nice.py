"""Niceness diagnostics, spotty partitions and the partition for nice graphs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, isqrt

import numpy as np

from .errors import AssignmentFailure, NoTriangleError, PreconditionError
from .expectation import derandomized_fill, fill_expectation
from .graph import Graph, codegree_matrix, is_k4_free, min_degree, vertex_set
from .partition import PartitionCertificate
from .rng import SplitMix64

THEOREM_EPS = Fraction(1, 10000)


@dataclass(frozen=True)
class NicenessReport:
    n: int
    e: int
    t: int
    codegree_deficiency_sum: int
    min_degree: int
    lhs1: Fraction
    lhs2: Fraction
    lhs3: Fraction
    min_degree_ok: bool
    eps: Fraction

    @property
    def holds(self) -> tuple[bool, bool, bool, bool]:
        return (self.lhs1 < self.eps, self.lhs2 < self.eps, self.lhs3 < self.eps, self.min_degree_ok)

    @property
    def verdict(self) -> bool:
        return all(self.holds)

    def at(self, eps) -> "NicenessReport":
        return NicenessReport(**{**self.__dict__, "eps": Fraction(eps)})


def _edge_codegrees(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    c = codegree_matrix(g)
    us, vs = np.nonzero(np.triu(g.adjacency, 1))
    return c, c[us, vs]


def niceness_report(g: Graph, eps) -> NicenessReport:
    n = g.n
    if n == 0:
        raise PreconditionError("niceness is undefined for the empty graph")
    eps = Fraction(eps)
    _, ce = _edge_codegrees(g)
    e = g.edge_count
    # every triangle is counted once per edge; sum over triangles of the three
    # codegrees equals the sum over edges of codegree^2
    t = int(ce.sum()) // 3
    deficiency = n * t - int((ce * ce).sum())
    d = Fraction(2 * e, n * n)
    lhs1 = d * (Fraction(2, 3) - d)
    lhs2 = d * (Fraction(2, 9) - Fraction(6 * t, n ** 3))
    lhs3 = Fraction(6 * deficiency, n ** 4)
    delta = min_degree(g)
    return NicenessReport(n, e, t, deficiency, delta, lhs1, lhs2, lhs3, 9 * delta >= 4 * n - 1, eps)


def triangle_deficiencies(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """(triangles as an (t, 3) array in lexicographic order, n - sum of the three codegrees)."""
    from . import kernels

    tri = kernels.triangle_array(g.adjacency)
    if tri.shape[0] == 0:
        return tri, np.zeros(0, dtype=np.int64)
    tri = tri[np.lexsort((tri[:, 2], tri[:, 1], tri[:, 0]))]
    c = codegree_matrix(g)
    u, v, w = tri[:, 0], tri[:, 1], tri[:, 2]
    return tri, g.n - c[u, v] - c[u, w] - c[v, w]


def witness_triangle(g: Graph) -> tuple[tuple[int, int, int], int]:
    """Triangle of minimum codegree deficiency (lexicographically first on ties)."""
    tri, dfc = triangle_deficiencies(g)
    if tri.shape[0] == 0:
        raise NoTriangleError("graph has no triangle")
    i = int(np.argmin(dfc))
    return tuple(int(x) for x in tri[i]), int(dfc[i])


def three_independent_sets(g: Graph, tri) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """A1 = N(v,w), A2 = N(u,w), A3 = N(u,v) for the triangle (u, v, w)."""
    if len(set(tri)) != 3:
        raise PreconditionError("need three distinct vertices")
    u, v, w = sorted(int(x) for x in tri)
    if not (g.has_edge(u, v) and g.has_edge(u, w) and g.has_edge(v, w)):
        raise PreconditionError(f"{(u, v, w)} is not a triangle")
    if not is_k4_free(g):
        raise PreconditionError("graph contains a K4")
    a = g.adjacency
    sets = tuple(tuple(int(x) for x in np.flatnonzero(a[p] & a[q])) for p, q in ((v, w), (u, w), (u, v)))
    for i, s in enumerate(sets):
        if g.count_edges(s):
            raise AssertionError(f"A{i + 1} is not independent in a K4-free graph")
    if len(set().union(*sets)) != sum(map(len, sets)):
        raise AssertionError("common neighbourhoods of a triangle overlap")
    return sets


@dataclass(frozen=True)
class SpottyPartition:
    base: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    s: tuple[int, ...]
    parts: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    eps: Fraction
    assignment: dict = field(default_factory=dict, compare=False)
    failed_hypotheses: tuple[str, ...] = ()


def size_hypotheses(n: int, eps: Fraction, sets) -> list[str]:
    failed = []
    total = sum(len(s) for s in sets)
    if total < n * (1 - 5 * eps):
        failed.append(f"|A1|+|A2|+|A3| = {total} < n(1-5eps)")
    for i, s in enumerate(sets):
        if not n * (Fraction(1, 3) - 5 * eps) < len(s) < n * (Fraction(1, 3) + 5 * eps):
            failed.append(f"|A{i + 1}| = {len(s)} outside (n(1/3-5eps), n(1/3+5eps))")
    return failed


def spotty_partition(g: Graph, eps, sets) -> SpottyPartition:
    """Attach every leftover vertex to a base set it sends fewer than 96 eps n edges to.

    Independence and disjointness of the base sets are required; the size
    and minimum-degree hypotheses are recorded in ``failed_hypotheses`` but
    not enforced, the per-vertex condition being checked directly.
    """
    n = g.n
    eps = Fraction(eps)
    base = tuple(vertex_set(s, n) for s in sets)
    if len(base) != 3:
        raise PreconditionError("need exactly three sets")
    seen: set[int] = set()
    for i, s in enumerate(base):
        if seen & set(s):
            raise PreconditionError("base sets are not disjoint")
        seen |= set(s)
        if g.count_edges(s):
            raise PreconditionError(f"A{i + 1} is not independent")
    failed = size_hypotheses(n, eps, base)
    if 9 * min_degree(g) < 4 * n - 1:
        failed.append("minimum degree below (4n-1)/9")
    limit = 96 * eps * n
    adj = g.adjacency
    member = np.zeros((3, n), dtype=bool)
    for i, s in enumerate(base):
        member[i, list(s)] = True
    counts = (adj.astype(np.int64) @ member.T.astype(np.int64))
    parts = [list(s) for s in base]
    rest = tuple(v for v in range(n) if v not in seen)
    assignment = {}
    for v in rest:
        c = tuple(int(x) for x in counts[v])
        i = min(range(3), key=lambda k: (c[k], k))
        if not c[i] < limit:
            raise AssignmentFailure(v, c, limit)
        parts[i].append(v)
        assignment[v] = i
    return SpottyPartition(
        base, rest, tuple(tuple(sorted(p)) for p in parts), eps, assignment, tuple(failed)
    )


def spotty_from_witness(g: Graph, eps) -> SpottyPartition:
    tri, _ = witness_triangle(g)
    return spotty_partition(g, eps, three_independent_sets(g, tri))


def nice_partition(g: Graph, eps) -> PartitionCertificate:
    """Balanced partition of an eps-nice graph through its spotty partition.

    Each class in turn donates vertices to bring the other two to n/2; the
    donor with the smallest exact expectation is derandomised.  The n^2/9
    bound is asserted when the graph is nice for some eps below 1e-4.
    """
    n = g.n
    eps = Fraction(eps)
    if n % 2 or n < 6:
        raise PreconditionError(f"nice_partition needs even n >= 6, got n={n}")
    report = niceness_report(g, eps)
    if not report.verdict:
        raise PreconditionError(f"graph is not {eps}-nice: {report.holds}")
    if not is_k4_free(g):
        raise PreconditionError("graph contains a K4")
    sp = spotty_from_witness(g, eps)
    half = n // 2
    for i, p in enumerate(sp.parts):
        if len(p) > half:
            raise PreconditionError(f"spotty class A{i + 1}' has {len(p)} > n/2 vertices")
    expectations = []
    for d in range(3):
        i, j = [k for k in range(3) if k != d]
        expectations.append(fill_expectation(g, sp.parts[i], sp.parts[j], sp.parts[d], half))
    donor = min(range(3), key=lambda d: (expectations[d], d))
    i, j = [k for k in range(3) if k != donor]
    p, target = derandomized_fill(g, sp.parts[i], sp.parts[j], sp.parts[donor], half)
    theorem = report.at(THEOREM_EPS).verdict
    return PartitionCertificate.make(
        g, p, Fraction(n * n, 9), "nice", check=theorem, donor=donor, expectations=expectations, target=target
    )


# --------------------------------------------------------------------------
# lemma audits


def _ceil_sqrt_scaled(eps: Fraction, n: int) -> int:
    """Smallest integer s with s^2 >= 3 eps n^2."""
    x = 3 * eps * n * n
    s = isqrt(x.numerator // x.denominator)
    while s * s < x:
        s += 1
    while s > 0 and (s - 1) ** 2 >= x:
        s -= 1
    return s


@dataclass
class LemmaAudit:
    eps: Fraction
    missing_edges_checked: int = 0
    missing_edges_violations: list = field(default_factory=list)
    dense_pairs_threshold: int = 0
    dense_pairs_checked: int = 0
    dense_pairs_exhaustive: bool = True
    dense_pairs_violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.missing_edges_violations and not self.dense_pairs_violations


def missing_edges_slack(g: Graph, eps: Fraction, parts, u: int, v: int) -> tuple[int, Fraction, float]:
    """For an edge uv inside one spotty class: (lhs, rational part of rhs, rhs - lhs as float).

    rhs = 2(|Aj'| + |Ak'|) - n(1/3 - 5 eps - sqrt(3 eps)).
    """
    n = g.n
    i = next(k for k in range(3) if u in set(parts[k]))
    others = [x for k in range(3) if k != i for x in parts[k]]
    adj = g.adjacency
    lhs = int(adj[u, others].sum() + adj[v, others].sum())
    rational = 2 * len(others) - n * (Fraction(1, 3) - 5 * eps)
    slack = float(rational - lhs) + n * float(3 * eps) ** 0.5
    return lhs, rational, slack


def _missing_edges_ok(lhs: int, rational: Fraction, eps: Fraction, n: int) -> bool:
    # lhs <= rational + n sqrt(3 eps)  <=>  x <= 0 or x^2 <= 3 eps n^2, x = lhs - rational
    x = lhs - rational
    return x <= 0 or x * x <= 3 * eps * n * n


def lemma_audit(
    g: Graph, eps, sp: SpottyPartition, seed: int = 0, exhaustive_limit: int = 20000, samples: int = 200
) -> LemmaAudit:
    """Check the missing-edges inequality on every within-class edge and look
    for edgeless subset pairs at the dense-pairs threshold.  Report only."""
    n = g.n
    eps = Fraction(eps)
    audit = LemmaAudit(eps)
    adj = g.adjacency
    for k, part in enumerate(sp.parts):
        p = list(part)
        sub = np.triu(adj[np.ix_(p, p)], 1)
        for a, b in np.argwhere(sub):
            u, v = p[a], p[b]
            lhs, rational, slack = missing_edges_slack(g, eps, sp.parts, u, v)
            audit.missing_edges_checked += 1
            if not _missing_edges_ok(lhs, rational, eps, n):
                audit.missing_edges_violations.append(
                    {"edge": (u, v), "class": k, "lhs": lhs, "rhs_rational_part": rational, "slack": slack}
                )
    s = _ceil_sqrt_scaled(eps, n)
    s = max(s, 1)
    audit.dense_pairs_threshold = s
    rng = SplitMix64(seed)
    for i, j in itertools.combinations(range(3), 2):
        x, y = list(sp.base[i]), list(sp.base[j])
        if len(x) < s or len(y) < s:
            continue
        if comb(len(y), s) < comb(len(x), s):
            x, y = y, x
        cross = adj[np.ix_(x, y)]

        def probe(chosen):
            free = ~cross[list(chosen)].any(axis=0)
            audit.dense_pairs_checked += 1
            if int(free.sum()) >= s:
                audit.dense_pairs_violations.append(
                    {"classes": (i, j), "b1": tuple(x[c] for c in chosen),
                     "b2": tuple(y[c] for c in np.flatnonzero(free)[:s])}
                )
                return True
            return False

        if comb(len(x), s) <= exhaustive_limit:
            for chosen in itertools.combinations(range(len(x)), s):
                if probe(chosen):
                    break
            continue
        audit.dense_pairs_exhaustive = False
        # sparse corners first: vertices with the fewest neighbours across,
        # then greedy growth from every seed, then random subsets
        order = np.argsort(cross.sum(axis=1), kind="stable")
        if probe(tuple(order[:s])):
            continue
        hit = False
        for seed_v in range(len(x)):
            chosen = [seed_v]
            free = ~cross[seed_v]
            while len(chosen) < s:
                cand = [c for c in range(len(x)) if c not in chosen]
                c = max(cand, key=lambda c: (int((free & ~cross[c]).sum()), -c))
                chosen.append(c)
                free &= ~cross[c]
            if probe(tuple(chosen)):
                hit = True
                break
        if hit:
            continue
        for _ in range(samples):
            if probe(tuple(sorted(rng.sample(range(len(x)), s)))):
                break
    return audit
