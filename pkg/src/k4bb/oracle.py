"""Brute-force ground truth for small graphs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .errors import PreconditionError, SizeLimitError
from .graph import Bipartition, Graph, TriPartition, class_edges, triangles

BB_CAP = 20
MIS_CAP = 30
ENUM_CAP = 7


@dataclass(frozen=True)
class OracleResult:
    optimum: int
    witness: Bipartition


def bb_exact(g: Graph, cap: int = BB_CAP) -> OracleResult:
    """Minimum class-edges over all balanced bipartitions.

    The witness has the lexicographically smallest side_a among minimisers,
    where side_a has floor(n/2) vertices (and contains 0 when n is even).
    """
    n = g.n
    if n > cap:
        raise SizeLimitError(f"bb_exact: n={n} exceeds cap {cap}")
    if n > 62:
        raise SizeLimitError("bb_exact works on 64-bit vertex masks")
    rows = np.array(g.row_masks(), dtype=np.int64) if n else np.zeros(0, dtype=np.int64)
    best, mask = kernels.bb_rows(rows, n)
    witness = Bipartition.from_mask([bool(mask >> v & 1) for v in range(n)])
    if class_edges(g, witness) != best:
        raise AssertionError("oracle witness does not reproduce its optimum")
    return OracleResult(int(best), witness)


def max_independent_set(g: Graph, cap: int = MIS_CAP) -> tuple[int, ...]:
    """Maximum independent set; lexicographically smallest among the maximum ones.

    Include-first depth-first search in ascending vertex order with a greedy
    clique-cover bound.  A set is recorded only when it is strictly larger than
    the incumbent, so the first maximum set reached is the lexicographically
    smallest one.
    """
    n = g.n
    if n > cap:
        raise SizeLimitError(f"max_independent_set: n={n} exceeds cap {cap}")
    nbr = g.row_masks()
    best = [0, 0]

    def clique_cover(cand: int) -> int:
        count = 0
        while cand:
            low = cand & -cand
            cand ^= low
            grow = cand & nbr[low.bit_length() - 1]
            while grow:
                w = grow & -grow
                cand ^= w
                grow &= nbr[w.bit_length() - 1]
                grow &= ~w
            count += 1
        return count

    def dfs(cur: int, size: int, cand: int) -> None:
        if size > best[0]:
            best[0], best[1] = size, cur
        if not cand or size + bin(cand).count("1") <= best[0]:
            return
        if size + clique_cover(cand) <= best[0]:
            return
        low = cand & -cand
        v = low.bit_length() - 1
        dfs(cur | low, size + 1, cand & ~nbr[v] & ~low)
        dfs(cur, size, cand & ~low)

    dfs(0, 0, (1 << n) - 1)
    return tuple(v for v in range(n) if best[1] >> v & 1)


def k4_free_masks(n: int) -> np.ndarray:
    """Pair masks (see :mod:`k4bb.kernels`) of all labelled K4-free graphs on n vertices."""
    if n > ENUM_CAP:
        raise SizeLimitError(f"enumeration is limited to n <= {ENUM_CAP}")
    if n < 0:
        raise PreconditionError("n must be nonnegative")
    return kernels.k4free_masks(n)


def enumerate_k4_free(n: int, visitor: Callable[[Graph], object] | None = None) -> int:
    """Visit every labelled K4-free graph on n vertices once; return the count."""
    masks = k4_free_masks(n)
    if visitor is not None:
        for m in masks:
            visitor(Graph.from_pair_mask(int(m), n))
    return int(masks.shape[0])


def bb_sweep(n: int) -> tuple[np.ndarray, np.ndarray]:
    """(masks, bb values) for every labelled K4-free graph on n vertices."""
    masks = k4_free_masks(n)
    return masks, kernels.bb_masks(masks, n)


def check_bb_bound(n: int) -> dict:
    """Exhaustively compare bb against n^2/9 over all K4-free graphs on n vertices."""
    masks, bbs = bb_sweep(n)
    limit = n * n // 9
    bad = int(np.count_nonzero(bbs > limit))
    return {
        "n": n,
        "graphs": int(masks.shape[0]),
        "max_bb": int(bbs.max()) if bbs.size else 0,
        "bound": f"{n * n}/9",
        "violations": bad,
    }


def check_packing_bound(g: Graph, tp: TriPartition) -> bool:
    """e(G) <= a*c + b*c for a triangle-free graph tripartite w.r.t. tp (a <= b <= c)."""
    tp.validate(g.n)
    for p in tp.parts:
        if g.count_edges(p):
            raise PreconditionError("graph has an edge inside a part")
    if triangles(g):
        raise PreconditionError("graph is not triangle-free")
    a, b, c = sorted(tp.sizes)
    return g.edge_count <= a * c + b * c
