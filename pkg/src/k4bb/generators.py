"""Deterministic and seeded K4-free graph families.

Random families draw from :class:`k4bb.rng.SplitMix64` in a fixed order
(vertex pairs in ascending (u, v) order), so a GeneratorSpec always yields the same
graph.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import PreconditionError
from .graph import Graph, blowup, is_k4_free
from .partition import ConvenientInstance
from .rng import SplitMix64

FAMILIES = (
    "complete-tripartite",
    "turan",
    "complete-bipartite",
    "pentagon-blowup",
    "random-tripartite",
    "random-k4free-repair",
    "blowup-of",
    "planted-two-ind",
)


@dataclass(frozen=True)
class GeneratorSpec:
    """family plus parameters.

    sizes: part sizes (complete-tripartite, random-tripartite, complete-bipartite),
    (n,) for turan and random-k4free-repair, (k,) for pentagon-blowup and
    blowup-of, (n,) or (n, |I1|) for planted-two-ind.
    """

    family: str
    sizes: tuple[int, ...]
    p: Fraction = Fraction(1, 2)
    seed: int = 0
    base: Graph | None = None

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        object.__setattr__(self, "p", Fraction(self.p))
        self.validate()

    def validate(self) -> None:
        f, s = self.family, self.sizes
        if f not in FAMILIES:
            raise PreconditionError(f"unknown family {f!r}; known: {', '.join(FAMILIES)}")
        if any(x < 0 for x in s):
            raise PreconditionError("sizes must be nonnegative")
        if not 0 <= self.p <= 1:
            raise PreconditionError("edge probability must lie in [0, 1]")
        want = {
            "complete-tripartite": (3,),
            "random-tripartite": (3,),
            "complete-bipartite": (2,),
            "turan": (1,),
            "random-k4free-repair": (1,),
            "pentagon-blowup": (1,),
            "blowup-of": (1,),
            "planted-two-ind": (1, 2),
        }[f]
        if len(s) not in want:
            raise PreconditionError(f"{f} takes {' or '.join(map(str, want))} size parameter(s), got {len(s)}")
        if f in ("pentagon-blowup", "blowup-of") and s[0] < 1:
            raise PreconditionError("blowup factor must be at least 1")
        if f == "blowup-of" and self.base is None:
            raise PreconditionError("blowup-of needs a base graph")
        if f == "planted-two-ind":
            n = s[0]
            if n % 6 or n == 0:
                raise PreconditionError("planted-two-ind needs a positive n divisible by 6")
            s1 = s[1] if len(s) == 2 else n // 3
            if not 0 <= s1 <= n // 3:
                raise PreconditionError(f"|I1| must lie in [0, n/3], got {s1}")


def _complete_multipartite(sizes: Sequence[int]) -> Graph:
    label = np.repeat(np.arange(len(sizes)), sizes)
    adj = label[:, None] != label[None, :]
    return Graph.from_adjacency(adj)


def turan_sizes(n: int) -> tuple[int, int, int]:
    q, r = divmod(n, 3)
    return tuple(q + 1 if i < r else q for i in range(3))


def _random_multipartite(sizes: Sequence[int], p: Fraction, rng: SplitMix64) -> Graph:
    label = np.repeat(np.arange(len(sizes)), sizes)
    n = len(label)
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if label[u] != label[v] and rng.bernoulli(p)]
    return Graph(n, edges)


def _k4s(adj: np.ndarray) -> list[tuple[int, int, int, int]]:
    n = adj.shape[0]
    out = []
    for a, b in itertools.combinations(range(n), 2):
        if not adj[a, b]:
            continue
        common = [c for c in range(b + 1, n) if adj[a, c] and adj[b, c]]
        for i, c in enumerate(common):
            for d in common[i + 1:]:
                if adj[c, d]:
                    out.append((a, b, c, d))
    return out


def repair_k4(g: Graph) -> Graph:
    """Take the lexicographically first K4, delete its edge of least degree
    sum deg(u) + deg(v) (ties: smallest pair), and repeat until K4-free."""
    adj = g.adjacency.copy()
    while True:
        quads = _k4s(adj)
        if not quads:
            return Graph.from_adjacency(adj)
        deg = adj.sum(axis=1)
        u, v = min(itertools.combinations(quads[0], 2), key=lambda e: (int(deg[e[0]] + deg[e[1]]), e))
        adj[u, v] = adj[v, u] = False


def _random_repair(n: int, p: Fraction, rng: SplitMix64) -> Graph:
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.bernoulli(p)]
    return repair_k4(Graph(n, edges))


def planted_sets(spec: GeneratorSpec) -> tuple[tuple[int, ...], tuple[int, ...]]:
    n = spec.sizes[0]
    s1 = spec.sizes[1] if len(spec.sizes) == 2 else n // 3
    return tuple(range(s1)), tuple(range(s1, 2 * n // 3))


def _planted(spec: GeneratorSpec, rng: SplitMix64) -> Graph:
    n = spec.sizes[0]
    i1, i2 = planted_sets(spec)
    label = np.full(n, 2)
    label[list(i1)] = 0
    label[list(i2)] = 1
    edges = [
        (u, v)
        for u, v in itertools.combinations(range(n), 2)
        if not (label[u] == label[v] < 2) and rng.bernoulli(spec.p)
    ]
    return repair_k4(Graph(n, edges))


def generate(spec: GeneratorSpec) -> Graph:
    f, s = spec.family, spec.sizes
    rng = SplitMix64(spec.seed)
    if f == "complete-tripartite":
        g = _complete_multipartite(s)
    elif f == "turan":
        g = _complete_multipartite(turan_sizes(s[0]))
    elif f == "complete-bipartite":
        g = _complete_multipartite(s)
    elif f == "pentagon-blowup":
        g = blowup(Graph(5, [(i, (i + 1) % 5) for i in range(5)]), s[0])
    elif f == "random-tripartite":
        g = _random_multipartite(s, spec.p, rng)
    elif f == "random-k4free-repair":
        g = _random_repair(s[0], spec.p, rng)
    elif f == "blowup-of":
        g = blowup(spec.base, s[0])
    else:
        g = _planted(spec, rng)
    if not is_k4_free(g):
        raise AssertionError(f"generator {f} produced a K4")
    return g


def _class_ranges(sizes: Sequence[int]) -> list[tuple[int, ...]]:
    out, start = [], 0
    for s in sizes:
        out.append(tuple(range(start, start + s)))
        start += s
    return out


def convenient_instance(
    spec: GeneratorSpec, i1: Iterable[int] | None = None, i2: Iterable[int] | None = None
) -> ConvenientInstance:
    """Generate the graph and package it with two disjoint independent sets.

    Without explicit sets: planted-two-ind uses the planted ones; tripartite
    families use the first pair of classes whose sizes add up to exactly 2n/3
    (smaller class as I1).  Everything else must pass sets explicitly.
    """
    g = generate(spec)
    n = g.n
    if i1 is not None or i2 is not None:
        if i1 is None or i2 is None:
            raise PreconditionError("pass both I1 and I2")
        return ConvenientInstance.create(g, i1, i2)
    if spec.family == "planted-two-ind":
        a, b = planted_sets(spec)
        return ConvenientInstance.create(g, a, b)
    if spec.family in ("complete-tripartite", "random-tripartite", "turan"):
        sizes = turan_sizes(n) if spec.family == "turan" else spec.sizes
        classes = _class_ranges(sizes)
        for x, y in itertools.combinations(classes, 2):
            if 3 * (len(x) + len(y)) == 2 * n:
                small, big = sorted((x, y), key=len)
                return ConvenientInstance.create(g, small, big)
        raise PreconditionError(f"no two classes of sizes {tuple(sizes)} add up to 2n/3 (n={n})")
    if spec.family == "pentagon-blowup":
        k = spec.sizes[0]
        raise PreconditionError(
            f"pentagon blowup has no canonical independent sets (two disjoint class pairs cover "
            f"4k = {4 * k} of n = {n} vertices); pass I1 and I2"
        )
    raise PreconditionError(f"family {spec.family} has no canonical independent sets; pass I1 and I2")
