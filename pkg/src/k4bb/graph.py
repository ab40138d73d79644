"""Simple undirected graphs on vertices 0..n-1 and the primitive computations
shared by every other module."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import GraphParseError, InvalidPartitionError, PreconditionError

RED = "R"
BLUE = "B"

VertexSet = tuple  # sorted tuple of distinct vertex indices


def vertex_set(items: Iterable[int], n: int | None = None) -> tuple[int, ...]:
    vs = [int(v) for v in items]
    out = tuple(sorted(set(vs)))
    if len(out) != len(vs):
        raise PreconditionError(f"duplicate vertices in {sorted(vs)}")
    if out and (out[0] < 0 or (n is not None and out[-1] >= n)):
        raise PreconditionError(f"vertex index out of range 0..{n}: {list(out)}")
    return out


class Graph:
    """Immutable simple graph backed by a dense boolean adjacency matrix."""

    __slots__ = ("_adj", "_edge_count", "_rows")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise PreconditionError("vertex count must be nonnegative")
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise PreconditionError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise PreconditionError(f"edge ({u}, {v}) out of range for n={n}")
            adj[u, v] = adj[v, u] = True
        self._set(adj)

    def _set(self, adj: np.ndarray) -> None:
        adj.setflags(write=False)
        self._adj = adj
        self._edge_count = int(np.count_nonzero(adj)) // 2
        self._rows = None

    @classmethod
    def from_adjacency(cls, adj) -> "Graph":
        a = np.array(adj, dtype=bool)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise PreconditionError("adjacency must be a square matrix")
        if a.diagonal().any():
            raise PreconditionError("adjacency has a self-loop")
        if not (a == a.T).all():
            raise PreconditionError("adjacency is not symmetric")
        g = cls.__new__(cls)
        g._set(a)
        return g

    @classmethod
    def from_pair_mask(cls, mask: int, n: int) -> "Graph":
        edges = [(i, j) for j in range(n) for i in range(j) if mask >> kernels.pair_index(i, j) & 1]
        return cls(n, edges)

    @property
    def n(self) -> int:
        return self._adj.shape[0]

    @property
    def edge_count(self) -> int:
        return self._edge_count

    @property
    def adjacency(self) -> np.ndarray:
        return self._adj

    @property
    def degrees(self) -> np.ndarray:
        return self._adj.sum(axis=1)

    def degree(self, v: int) -> int:
        return int(np.count_nonzero(self._adj[v]))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._adj[u, v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(int(u) for u in np.flatnonzero(self._adj[v]))

    def edges(self) -> list[tuple[int, int]]:
        us, vs = np.nonzero(np.triu(self._adj, 1))
        return [(int(u), int(v)) for u, v in zip(us, vs)]

    def row_masks(self) -> list[int]:
        """Neighbourhoods as python-int bitsets (bit u of entry v <=> uv edge)."""
        if self._rows is None:
            weights = [1 << u for u in range(self.n)]
            self._rows = [sum(weights[u] for u in np.flatnonzero(row)) for row in self._adj]
        return self._rows

    def pair_mask(self) -> int:
        return sum(1 << kernels.pair_index(u, v) for u, v in self.edges())

    def induced(self, vertices: Iterable[int]) -> "Graph":
        """Induced subgraph, relabelled to 0..k-1 in ascending vertex order."""
        vs = np.array(vertex_set(vertices, self.n), dtype=np.int64)
        return Graph.from_adjacency(self._adj[np.ix_(vs, vs)])

    def count_edges(self, vertices: Sequence[int]) -> int:
        vs = np.asarray(vertices, dtype=np.int64)
        return int(np.count_nonzero(self._adj[np.ix_(vs, vs)])) // 2

    def count_between(self, xs: Sequence[int], ys: Sequence[int]) -> int:
        """Edges with one end in xs and one in ys (xs, ys disjoint)."""
        return int(np.count_nonzero(self._adj[np.ix_(np.asarray(xs, dtype=np.int64),
                                                     np.asarray(ys, dtype=np.int64))]))

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and bool((self._adj == other._adj).all())

    def __hash__(self) -> int:
        return hash((self.n, np.packbits(self._adj).tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, e={self.edge_count})"


@dataclass(frozen=True)
class ColoredGraph:
    graph: Graph
    colors: str

    def __post_init__(self):
        if len(self.colors) != self.graph.n or set(self.colors) - {RED, BLUE}:
            raise PreconditionError("colors must be a string of n characters over {R, B}")

    @property
    def red(self) -> np.ndarray:
        return np.array([c == RED for c in self.colors], dtype=bool)


@dataclass(frozen=True)
class Bipartition:
    side_a: tuple[int, ...]
    side_b: tuple[int, ...]

    @classmethod
    def of(cls, side_a: Iterable[int], side_b: Iterable[int]) -> "Bipartition":
        return cls(tuple(sorted(int(v) for v in side_a)), tuple(sorted(int(v) for v in side_b)))

    @classmethod
    def from_mask(cls, in_a: Sequence[bool]) -> "Bipartition":
        return cls.of([v for v, x in enumerate(in_a) if x], [v for v, x in enumerate(in_a) if not x])

    def validate(self, n: int) -> None:
        a, b = set(self.side_a), set(self.side_b)
        if len(a) != len(self.side_a) or len(b) != len(self.side_b):
            raise InvalidPartitionError("duplicate vertex in a side")
        if a & b:
            raise InvalidPartitionError(f"sides overlap on {sorted(a & b)}")
        if a | b != set(range(n)):
            raise InvalidPartitionError(f"sides do not cover 0..{n - 1}")

    @property
    def is_balanced(self) -> bool:
        return abs(len(self.side_a) - len(self.side_b)) <= 1

    def in_a(self, n: int) -> np.ndarray:
        x = np.zeros(n, dtype=bool)
        x[list(self.side_a)] = True
        return x

    def as_lists(self) -> list[list[int]]:
        return [list(self.side_a), list(self.side_b)]


@dataclass(frozen=True)
class TriPartition:
    parts: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]

    @classmethod
    def of(cls, a: Iterable[int], b: Iterable[int], c: Iterable[int]) -> "TriPartition":
        return cls(tuple(tuple(sorted(int(v) for v in p)) for p in (a, b, c)))

    def validate(self, n: int) -> None:
        seen: set[int] = set()
        for p in self.parts:
            if seen & set(p) or len(set(p)) != len(p):
                raise InvalidPartitionError("parts overlap")
            seen |= set(p)
        if seen != set(range(n)):
            raise InvalidPartitionError(f"parts do not cover 0..{n - 1}")

    @property
    def sizes(self) -> tuple[int, int, int]:
        return tuple(len(p) for p in self.parts)

    def relative_sizes(self) -> tuple[Fraction, Fraction, Fraction]:
        n = sum(self.sizes)
        return tuple(Fraction(s, n) for s in self.sizes)


# --------------------------------------------------------------------------
# primitive computations


def is_k4_free(g: Graph) -> bool:
    return not kernels.has_k4(g.adjacency)


def codegree(g: Graph, u: int, v: int) -> int:
    """|N(u) & N(v)|."""
    if u == v:
        raise PreconditionError("codegree needs two distinct vertices")
    a = g.adjacency
    return int(np.count_nonzero(a[u] & a[v]))


def codegree_matrix(g: Graph) -> np.ndarray:
    a = g.adjacency.astype(np.int64)
    return a @ a


def class_edges(g: Graph, p: Bipartition) -> int:
    p.validate(g.n)
    return g.count_edges(p.side_a) + g.count_edges(p.side_b)


def cross_edges(g: Graph, p: Bipartition) -> int:
    p.validate(g.n)
    return g.count_between(p.side_a, p.side_b)


def triangles(g: Graph) -> list[tuple[int, int, int]]:
    return [tuple(int(x) for x in t) for t in kernels.triangle_array(g.adjacency)]


def min_degree(g: Graph) -> int:
    return int(g.degrees.min()) if g.n else 0


def degree_coloring(g: Graph) -> ColoredGraph:
    n = g.n
    return ColoredGraph(g, "".join(RED if 2 * int(d) >= n else BLUE for d in g.degrees))


def blowup(g: Graph, k: int) -> Graph:
    """k-blowup; copy j of vertex v is vertex ``v*k + j``."""
    if k < 1:
        raise PreconditionError("blowup factor must be positive")
    return Graph.from_adjacency(np.kron(g.adjacency, np.ones((k, k), dtype=bool)))


def blowup_copy(v: int, j: int, k: int) -> int:
    return v * k + j


def blowup_origin(x: int, k: int) -> int:
    return x // k


def maximal_matching_within(g: Graph, parts: Sequence[Iterable[int]]) -> list[tuple[int, int]]:
    """Greedy maximal matching using only edges inside a single part."""
    label = np.full(g.n, -1, dtype=np.int64)
    for i, p in enumerate(parts):
        for v in p:
            if label[v] != -1:
                raise PreconditionError("parts are not disjoint")
            label[v] = i
    a = g.adjacency
    used = np.zeros(g.n, dtype=bool)
    matching = []
    for u in range(g.n):
        if label[u] < 0 or used[u]:
            continue
        cand = np.flatnonzero(a[u] & ~used & (label == label[u]))
        cand = cand[cand > u]
        if cand.size:
            v = int(cand[0])
            used[u] = used[v] = True
            matching.append((u, v))
    return matching


def disjoint_triangle_packing(g: Graph, within: Iterable[int]) -> list[tuple[int, int, int]]:
    """Greedy maximal family of vertex-disjoint triangles inside ``within``,
    scanning triangles in lexicographic order."""
    w = vertex_set(within, g.n)
    sub = g.induced(w)
    used: set[int] = set()
    packing = []
    for t in triangles(sub):
        if used.isdisjoint(t):
            used.update(t)
            packing.append(tuple(w[x] for x in t))
    return packing


def maximal_disjoint_triangles(g: Graph, within: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(v for t in disjoint_triangle_packing(g, within) for v in t))


# --------------------------------------------------------------------------
# text format


def parse_graph_text(text: str) -> Graph | ColoredGraph:
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln]
    if not lines:
        raise GraphParseError("empty input", 1)
    lineno, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise GraphParseError(f"expected 'n m', got {head!r}", lineno)
    n, m = int(parts[0]), int(parts[1])
    if len(lines) < 1 + m:
        raise GraphParseError(f"expected {m} edge lines, found {len(lines) - 1}", lines[-1][0])
    edges = []
    seen = set()
    for lineno, ln in lines[1:1 + m]:
        parts = ln.split()
        if len(parts) != 2 or not all(p.lstrip("-").isdigit() for p in parts):
            raise GraphParseError(f"expected 'u v', got {ln!r}", lineno)
        u, v = int(parts[0]), int(parts[1])
        if u == v:
            raise GraphParseError(f"self-loop at vertex {u}", lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError(f"vertex index out of range 0..{n - 1}", lineno)
        if u > v:
            raise GraphParseError(f"edge must be written with u < v, got {u} {v}", lineno)
        if (u, v) in seen:
            raise GraphParseError(f"duplicate edge {u} {v}", lineno)
        seen.add((u, v))
        edges.append((u, v))
    g = Graph(n, edges)
    rest = lines[1 + m:]
    if not rest:
        return g
    lineno, ln = rest[0]
    if len(rest) > 1:
        raise GraphParseError("unexpected trailing lines", rest[1][0])
    if len(ln) != n or set(ln) - {RED, BLUE}:
        raise GraphParseError(f"color line must be {n} characters over R/B", lineno)
    return ColoredGraph(g, ln)


def format_graph(g: Graph | ColoredGraph) -> str:
    base = g.graph if isinstance(g, ColoredGraph) else g
    edges = base.edges()
    out = [f"{base.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    if isinstance(g, ColoredGraph):
        out.append(g.colors)
    return "\n".join(out) + "\n"


def read_graph(path: str | Path) -> Graph | ColoredGraph:
    return parse_graph_text(Path(path).read_text())


def write_graph(path: str | Path, g: Graph | ColoredGraph) -> None:
    Path(path).write_text(format_graph(g))
