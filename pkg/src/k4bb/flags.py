"""Exact flag densities on step graphons of coloured graphs.

A finite coloured graph G with vertex weights w stands for the limit of its
balanced blowups.  Sampling from that limit picks base vertices independently
by weight; two picks of the same base vertex are distinct copies, hence
non-adjacent and equally coloured ("copy semantics").  All densities below
are exact rationals under this model.

Density convention: a flag with k vertices, r of them roots, has density
Pr[an ordered tuple of k - r independent picks, together with the roots,
induces a labelled graph isomorphic to the flag with roots fixed].  Unrooted
patterns use the same convention with r = 0, so the edge density is
2e/n^2 and the triangle density 6t/n^3.  ``[[f]]`` over a type with r roots
is the sum over all ordered r-tuples of picks (copy semantics again) of
their weight times f, counting only tuples that induce the type.

Free vertices may carry the wildcard colour ``W``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import PreconditionError, SizeLimitError, TypeMismatchError
from .expectation import fill_expectation
from .graph import BLUE, RED, ColoredGraph, Graph, vertex_set

WILD = "W"
MAX_PATTERN = 5


# --------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class WeightedColoredGraph:
    base: ColoredGraph
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.weights) != self.base.graph.n:
            raise PreconditionError("one weight per vertex")
        if any(w <= 0 for w in self.weights) or sum(self.weights) != 1:
            raise PreconditionError("weights must be positive and sum to 1")

    @property
    def n(self) -> int:
        return self.base.graph.n

    @property
    def adjacency(self) -> np.ndarray:
        return self.base.graph.adjacency

    @property
    def red(self) -> np.ndarray:
        return self.base.red

    def integer_weights(self) -> tuple[np.ndarray, int]:
        """(numerators, common denominator)."""
        d = lcm(*(w.denominator for w in self.weights))
        return np.array([int(w * d) for w in self.weights], dtype=np.int64), d


def step_graphon(cg: ColoredGraph) -> WeightedColoredGraph:
    n = cg.graph.n
    if n == 0:
        raise PreconditionError("empty graph has no step graphon")
    return WeightedColoredGraph(cg, tuple(Fraction(1, n) for _ in range(n)))


@dataclass(frozen=True)
class RootedFlag:
    """Pattern on vertices 0..k-1 (edges as a pair mask, colours over R/B/W)
    with an ordered tuple of root vertices."""

    name: str
    k: int
    edges: int
    colors: str
    roots: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.colors) != self.k or set(self.colors) - {RED, BLUE, WILD}:
            raise PreconditionError(f"{self.name}: colours must be k characters over R/B/W")
        if len(set(self.roots)) != len(self.roots) or any(not 0 <= r < self.k for r in self.roots):
            raise PreconditionError(f"{self.name}: bad roots")
        if self.edges >> kernels.pair_count(self.k):
            raise PreconditionError(f"{self.name}: edge mask too wide")

    @classmethod
    def from_edges(cls, name, k, edge_list, colors, roots=()):
        mask = 0
        for a, b in edge_list:
            mask |= 1 << kernels.pair_index(a, b)
        return cls(name, k, mask, colors, tuple(roots))

    def adjacent(self, a: int, b: int) -> bool:
        return a != b and bool(self.edges >> kernels.pair_index(a, b) & 1)

    @property
    def free(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.k) if v not in self.roots)

    @property
    def r(self) -> int:
        return len(self.roots)

    def type_signature(self) -> tuple[int, int, str]:
        """(r, root adjacency as a pair mask over root positions, root colours)."""
        mask = 0
        for i, j in itertools.combinations(range(self.r), 2):
            if self.adjacent(self.roots[i], self.roots[j]):
                mask |= 1 << kernels.pair_index(i, j)
        return self.r, mask, "".join(self.colors[x] for x in self.roots)

    def free_spec(self) -> tuple[tuple[tuple[int, str], ...], bool]:
        """Per free vertex (adjacency bits to the roots, colour) and, for two
        free vertices, whether they are adjacent."""
        specs = []
        for f in self.free:
            bits = sum(1 << i for i, rt in enumerate(self.roots) if self.adjacent(f, rt))
            specs.append((bits, self.colors[f]))
        fr = self.free
        joined = len(fr) == 2 and self.adjacent(fr[0], fr[1])
        return tuple(specs), joined

    def relabelled(self) -> "RootedFlag":
        """Same flag with roots moved to positions 0..r-1 (in root order)."""
        order = list(self.roots) + list(self.free)
        pos = {v: i for i, v in enumerate(order)}
        mask = 0
        for a, b in itertools.combinations(range(self.k), 2):
            if self.adjacent(a, b):
                mask |= 1 << kernels.pair_index(pos[a], pos[b])
        return RootedFlag(self.name, self.k, mask, "".join(self.colors[v] for v in order), tuple(range(self.r)))


def _color_ok(pattern_color: str, is_red: bool) -> bool:
    return pattern_color == WILD or (pattern_color == RED) == bool(is_red)


def type_matches(w: WeightedColoredGraph, sig: tuple[int, int, str], theta: Sequence[int]) -> bool:
    """Do the picks theta induce the type (copy semantics for repeated picks)?"""
    r, mask, colors = sig
    if len(theta) != r:
        return False
    adj, red = w.adjacency, w.red
    for i in range(r):
        if not _color_ok(colors[i], red[theta[i]]):
            return False
    for i, j in itertools.combinations(range(r), 2):
        want = bool(mask >> kernels.pair_index(i, j) & 1)
        if bool(adj[theta[i], theta[j]]) != want:
            return False
    return True


# --------------------------------------------------------------------------
# unrooted densities via ordered tuple histograms


@lru_cache(maxsize=None)
def _matching_codes(k: int, r: int, edges: int, colors: str) -> tuple[int, ...]:
    """Histogram codes of ordered k-tuples isomorphic to the pattern with the
    first r positions fixed and the remaining ones permuted freely."""
    npairs = kernels.pair_count(k)
    codes = set()
    for tail in itertools.permutations(range(r, k)):
        perm = list(range(r)) + list(tail)  # pattern vertex perm[i] sits at position i
        m = 0
        for i, j in itertools.combinations(range(k), 2):
            if edges >> kernels.pair_index(perm[i], perm[j]) & 1:
                m |= 1 << kernels.pair_index(i, j)
        options = [(0, 1) if colors[perm[i]] == WILD else ((1,) if colors[perm[i]] == RED else (0,)) for i in range(k)]
        for bits in itertools.product(*options):
            c = m
            for i, b in enumerate(bits):
                c |= b << (npairs + i)
            codes.add(c)
    return tuple(sorted(codes))


def unlabeled_density(w: WeightedColoredGraph, pattern: RootedFlag | ColoredGraph) -> Fraction:
    """Probability that an ordered tuple of independent picks induces the pattern."""
    if isinstance(pattern, ColoredGraph):
        pattern = RootedFlag.from_edges("pattern", pattern.graph.n, pattern.graph.edges(), pattern.colors)
    if pattern.roots:
        raise PreconditionError("use rooted_density for flags with roots")
    k = pattern.k
    if k > MAX_PATTERN:
        raise SizeLimitError(f"patterns are limited to {MAX_PATTERN} vertices")
    if k == 0:
        return Fraction(1)
    wnum, d = w.integer_weights()
    hist = kernels.tuple_histogram(w.adjacency, w.red, wnum, k)
    codes = _matching_codes(k, 0, pattern.edges, pattern.colors)
    return Fraction(int(hist[list(codes)].sum()), d ** k)


def _rooted_by_histogram(w: WeightedColoredGraph, flag: RootedFlag, theta: Sequence[int]) -> Fraction:
    f = flag.relabelled()
    if f.k > MAX_PATTERN:
        raise SizeLimitError(f"patterns are limited to {MAX_PATTERN} vertices")
    wnum, d = w.integer_weights()
    hist = kernels.tuple_histogram(w.adjacency, w.red, wnum, f.k, prefix=tuple(theta))
    codes = _matching_codes(f.k, f.r, f.edges, f.colors)
    return Fraction(int(hist[list(codes)].sum()), d ** (f.k - f.r))


# --------------------------------------------------------------------------
# rooted densities through class tables


class _ClassTables:
    """Per root tuple: weight of every (adjacency-to-roots, colour) class and
    weighted adjacent / non-adjacent pair sums between classes."""

    def __init__(self, w: WeightedColoredGraph):
        self.w = w
        self.adj = w.adjacency
        self.red = w.red.astype(np.int64)
        self.wnum, self.d = w.integer_weights()
        a = self.adj.astype(np.int64)
        self.wa = self.wnum[:, None] * a * self.wnum[None, :]

    def tables(self, theta: Sequence[int]):
        r = len(theta)
        n = self.adj.shape[0]
        c = np.zeros(n, dtype=np.int64)
        for i, t in enumerate(theta):
            c |= self.adj[:, t].astype(np.int64) << i
        c |= self.red << r
        size = 1 << (r + 1)
        onehot = np.zeros((n, size), dtype=np.int64)
        onehot[np.arange(n), c] = 1
        weight = self.wnum @ onehot
        p1 = onehot.T @ self.wa @ onehot
        p0 = np.outer(weight, weight) - p1
        return weight, p0, p1


@lru_cache(maxsize=None)
def _class_match(r: int, spec: tuple[tuple[int, str], ...], joined: bool):
    """0/1 vector (one free vertex) or matrix (two free vertices) over class codes."""
    size = 1 << (r + 1)
    low = (1 << r) - 1

    def ok(c, s):
        return (c & low) == s[0] and _color_ok(s[1], c >> r & 1)

    if len(spec) == 1:
        return np.array([1 if ok(c, spec[0]) else 0 for c in range(size)], dtype=np.int64)
    f1, f2 = spec
    m = np.zeros((size, size), dtype=np.int64)
    for c1 in range(size):
        for c2 in range(size):
            if (ok(c1, f1) and ok(c2, f2)) or (ok(c1, f2) and ok(c2, f1)):
                m[c1, c2] = 1
    return m


def _flag_from_tables(flag: RootedFlag, tabs, d: int) -> Fraction:
    spec, joined = flag.free_spec()
    if not spec:
        return Fraction(1)
    weight, p0, p1 = tabs
    m = _class_match(flag.r, spec, joined)
    if len(spec) == 1:
        return Fraction(int(m @ weight), d)
    pairs = p1 if joined else p0
    return Fraction(int((m * pairs).sum()), d * d)


def rooted_density(w: WeightedColoredGraph, flag: RootedFlag, root_image: Sequence[int]) -> Fraction:
    """Density of the flag's free part given the roots sit at root_image.

    Repeated base vertices in root_image are read as distinct copies.
    """
    theta = tuple(int(x) for x in root_image)
    if any(not 0 <= x < w.n for x in theta):
        raise PreconditionError("root image out of range")
    if not type_matches(w, flag.type_signature(), theta):
        raise TypeMismatchError(f"{theta} does not induce the type of {flag.name}")
    if len(flag.free) > 2:
        return _rooted_by_histogram(w, flag, theta)
    tabs = _ClassTables(w)
    return _flag_from_tables(flag, tabs.tables(theta), tabs.d)


# --------------------------------------------------------------------------
# the flags and expressions


def _flag(name, k, edges, colors, roots):
    return RootedFlag.from_edges(name, k, edges, colors, roots)


def _build_flags() -> dict[str, RootedFlag]:
    flags: dict[str, RootedFlag] = {}

    def add(f):
        flags[f.name] = f

    # unrooted
    add(_flag("Edge", 2, [(0, 1)], "WW", ()))
    add(_flag("Triangle", 3, [(0, 1), (0, 2), (1, 2)], "WWW", ()))
    # blue vertex type: M = neighbour of the root, N = non-neighbour
    add(_flag("BlueVertex", 1, [], "B", (0,)))
    add(_flag("VM", 2, [(0, 1)], "BW", (0,)))
    add(_flag("VN", 2, [], "BW", (0,)))
    add(_flag("VMM", 3, [(0, 1), (0, 2), (1, 2)], "BWW", (0,)))
    add(_flag("VNM", 3, [(0, 1), (1, 2)], "BWW", (0,)))
    add(_flag("VNN", 3, [(1, 2)], "BWW", (0,)))
    # red edge type (roots 0, 1): L = only 0, R = only 1, B = both, N = neither
    e = [(0, 1)]
    add(_flag("RedEdge", 2, e, "RR", (0, 1)))
    one = {"L": [(0, 2)], "R": [(1, 2)], "N": [], "B": [(0, 2), (1, 2)]}
    for s, extra in one.items():
        add(_flag("E" + s, 3, e + extra, "RRW", (0, 1)))
    two = {
        "NaN": [(2, 3)],
        "LN": [(0, 3), (2, 3)],
        "RN": [(1, 2), (2, 3)],
        "BN": [(0, 3), (1, 3), (2, 3)],
        "LaR": [(0, 3), (1, 2), (2, 3)],
        "BL": [(0, 2), (1, 2), (0, 3), (2, 3)],
        "BR": [(1, 2), (0, 3), (1, 3), (2, 3)],
        "LaL": [(0, 2), (0, 3), (2, 3)],
        "RaR": [(1, 2), (1, 3), (2, 3)],
    }
    for s, extra in two.items():
        add(_flag("E" + s, 4, e + extra, "RRWW", (0, 1)))
    # red cherry type: roots u=0, v=1 (centre), w=2; L = adjacent to u only,
    # M = v only, R = w only, combinations by concatenation, A = all three
    ch = [(0, 1), (1, 2)]
    add(_flag("RedCherry", 3, ch, "RRR", (0, 1, 2)))
    cls = {"N": [], "L": [0], "M": [1], "R": [2], "LR": [0, 2], "MR": [1, 2], "LM": [0, 1], "A": [0, 1, 2]}
    for s, roots_adj in cls.items():
        add(_flag("C" + s, 4, ch + [(r, 3) for r in roots_adj], "RRRW", (0, 1, 2)))
    pairs = [
        ("LaL", "L", "L"), ("RaR", "R", "R"), ("LaR", "R", "L"), ("LRaR", "R", "LR"),
        ("LaLR", "LR", "L"), ("LRaLR", "LR", "LR"), ("NN", "N", "N"), ("NM", "M", "N"),
        ("MM", "M", "M"), ("NaMR", "MR", "N"), ("MaMR", "MR", "M"), ("LMaR", "R", "LM"),
        ("AaR", "R", "A"), ("LaLM", "LM", "L"), ("LaA", "A", "L"), ("LMaLR", "LR", "LM"),
        ("LRaA", "A", "LR"), ("LMaN", "N", "LM"), ("NaA", "A", "N"), ("LMaMR", "MR", "LM"),
        ("LMaM", "M", "LM"), ("MaA", "A", "M"),
    ]
    for s, c3, c4 in pairs:
        edges = ch + [(r, 3) for r in cls[c3]] + [(r, 4) for r in cls[c4]] + [(3, 4)]
        add(_flag("C" + s, 5, edges, "RRRWW", (0, 1, 2)))
    # triangle type: free vertex adjacent to exactly two of the roots
    tri = [(0, 1), (0, 2), (1, 2)]
    add(_flag("TriangleType", 3, tri, "WWW", (0, 1, 2)))
    add(_flag("TLM", 4, tri + [(0, 3), (2, 3)], "WWWW", (0, 1, 2)))
    add(_flag("TMR", 4, tri + [(1, 3), (2, 3)], "WWWW", (0, 1, 2)))
    add(_flag("TLR", 4, tri + [(0, 3), (1, 3)], "WWWW", (0, 1, 2)))
    return flags


FLAGS = _build_flags()


@dataclass(frozen=True)
class Factor:
    """const + sum coef * flag."""

    const: Fraction
    flags: tuple[tuple[Fraction, str], ...] = ()


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    factors: tuple[Factor, ...]


@dataclass(frozen=True)
class Block:
    label: str
    type_flag: str | None  # None: no roots, no averaging
    terms: tuple[Term, ...]


@dataclass(frozen=True)
class Expression:
    id: str
    blocks: tuple[Block, ...]

    def flag_names(self) -> list[str]:
        names = []
        for b in self.blocks:
            if b.type_flag and b.type_flag not in names:
                names.append(b.type_flag)
            for t in b.terms:
                for f in t.factors:
                    for _, nm in f.flags:
                        if nm not in names:
                            names.append(nm)
        return names


def _lin(const=0, *flags) -> Factor:
    items = []
    for f in flags:
        if isinstance(f, str):
            items.append((Fraction(1), f))
        else:
            items.append((Fraction(f[0]), f[1]))
    return Factor(Fraction(const), tuple(items))


def _sum(*names, const=0) -> Factor:
    return _lin(const, *names)


def _half_minus(*names) -> Factor:
    return _lin(Fraction(1, 2), *[(-1, n) for n in names])


def _term(*factors, coeff=1) -> Term:
    return Term(Fraction(coeff), tuple(factors))


NINTH2 = Fraction(2, 9)


def _build_expressions() -> dict[str, Expression]:
    ex = {}
    vn = _sum("VN")
    ex["vertex-cut"] = Expression("vertex-cut", (
        Block("vertex-cut", "BlueVertex", (
            _term(_sum("VMM", const=-NINTH2), vn, vn),
            _term(_half_minus("VM"), vn, _sum("VNM")),
            _term(_sum("VNN"), coeff=Fraction(1, 4)),
        )),
    ))
    cc = _sum("ER", "EN")
    ecc = _sum("ENaN", "ERN", "ERaR")
    ex["first-edge-cut"] = Expression("first-edge-cut", (
        Block("first-edge-cut", "RedEdge", (
            _term(_sum("ELaL", const=-NINTH2), cc, cc),
            _term(_half_minus("EL"), _sum("ELaR", "ELN"), cc),
            _term(_half_minus("EB"), _sum("EBR", "EBN"), cc),
            _term(ecc, _half_minus("EL"), _half_minus("EL")),
            _term(ecc, _half_minus("EB"), _half_minus("EB")),
        )),
    ))
    ex["second-edge-cut"] = Expression("second-edge-cut", (
        Block("second-edge-cut", "RedEdge", (
            _term(_sum("ELaL", "ELN", "ENaN", "ERaR", const=-NINTH2), _sum("EB")),
            _term(_half_minus("EL", "EN"), _sum("EBL", "EBN")),
            _term(_half_minus("ER"), _sum("EBR")),
        )),
    ))
    inside = ["CRaR", "CLaR", "CLaL", "CLRaR", "CLaLR", "CLRaLR", "CNN", "CNM", "CMM", "CNaMR", "CMaMR"]
    ex["cherry-cut"] = Expression("cherry-cut", (
        Block("cherry-cut", "RedCherry", (
            _term(_sum(*inside, const=-NINTH2), _sum("CLM", "CA")),
            _term(_sum("CLMaR", "CAaR", "CLaLM", "CLaA", "CLMaLR", "CLRaA"), _half_minus("CR", "CL", "CLR")),
            _term(_sum("CLMaN", "CNaA", "CLMaMR", "CLMaM", "CMaA"), _half_minus("CM", "CMR", "CN")),
        )),
    ))
    edge = _sum("Edge")
    ex["must-be-nice"] = Expression("must-be-nice", (
        Block("edge-density", None, (_term(edge, _lin(Fraction(2, 3), (-1, "Edge"))),)),
        Block("triangle-density", None, (_term(edge, _lin(NINTH2, (-1, "Triangle"))),)),
        Block("codegree", "TriangleType", (_term(_lin(1, (-1, "TLM"), (-1, "TMR"), (-1, "TLR"))),)),
    ))
    return ex


EXPRESSIONS = _build_expressions()
EXPRESSION_IDS = tuple(EXPRESSIONS)


@dataclass(frozen=True)
class CutExpressionValue:
    id: str
    value: Fraction
    parts: tuple[tuple[str, Fraction], ...] = field(default=())


def _eval_terms(terms: Iterable[Term], dens) -> Fraction:
    total = Fraction(0)
    for t in terms:
        prod = t.coeff
        for f in t.factors:
            v = f.const
            for c, nm in f.flags:
                v += c * dens(nm)
            prod *= v
            if not prod:
                break
        total += prod
    return total


def root_tuples(w: WeightedColoredGraph, type_flag: RootedFlag):
    sig = type_flag.type_signature()
    for theta in itertools.product(range(w.n), repeat=sig[0]):
        if type_matches(w, sig, theta):
            yield theta


def per_root_value(w: WeightedColoredGraph, block: Block, theta, flags=FLAGS, tabs: _ClassTables | None = None) -> Fraction:
    """The block's polynomial at one root tuple (no averaging weight)."""
    tabs = tabs or _ClassTables(w)
    t = tabs.tables(theta)
    cache = {}

    def dens(nm):
        if nm not in cache:
            cache[nm] = _flag_from_tables(flags[nm], t, tabs.d)
        return cache[nm]

    return _eval_terms(block.terms, dens)


def eval_block(w: WeightedColoredGraph, block: Block, flags=FLAGS) -> Fraction:
    if block.type_flag is None:
        cache = {}

        def dens(nm):
            if nm not in cache:
                cache[nm] = unlabeled_density(w, flags[nm])
            return cache[nm]

        return _eval_terms(block.terms, dens)
    tflag = flags[block.type_flag]
    tabs = _ClassTables(w)
    wnum, d = tabs.wnum, tabs.d
    total = Fraction(0)
    for theta in root_tuples(w, tflag):
        weight = Fraction(int(np.prod([wnum[x] for x in theta])), d ** len(theta))
        total += weight * per_root_value(w, block, theta, flags, tabs)
    return total


def eval_expression(w: WeightedColoredGraph, expr: Expression, flags=FLAGS) -> CutExpressionValue:
    parts = tuple((b.label, eval_block(w, b, flags)) for b in expr.blocks)
    return CutExpressionValue(expr.id, sum((v for _, v in parts), Fraction(0)), parts)


def eval_cut_expression(w: WeightedColoredGraph, expr_id: str) -> CutExpressionValue:
    if expr_id not in EXPRESSIONS:
        raise PreconditionError(f"unknown expression {expr_id!r}; known: {', '.join(EXPRESSION_IDS)}")
    return eval_expression(w, EXPRESSIONS[expr_id])


# --------------------------------------------------------------------------
# manifest


def _frac(x: Fraction) -> str:
    return str(Fraction(x))


def format_manifest(expressions: dict[str, Expression] = EXPRESSIONS, flags=FLAGS) -> str:
    used: list[str] = []
    for e in expressions.values():
        for nm in e.flag_names():
            if nm not in used:
                used.append(nm)
    lines = ["# flag manifest: adjacency mask uses bit j(j-1)/2+i for pair i<j", ""]
    for nm in used:
        f = flags[nm]
        roots = ",".join(map(str, f.roots)) or "-"
        lines.append(f"flag {nm} k={f.k} adj={f.edges} colors={f.colors} roots={roots}")
    for e in expressions.values():
        lines.append("")
        lines.append(f"expr {e.id}")
        for b in e.blocks:
            lines.append(f"block {b.label} type={b.type_flag or '-'}")
            for t in b.terms:
                lines.append(f"term {_frac(t.coeff)}")
                for fac in t.factors:
                    items = " ".join(f"{_frac(c)}*{nm}" for c, nm in fac.flags)
                    lines.append(f"factor {_frac(fac.const)} {items}".rstrip())
        lines.append("end")
    return "\n".join(lines) + "\n"


def parse_manifest(text: str) -> tuple[dict[str, Expression], dict[str, RootedFlag]]:
    flags: dict[str, RootedFlag] = {}
    exprs: dict[str, Expression] = {}
    cur_id = None
    blocks: list = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, *rest = line.split()
        try:
            if head == "flag":
                kv = dict(x.split("=", 1) for x in rest[1:])
                roots = () if kv["roots"] == "-" else tuple(int(x) for x in kv["roots"].split(","))
                flags[rest[0]] = RootedFlag(rest[0], int(kv["k"]), int(kv["adj"]), kv["colors"], roots)
            elif head == "expr":
                cur_id, blocks = rest[0], []
            elif head == "block":
                tname = rest[1].split("=", 1)[1]
                blocks.append([rest[0], None if tname == "-" else tname, []])
            elif head == "term":
                blocks[-1][2].append([Fraction(rest[0]), []])
            elif head == "factor":
                items = []
                for tok in rest[1:]:
                    c, nm = tok.split("*", 1)
                    items.append((Fraction(c), nm))
                blocks[-1][2][-1][1].append(Factor(Fraction(rest[0]), tuple(items)))
            elif head == "end":
                exprs[cur_id] = Expression(cur_id, tuple(
                    Block(lbl, tf, tuple(Term(c, tuple(fs)) for c, fs in terms)) for lbl, tf, terms in blocks
                ))
                cur_id = None
            else:
                raise ValueError(f"unknown record {head!r}")
        except (ValueError, KeyError, IndexError) as exc:
            from .errors import GraphParseError

            raise GraphParseError(f"manifest: {exc}", lineno) from exc
    return exprs, flags


# --------------------------------------------------------------------------
# finite cuts


def finite_cut_expectation(g: Graph, left: Iterable[int], right: Iterable[int], target: int | None = None):
    """(limit form, exact without-replacement form) of the class-edges when
    C = V - L - R tops L up to ``target`` (default n/2) and R up to n - target.

    limit form:  e(L) + e(R) + a/m e(L,C) + b/m e(R,C) + ((a/m)^2 + (b/m)^2) e(C)
    exact form:  the same with a(a-1)/(m(m-1)), b(b-1)/(m(m-1)) on e(C),
    where a = target - |L|, b = n - target - |R|, m = |C|.
    """
    n = g.n
    left, right = vertex_set(left, n), vertex_set(right, n)
    if set(left) & set(right):
        raise PreconditionError("L and R must be disjoint")
    if target is None:
        if n % 2:
            raise PreconditionError("n must be even (or pass target explicitly)")
        target = n // 2
    if len(left) > target:
        raise PreconditionError(f"|L| = {len(left)} exceeds the side size {target}")
    if len(right) > n - target:
        raise PreconditionError(f"|R| = {len(right)} exceeds the side size {n - target}")
    used = set(left) | set(right)
    c = [v for v in range(n) if v not in used]
    m = len(c)
    a = target - len(left)
    b = n - target - len(right)
    exact = fill_expectation(g, left, right, c, target)
    if m == 0:
        return exact, exact
    e_l, e_r, e_c = g.count_edges(left), g.count_edges(right), g.count_edges(c)
    e_lc = g.count_between(left, c) if left else 0
    e_rc = g.count_between(right, c) if right else 0
    pa, pb = Fraction(a, m), Fraction(b, m)
    limit = e_l + e_r + pa * e_lc + pb * e_rc + (pa * pa + pb * pb) * e_c
    return limit, exact


CUT_KINDS = ("vertex", "edge1", "edge2", "cherry")


def cut_sets(g: Graph, kind: str, roots: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """L and R of the cut rooted at a vertex, an edge (two variants) or a cherry u-v-w."""
    n = g.n
    adj = g.adjacency
    nb = [set(np.flatnonzero(adj[x]).tolist()) for x in roots]
    allv = set(range(n))
    if kind == "vertex":
        (v,) = roots
        return tuple(sorted(nb[0])), ()
    if kind in ("edge1", "edge2"):
        u, v = roots
        if not adj[u, v]:
            raise PreconditionError(f"({u}, {v}) is not an edge")
        nu, nv = nb
        if kind == "edge1":
            return tuple(sorted(nu - nv)), tuple(sorted(nu & nv))
        return tuple(sorted((nu - nv) | (allv - nu - nv))), tuple(sorted(nv - nu))
    if kind == "cherry":
        u, v, w = roots
        if len({u, v, w}) != 3 or not (adj[u, v] and adj[v, w]) or adj[u, w]:
            raise PreconditionError(f"{(u, v, w)} is not a cherry centred at {v}")
        nu, nv, nw = nb
        left = (nu | nw) - nv
        right = (nv - nu) | (allv - nu - nv - nw)
        return tuple(sorted(left)), tuple(sorted(right))
    raise PreconditionError(f"unknown cut kind {kind!r}")
