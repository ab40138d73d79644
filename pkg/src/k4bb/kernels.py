"""Hot inner loops.

Every kernel exists twice: a loop version compiled with numba and a
vectorised numpy version.  The public wrappers at the bottom of the module
pick one according to :data:`k4bb._accel.USE_NUMBA`; the ``*_numba`` and
``*_numpy`` names stay importable so tests and the benchmark can call both.

Small graphs (n <= 8) are encoded as a single integer whose bit
``pair_index(i, j) = j*(j-1)/2 + i`` (i < j) is set iff ij is an edge.  This
indexing is prefix-stable: a graph on n vertices only uses the low
``n*(n-1)/2`` bits.
"""

from __future__ import annotations

import itertools
from math import comb

import numpy as np

from ._accel import USE_NUMBA, njit

MAX_MASK_N = 8


def pair_index(i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    return j * (j - 1) // 2 + i


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def inside_pair_table(n: int) -> np.ndarray:
    """``table[S]`` = mask of all vertex pairs contained in vertex subset S."""
    table = np.zeros(1 << n, dtype=np.int64)
    for s in range(1 << n):
        bits = 0
        members = [v for v in range(n) if s >> v & 1]
        for a, b in itertools.combinations(members, 2):
            bits |= 1 << pair_index(a, b)
        table[s] = bits
    return table


def balanced_subsets(n: int) -> np.ndarray:
    """Vertex masks of side_a for every balanced split, lexicographic order.

    side_a has floor(n/2) vertices; for even n it must contain vertex 0 so
    each unordered split is listed once.
    """
    h = n // 2
    out = []
    for combo in itertools.combinations(range(n), h):
        if n % 2 == 0 and h > 0 and combo[0] != 0:
            break
        m = 0
        for v in combo:
            m |= 1 << v
        out.append(m)
    return np.array(out, dtype=np.int64)


def k4_pair_masks(n: int) -> np.ndarray:
    out = []
    for quad in itertools.combinations(range(n), 4):
        m = 0
        for a, b in itertools.combinations(quad, 2):
            m |= 1 << pair_index(a, b)
        out.append(m)
    return np.array(out, dtype=np.int64)


# --------------------------------------------------------------------------
# scalar helpers (compiled)


@njit
def _popcount(x):
    x = x - ((x >> 1) & 0x5555555555555555)
    x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
    return ((x * 0x0101010101010101) >> 56) & 0xFF


# --------------------------------------------------------------------------
# exact balanced bisection on row bitmasks


@njit
def _side_cost(rows, n, s):
    full = (1 << n) - 1
    comp = full ^ s
    total = 0
    for v in range(n):
        if (s >> v) & 1:
            total += _popcount(rows[v] & s)
        else:
            total += _popcount(rows[v] & comp)
    return total // 2


@njit
def bb_rows_numba(rows, n):
    h = n // 2
    if h == 0:
        return _side_cost(rows, n, 0), 0
    c = np.arange(h)
    best = -1
    best_mask = 0
    while True:
        s = 0
        for i in range(h):
            s |= 1 << c[i]
        cost = _side_cost(rows, n, s)
        if best < 0 or cost < best:
            best = cost
            best_mask = s
            if best == 0:
                break
        i = h - 1
        while i >= 0 and c[i] == n - h + i:
            i -= 1
        if i < 0 or (n % 2 == 0 and i == 0):
            break
        c[i] += 1
        for j in range(i + 1, h):
            c[j] = c[j - 1] + 1
    return best, best_mask


def bb_rows_numpy(rows: np.ndarray, n: int, chunk: int = 1 << 15):
    h = n // 2
    adj = ((rows[:, None] >> np.arange(n)[None, :]) & 1).astype(np.int64)
    if h == 0:
        return int(adj.sum() // 2), 0
    combos = itertools.combinations(range(n), h)
    if n % 2 == 0:
        combos = itertools.takewhile(lambda c: c[0] == 0, combos)
    best, best_mask = -1, 0
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            break
        x = np.zeros((len(block), n), dtype=np.int64)
        idx = np.array(block, dtype=np.int64)
        np.put_along_axis(x, idx, 1, axis=1)
        y = 1 - x
        cost = (np.einsum("ij,jk,ik->i", x, adj, x) + np.einsum("ij,jk,ik->i", y, adj, y)) // 2
        k = int(np.argmin(cost))
        if best < 0 or cost[k] < best:
            best = int(cost[k])
            best_mask = int(sum(1 << v for v in block[k]))
    return best, best_mask


# --------------------------------------------------------------------------
# labelled-graph sweeps on pair masks (n <= 8)


@njit
def k4free_masks_numba(n, quads):
    total = 1 << (n * (n - 1) // 2)
    keep = np.empty(total, dtype=np.int64)
    count = 0
    for m in range(total):
        ok = True
        for q in quads:
            if m & q == q:
                ok = False
                break
        if ok:
            keep[count] = m
            count += 1
    return keep[:count]


def k4free_masks_numpy(n: int, quads: np.ndarray, chunk: int = 1 << 20) -> np.ndarray:
    total = 1 << pair_count(n)
    parts = []
    for lo in range(0, total, chunk):
        m = np.arange(lo, min(total, lo + chunk), dtype=np.int64)
        bad = np.zeros(m.shape, dtype=bool)
        for q in quads:
            bad |= (m & q) == q
        parts.append(m[~bad])
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


@njit
def bb_masks_numba(masks, splits):
    out = np.empty(masks.shape[0], dtype=np.int64)
    for g in range(masks.shape[0]):
        m = masks[g]
        best = 1 << 30
        for w in splits:
            c = _popcount(m & w)
            if c < best:
                best = c
        out[g] = best
    return out


def bb_masks_numpy(masks: np.ndarray, splits: np.ndarray, chunk: int = 1 << 18) -> np.ndarray:
    out = np.empty(masks.shape[0], dtype=np.int64)
    for lo in range(0, masks.shape[0], chunk):
        block = masks[lo:lo + chunk]
        cnt = np.bitwise_count(block[:, None] & splits[None, :])
        out[lo:lo + chunk] = cnt.min(axis=1)
    return out


def split_pair_masks(n: int) -> np.ndarray:
    """Pair mask of class pairs (both ends on one side) for each balanced split."""
    inside = inside_pair_table(n)
    full = (1 << n) - 1
    sides = balanced_subsets(n)
    return np.array([inside[s] | inside[full ^ s] for s in sides], dtype=np.int64)


# --------------------------------------------------------------------------
# K4 / triangle scans on a dense adjacency matrix


@njit
def has_k4_numba(adj):
    n = adj.shape[0]
    buf = np.empty(n, dtype=np.int64)
    for u in range(n):
        for v in range(u + 1, n):
            if not adj[u, v]:
                continue
            k = 0
            for w in range(v + 1, n):
                if adj[u, w] and adj[v, w]:
                    buf[k] = w
                    k += 1
            for a in range(k):
                for b in range(a + 1, k):
                    if adj[buf[a], buf[b]]:
                        return True
    return False


def has_k4_numpy(adj: np.ndarray) -> bool:
    n = adj.shape[0]
    us, vs = np.nonzero(np.triu(adj, 1))
    for u, v in zip(us, vs):
        w = np.flatnonzero(adj[u] & adj[v])
        w = w[w > v]
        if w.size > 1 and adj[np.ix_(w, w)].any():
            return True
    return False


@njit
def triangles_numba(adj):
    n = adj.shape[0]
    cap = 16
    out = np.empty((cap, 3), dtype=np.int64)
    t = 0
    for u in range(n):
        for v in range(u + 1, n):
            if not adj[u, v]:
                continue
            for w in range(v + 1, n):
                if adj[u, w] and adj[v, w]:
                    if t == cap:
                        cap *= 2
                        bigger = np.empty((cap, 3), dtype=np.int64)
                        bigger[:t] = out[:t]
                        out = bigger
                    out[t, 0] = u
                    out[t, 1] = v
                    out[t, 2] = w
                    t += 1
    return out[:t]


def triangles_numpy(adj: np.ndarray) -> np.ndarray:
    rows = []
    us, vs = np.nonzero(np.triu(adj, 1))
    for u, v in zip(us, vs):
        w = np.flatnonzero(adj[u] & adj[v])
        w = w[w > v]
        if w.size:
            rows.append(np.column_stack([np.full(w.size, u), np.full(w.size, v), w]))
    if not rows:
        return np.zeros((0, 3), dtype=np.int64)
    return np.concatenate(rows).astype(np.int64)


# --------------------------------------------------------------------------
# ordered tuple histograms for flag densities
#
# code layout for a k-tuple: bit pair_index(i, j) is set iff positions i, j
# map to adjacent base vertices; bit P + i (P = k(k-1)/2) is set iff
# position i maps to a red vertex.  Positions < len(prefix) are pinned.


@njit
def tuple_histogram_numba(adj, red, wnum, k, prefix):
    n = adj.shape[0]
    r = prefix.shape[0]
    npairs = k * (k - 1) // 2
    hist = np.zeros(1 << (npairs + k), dtype=np.int64)
    free = k - r
    pos = np.zeros(k, dtype=np.int64)
    for i in range(r):
        pos[i] = prefix[i]
    idx = np.zeros(free, dtype=np.int64)
    total = 1
    for _ in range(free):
        total *= n
    for _ in range(total):
        for i in range(free):
            pos[r + i] = idx[i]
        code = 0
        for j in range(1, k):
            for i in range(j):
                if adj[pos[i], pos[j]]:
                    code |= 1 << (j * (j - 1) // 2 + i)
        for i in range(k):
            if red[pos[i]]:
                code |= 1 << (npairs + i)
        w = 1
        for i in range(free):
            w *= wnum[idx[i]]
        hist[code] += w
        i = free - 1
        while i >= 0:
            idx[i] += 1
            if idx[i] < n:
                break
            idx[i] = 0
            i -= 1
    return hist


def tuple_histogram_numpy(adj, red, wnum, k, prefix):
    n = adj.shape[0]
    r = len(prefix)
    free = k - r
    npairs = pair_count(k)
    shape = (n,) * free
    grids = []
    for i in range(k):
        if i < r:
            grids.append(np.full((1,) * free, int(prefix[i]), dtype=np.int64))
        else:
            s = [1] * free
            s[i - r] = n
            grids.append(np.arange(n, dtype=np.int64).reshape(s))
    code = np.zeros(shape, dtype=np.int64)
    for j in range(1, k):
        for i in range(j):
            bit = adj[grids[i], grids[j]].astype(np.int64)
            code = code | (bit << pair_index(i, j))
    for i in range(k):
        code = code | (red[grids[i]].astype(np.int64) << (npairs + i))
    weight = np.ones(shape, dtype=np.int64)
    for i in range(r, k):
        weight = weight * wnum[grids[i]]
    return _weighted_bincount(code.ravel(), np.broadcast_to(weight, shape).ravel(), 1 << (npairs + k))


def _weighted_bincount(codes, weights, size):
    # np.bincount works in float64; accumulate exactly in int64 instead
    hist = np.zeros(size, dtype=np.int64)
    np.add.at(hist, codes, weights)
    return hist


# --------------------------------------------------------------------------
# expectation-dominates-minimum sweep (root cuts on degree-coloured graphs)
#
# For a root-derived pair (L, R) and side-L target t_L (t_R = n - t_L), the
# exact expectation of class-edges when C = V - L - R is split uniformly at
# random so that both sides hit their target is
#   e(L) + e(R) + a/m e(L,C) + b/m e(R,C) + (a(a-1) + b(b-1))/(m(m-1)) e(C)
# with a = t_L - |L|, b = t_R - |R|, m = |C|.  The sweep checks
# bb * denominator <= numerator in integers.

KIND_VERTEX, KIND_EDGE1, KIND_EDGE2, KIND_CHERRY = 0, 1, 2, 3


@njit
def _dominated(bb, eL, eR, eLC, eRC, eC, m, a, b):
    if m >= 2:
        d = m * (m - 1)
        num = (eL + eR) * d + a * (m - 1) * eLC + b * (m - 1) * eRC + eC * (a * (a - 1) + b * (b - 1))
    elif m == 1:
        d = 1
        num = eL + eR + a * eLC + b * eRC
    else:
        d = 1
        num = eL + eR
    return bb * d <= num


@njit
def _cut_check(bb, mask, inside, n, L, R, checks, bad, kind):
    full = (1 << n) - 1
    C = full ^ L ^ R
    nL = _popcount(L)
    nR = _popcount(R)
    m = n - nL - nR
    eL = _popcount(mask & inside[L])
    eR = _popcount(mask & inside[R])
    eC = _popcount(mask & inside[C])
    eLC = _popcount(mask & inside[L | C]) - eL - eC
    eRC = _popcount(mask & inside[R | C]) - eR - eC
    lo = n // 2
    hi = n - lo
    for t in range(lo, hi + 1):
        a = t - nL
        b = (n - t) - nR
        if a < 0 or b < 0:
            continue
        checks[kind] += 1
        if not _dominated(bb, eL, eR, eLC, eRC, eC, m, a, b):
            bad[kind] += 1


@njit
def domination_sweep_numba(masks, bbs, n, inside, pidx):
    checks = np.zeros(4, dtype=np.int64)
    bad = np.zeros(4, dtype=np.int64)
    full = (1 << n) - 1
    nbr = np.zeros(n, dtype=np.int64)
    red = np.zeros(n, dtype=np.bool_)
    for g in range(masks.shape[0]):
        mask = masks[g]
        bb = bbs[g]
        for v in range(n):
            s = 0
            for u in range(n):
                if u != v and (mask >> pidx[u, v]) & 1:
                    s |= 1 << u
            nbr[v] = s
            red[v] = 2 * _popcount(s) >= n
        for v in range(n):
            if not red[v]:
                _cut_check(bb, mask, inside, n, nbr[v], 0, checks, bad, KIND_VERTEX)
        for u in range(n):
            if not red[u]:
                continue
            for v in range(n):
                if v == u or not red[v] or not (nbr[u] >> v) & 1:
                    continue
                only_u = nbr[u] & ~nbr[v]
                only_v = nbr[v] & ~nbr[u]
                neither = full & ~(nbr[u] | nbr[v])
                _cut_check(bb, mask, inside, n, only_u, nbr[u] & nbr[v], checks, bad, KIND_EDGE1)
                _cut_check(bb, mask, inside, n, only_u | neither, only_v, checks, bad, KIND_EDGE2)
                for w in range(n):
                    if w == u or w == v or not red[w]:
                        continue
                    if not (nbr[v] >> w) & 1 or (nbr[u] >> w) & 1:
                        continue
                    L = (nbr[u] | nbr[w]) & ~nbr[v]
                    R = (nbr[v] & ~nbr[u]) | (full & ~(nbr[u] | nbr[v] | nbr[w]))
                    _cut_check(bb, mask, inside, n, L, R, checks, bad, KIND_CHERRY)
    return checks, bad


def domination_sweep_numpy(masks, bbs, n, inside, pidx):
    checks = np.zeros(4, dtype=np.int64)
    bad = np.zeros(4, dtype=np.int64)
    full = (1 << n) - 1
    masks = masks.astype(np.int64)
    nbr = []
    for v in range(n):
        s = np.zeros_like(masks)
        for u in range(n):
            if u != v:
                s |= ((masks >> int(pidx[u, v])) & 1) << u
        nbr.append(s)
    red = [2 * np.bitwise_count(s).astype(np.int64) >= n for s in nbr]

    def check(valid, L, R, kind):
        if not valid.any():
            return
        mk, bb = masks[valid], bbs[valid]
        L = np.broadcast_to(L, masks.shape)[valid]
        R = np.broadcast_to(R, masks.shape)[valid]
        C = full ^ L ^ R
        cnt = lambda x: np.bitwise_count(x).astype(np.int64)
        nL, nR = cnt(L), cnt(R)
        m = n - nL - nR
        eL, eR, eC = cnt(mk & inside[L]), cnt(mk & inside[R]), cnt(mk & inside[C])
        eLC = cnt(mk & inside[L | C]) - eL - eC
        eRC = cnt(mk & inside[R | C]) - eR - eC
        for t in range(n // 2, n - n // 2 + 1):
            a, b = t - nL, (n - t) - nR
            ok = (a >= 0) & (b >= 0)
            d = np.where(m >= 2, m * (m - 1), 1)
            num = np.where(
                m >= 2,
                (eL + eR) * d + a * (m - 1) * eLC + b * (m - 1) * eRC + eC * (a * (a - 1) + b * (b - 1)),
                np.where(m == 1, eL + eR + a * eLC + b * eRC, eL + eR),
            )
            checks[kind] += int(ok.sum())
            bad[kind] += int((ok & (bb * d > num)).sum())

    for v in range(n):
        check(~red[v], nbr[v], np.zeros_like(masks), KIND_VERTEX)
    for u in range(n):
        for v in range(n):
            if v == u:
                continue
            edge = red[u] & red[v] & (((masks >> int(pidx[u, v])) & 1) == 1)
            only_u = nbr[u] & ~nbr[v]
            only_v = nbr[v] & ~nbr[u]
            neither = full & ~(nbr[u] | nbr[v])
            check(edge, only_u, nbr[u] & nbr[v], KIND_EDGE1)
            check(edge, only_u | neither, only_v, KIND_EDGE2)
            for w in range(n):
                if w == u or w == v:
                    continue
                cherry = edge & red[w] & (((masks >> int(pidx[v, w])) & 1) == 1) \
                    & (((masks >> int(pidx[u, w])) & 1) == 0)
                L = (nbr[u] | nbr[w]) & ~nbr[v]
                R = (nbr[v] & ~nbr[u]) | (full & ~(nbr[u] | nbr[v] | nbr[w]))
                check(cherry, L, R, KIND_CHERRY)
    return checks, bad


def pair_index_matrix(n: int) -> np.ndarray:
    p = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if i != j:
                p[i, j] = pair_index(i, j)
    return p


# --------------------------------------------------------------------------
# dispatch


def bb_rows(rows: np.ndarray, n: int):
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    if USE_NUMBA:
        best, mask = bb_rows_numba(rows, n)
        return int(best), int(mask)
    return bb_rows_numpy(rows, n)


def k4free_masks(n: int) -> np.ndarray:
    quads = k4_pair_masks(n)
    if n < 4:
        return np.arange(1 << pair_count(n), dtype=np.int64)
    if USE_NUMBA:
        return k4free_masks_numba(n, quads)
    return k4free_masks_numpy(n, quads)


def bb_masks(masks: np.ndarray, n: int) -> np.ndarray:
    splits = split_pair_masks(n)
    masks = np.ascontiguousarray(masks, dtype=np.int64)
    if USE_NUMBA:
        return bb_masks_numba(masks, splits)
    return bb_masks_numpy(masks, splits)


def has_k4(adj: np.ndarray) -> bool:
    adj = np.ascontiguousarray(adj, dtype=np.uint8)
    if USE_NUMBA:
        return bool(has_k4_numba(adj))
    return has_k4_numpy(adj.astype(bool))


def triangle_array(adj: np.ndarray) -> np.ndarray:
    adj = np.ascontiguousarray(adj, dtype=np.uint8)
    if USE_NUMBA:
        return triangles_numba(adj)
    return triangles_numpy(adj.astype(bool))


def tuple_histogram(adj, red, wnum, k: int, prefix=()) -> np.ndarray:
    adj = np.ascontiguousarray(adj, dtype=np.uint8)
    red = np.ascontiguousarray(red, dtype=np.uint8)
    wnum = np.ascontiguousarray(wnum, dtype=np.int64)
    prefix = np.asarray(prefix, dtype=np.int64)
    if USE_NUMBA:
        return tuple_histogram_numba(adj, red, wnum, k, prefix)
    return tuple_histogram_numpy(adj, red, wnum, k, prefix)


def domination_sweep(masks: np.ndarray, bbs: np.ndarray, n: int):
    inside = inside_pair_table(n)
    pidx = pair_index_matrix(n)
    masks = np.ascontiguousarray(masks, dtype=np.int64)
    bbs = np.ascontiguousarray(bbs, dtype=np.int64)
    if USE_NUMBA:
        return domination_sweep_numba(masks, bbs, n, inside, pidx)
    return domination_sweep_numpy(masks, bbs, n, inside, pidx)


def split_count(n: int) -> int:
    h = n // 2
    return comb(n - 1, h - 1) if n % 2 == 0 and h > 0 else comb(n, h)
