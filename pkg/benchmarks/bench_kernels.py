"""Compare the compiled kernels against their numpy fallbacks.

Both variants are called directly on identical inputs (the env switch only
affects dispatch), outputs are checked for equality, and the best of
``--repeat`` timings is reported.  The first numba call is timed separately
as compile time.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json]
"""

from __future__ import annotations

import argparse
import json
import time

import numpy as np

from k4bb import kernels as K
from k4bb._accel import HAVE_NUMBA
from k4bb.generators import GeneratorSpec, generate


def _cases():
    n7 = 7
    masks7 = K.k4free_masks_numpy(n7, K.k4_pair_masks(n7))
    splits7 = K.split_pair_masks(n7)
    sub7 = np.ascontiguousarray(masks7[:200_000])

    n6 = 6
    masks6 = K.k4free_masks_numpy(n6, K.k4_pair_masks(n6))
    bbs6 = K.bb_masks_numpy(masks6, K.split_pair_masks(n6))
    inside6, pidx6 = K.inside_pair_table(n6), K.pair_index_matrix(n6)

    g = generate(GeneratorSpec("random-k4free-repair", (18,), seed=11))
    rows = np.array(g.row_masks(), dtype=np.int64)
    adj = np.ascontiguousarray(generate(GeneratorSpec("random-tripartite", (40, 40, 40), seed=3)).adjacency,
                               dtype=np.uint8)
    h = generate(GeneratorSpec("pentagon-blowup", (3,)))
    hadj = np.ascontiguousarray(h.adjacency, dtype=np.uint8)
    red = np.ascontiguousarray(h.degrees >= 0, dtype=np.uint8)
    wnum = np.ones(h.n, dtype=np.int64)
    empty = np.zeros(0, dtype=np.int64)

    return [
        ("k4free_masks n=7", lambda: K.k4free_masks_numba(n7, K.k4_pair_masks(n7)),
         lambda: K.k4free_masks_numpy(n7, K.k4_pair_masks(n7))),
        ("bb_masks n=7 (200k graphs)", lambda: K.bb_masks_numba(sub7, splits7),
         lambda: K.bb_masks_numpy(sub7, splits7)),
        ("bb_rows n=18", lambda: K.bb_rows_numba(rows, g.n), lambda: K.bb_rows_numpy(rows, g.n)),
        ("has_k4 n=120", lambda: K.has_k4_numba(adj), lambda: K.has_k4_numpy(adj.astype(bool))),
        ("triangles n=120", lambda: K.triangles_numba(adj), lambda: K.triangles_numpy(adj.astype(bool))),
        ("tuple_histogram k=4 n=15", lambda: K.tuple_histogram_numba(hadj, red, wnum, 4, empty),
         lambda: K.tuple_histogram_numpy(hadj, red, wnum, 4, empty)),
        ("domination_sweep n=6", lambda: K.domination_sweep_numba(masks6, bbs6, n6, inside6, pidx6),
         lambda: K.domination_sweep_numpy(masks6, bbs6, n6, inside6, pidx6)),
    ]


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return len(a) == len(b) and all(_same(x, y) for x, y in zip(a, b))
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return False
    return bool(np.array_equal(a, b))


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    if not HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    rows, ok = [], True
    for name, fast, slow in _cases():
        t = time.perf_counter()
        out_fast = fast()
        compile_s = time.perf_counter() - t
        out_slow = slow()
        # bb_rows ties may pick different witness masks; compare optima only
        same = _same(out_fast[0], out_slow[0]) if name.startswith("bb_rows") else _same(out_fast, out_slow)
        ok &= same
        nb, np_ = _best(fast, args.repeat), _best(slow, args.repeat)
        rows.append({"kernel": name, "numba_s": nb, "numpy_s": np_, "first_call_s": compile_s,
                     "speedup": np_ / nb if nb else float("inf"), "agree": same})

    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'kernel':30} {'numba':>10} {'numpy':>10} {'speedup':>9} {'1st call':>9}  agree")
        for r in rows:
            print(f"{r['kernel']:30} {r['numba_s']:10.4f} {r['numpy_s']:10.4f} {r['speedup']:8.1f}x "
                  f"{r['first_call_s']:9.3f}  {r['agree']}")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
