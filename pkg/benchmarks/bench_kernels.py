"""Compare the numba and pure-numpy kernel paths on large synthetic inputs.

Times the line-diff LCS kernel on a pair of long files with scattered
edits, and the pairwise-distance clustering kernel on thousands of beads.
Run from the repository root:

    python benchmarks/bench_kernels.py [--lines 4000] [--beads 3000]
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from cbt import _kernels


def bench_lcs(n_lines: int, repeats: int) -> dict[str, float]:
    rng = random.Random(1)
    old = [rng.randrange(n_lines // 2) for _ in range(n_lines)]
    new = list(old)
    for _ in range(max(1, n_lines // 20)):  # ~5% scattered edits
        op = rng.choice(("ins", "del", "sub"))
        pos = rng.randrange(len(new))
        if op == "ins":
            new.insert(pos, n_lines + rng.randrange(100))
        elif op == "del":
            new.pop(pos)
        else:
            new[pos] = n_lines + rng.randrange(100)
    a = np.array(old, np.int64)
    b = np.array(new, np.int64)

    out = {}
    from numba import njit

    jit_fn = njit(cache=True)(_kernels._lcs_marks)
    for name, fn in [("numba", jit_fn), ("numpy", _kernels._lcs_marks)]:
        ma = np.zeros(len(a), np.bool_)
        mb = np.zeros(len(b), np.bool_)
        fn(a, b, ma, mb)  # warm (JIT compile / bytecode cache)
        best = float("inf")
        for _ in range(repeats):
            ma[:] = False
            mb[:] = False
            t0 = time.perf_counter()
            fn(a, b, ma, mb)
            best = min(best, time.perf_counter() - t0)
        out[name] = best
    return out


def bench_clustering(n_beads: int, repeats: int) -> dict[str, float]:
    rng = np.random.default_rng(2)
    ts = np.sort(rng.integers(0, 10**6, n_beads)).astype(np.int64)
    seq = np.arange(n_beads, dtype=np.int64)
    cls_id = rng.integers(-1, 8, n_beads).astype(np.int64)
    mth_id = np.where(cls_id >= 0, rng.integers(-1, 30, n_beads), -1).astype(np.int64)
    params = (1.0, 0.2, -0.2, -0.4, 300.0, 20.0, 0.2)

    out = {}
    from numba import njit

    jit_fn = njit(cache=True)(_kernels._component_labels_loop)
    for name, fn in [("numba", jit_fn), ("numpy", _kernels._component_labels_numpy)]:
        fn(ts, seq, cls_id, mth_id, *params)  # warm
        best = float("inf")
        for _ in range(repeats):
            t0 = time.perf_counter()
            fn(ts, seq, cls_id, mth_id, *params)
            best = min(best, time.perf_counter() - t0)
        out[name] = best
    return out


def main() -> None:
    parser = argparse.ArgumentParser(description="Benchmark numba vs numpy kernel paths")
    parser.add_argument("--lines", type=int, default=4000, help="file length for the diff kernel")
    parser.add_argument("--beads", type=int, default=3000, help="bead count for the clustering kernel")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    print(f"diff kernel: {args.lines} lines, ~5% edits")
    lcs = bench_lcs(args.lines, args.repeats)
    print(f"  numba  {lcs['numba'] * 1e3:10.2f} ms")
    print(f"  numpy  {lcs['numpy'] * 1e3:10.2f} ms")
    print(f"  speedup {lcs['numpy'] / lcs['numba']:8.1f}x")

    print(f"clustering kernel: {args.beads} beads ({args.beads ** 2 // 2} pairs)")
    comp = bench_clustering(args.beads, args.repeats)
    print(f"  numba  {comp['numba'] * 1e3:10.2f} ms")
    print(f"  numpy  {comp['numpy'] * 1e3:10.2f} ms")
    print(f"  speedup {comp['numpy'] / comp['numba']:8.1f}x")


if __name__ == "__main__":
    main()
