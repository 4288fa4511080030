#!/usr/bin/env python3
"""Compare the exact-rank backends (numba, numpy, python) on integer matrices.

Two workloads: sparse random low-rank matrices shaped like the w-complex
blocks, and the actual w matrices of the largest content blocks of a window.

    python3 benchmarks/bench_rank.py [--sizes 20 40 80] [--repeat 3]
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from iterforms.diffops import WindowSpec, _block_complex, _candidate_blocks, _w_matrix
from iterforms.exactla import _kernels
from iterforms.grading import ChartSpec

BACKENDS = ("numba", "numpy", "python")


def sparse_low_rank(rng, size, rank, density=0.15):
    A = [[rng.choice((-1, 1)) * rng.randint(1, 3) if rng.random() < density else 0 for _ in range(rank)]
         for _ in range(size)]
    B = [[rng.choice((-1, 1)) if rng.random() < density else 0 for _ in range(size)] for _ in range(rank)]
    return [[sum(A[i][t] * B[t][j] for t in range(rank)) for j in range(size)] for i in range(size)]


def window_matrices(n=2, k=1, deg=2):
    chart = ChartSpec(n, k)
    spec = WindowSpec(n, k, r_max=deg + 2, coeff_degree=deg)
    mats = []
    for psi in _candidate_blocks(chart, spec):
        by_s = _block_complex(chart, psi, deg)
        for s in by_s:
            if by_s.get(s + 1) and len(by_s[s]) > 8:
                mats.append(_w_matrix(chart, by_s[s], by_s[s + 1], strict=False).integer_rows())
    mats.sort(key=lambda m: -len(m) * len(m[0]))
    return mats[:20]


def time_backend(name, mats, repeat):
    best = float("inf")
    ranks = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        ranks = [_kernels.integer_rank(m, name) for m in mats]
        best = min(best, time.perf_counter() - t0)
    return best, ranks


def int64_refusals(mats):
    """How many matrices the int64 kernels hand back to the big-int path."""
    return sum(_kernels._rank_numba(np.array(m, dtype=np.int64)) < 0 for m in mats)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[20, 40, 80])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)

    # compile once so the timings below exclude JIT cost
    _kernels.integer_rank([[1, 2], [3, 4]], "numba")

    workloads = [(f"random {s}x{s}", [sparse_low_rank(rng, s, s // 2) for _ in range(5)])
                 for s in args.sizes]
    workloads.append(("window blocks n=2 k=1", window_matrices()))

    print(f"{'workload':<24}" + "".join(f"{b:>12}" for b in BACKENDS) + "   agree  int64 fallbacks")
    for label, mats in workloads:
        row, ranks = [], []
        for b in BACKENDS:
            t, r = time_backend(b, mats, args.repeat)
            row.append(t)
            ranks.append(r)
        agree = all(r == ranks[-1] for r in ranks)
        print(f"{label:<24}" + "".join(f"{t * 1e3:>10.2f}ms" for t in row)
              + f"   {str(agree):<6} {int64_refusals(mats)}/{len(mats)}")


if __name__ == "__main__":
    main()
