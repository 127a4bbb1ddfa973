#!/usr/bin/env python3
"""Benchmark the compiled bit kernels against the pure-Python fallback.

Times pad-family table construction and the exhaustive bias oracle over a
grid of (field degree, block length) pairs, plus a gf_mul batch.  Run from
the repository root:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from ecscipher import _kernels_py
from ecscipher.bias import irreducible_poly

try:
    from ecscipher import _kernels
except ImportError:
    _kernels = None

GRID = [(3, 6), (4, 8), (5, 8), (6, 10)]
GF_BATCH = 20_000


def time_call(fn, *args, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_impl(impl):
    rows = []
    for s, l in GRID:
        mod = irreducible_poly(s)
        t_table, table = time_call(impl.pad_table, s, mod, l)
        t_bias, imbalance = time_call(impl.max_mask_imbalance, table, l)
        rows.append((s, l, t_table, t_bias, imbalance))
    mod = irreducible_poly(32)
    rng = np.random.default_rng(0)
    pairs = rng.integers(0, 1 << 32, size=(GF_BATCH, 2), dtype=np.uint64)
    start = time.perf_counter()
    acc = 0
    for a, b in pairs:
        acc ^= impl.gf_mul(int(a), int(b), mod, 32)
    t_gf = time.perf_counter() - start
    return rows, t_gf, acc


def main():
    impls = [("python", _kernels_py)]
    if _kernels is not None:
        impls.append(("compiled", _kernels))
    else:
        print("compiled kernels not built; benchmarking the fallback only")

    results = {}
    for name, impl in impls:
        results[name] = bench_impl(impl)

    print(f"{'s':>3} {'l':>3} | " + " | ".join(f"{n:>10} table {n:>10} bias" for n, _ in impls))
    for i, (s, l) in enumerate(GRID):
        cells = []
        for name, _ in impls:
            _, _, t_table, t_bias, _ = results[name][0][i]
            cells.append(f"{t_table * 1e3:13.2f} ms {t_bias * 1e3:13.2f} ms")
        print(f"{s:>3} {l:>3} | " + " | ".join(cells))

    for name, _ in impls:
        print(f"gf_mul x{GF_BATCH} [{name}]: {results[name][1] * 1e3:.2f} ms")

    if _kernels is not None:
        imb_py = [r[4] for r in results["python"][0]]
        imb_c = [r[4] for r in results["compiled"][0]]
        assert imb_py == imb_c, "implementations disagree"
        assert results["python"][2] == results["compiled"][2]
        total_py = sum(r[2] + r[3] for r in results["python"][0])
        total_c = sum(r[2] + r[3] for r in results["compiled"][0])
        print(f"grid total: python {total_py * 1e3:.1f} ms, "
              f"compiled {total_c * 1e3:.1f} ms, speedup {total_py / total_c:.1f}x")


if __name__ == "__main__":
    main()
