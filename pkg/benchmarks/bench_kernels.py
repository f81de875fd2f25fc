#!/usr/bin/env python3
"""Compare the compiled kernel extension against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--n 200000] [--repeat 5]
"""

import argparse
import time

import numpy as np

from stableshot import _kernels_py

try:
    from stableshot import _kernels as _kernels_cy
except ImportError:
    _kernels_cy = None


def timeit(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    gen = np.random.default_rng(0)
    n = args.n
    deltas = gen.normal(size=n)
    counts = np.cumsum(gen.integers(-1, 2, size=n))
    counts -= counts.min()  # nonnegative occupancy
    levels = gen.normal(size=n)
    lo = np.arange(n)
    hi = np.maximum.accumulate(np.minimum(lo + gen.integers(0, 50, size=n), n - 1))
    m = 400
    p = np.column_stack([np.linspace(0, 1, m), gen.normal(size=m)])
    q = np.column_stack([np.linspace(0, 1, m), gen.normal(size=m)])

    cases = [
        ("compensated_cumsum", (deltas,)),
        ("busy_bounds", (counts.astype(np.int64), 0)),
        ("sliding_range_max", (levels, lo, hi)),
        ("frechet_minimax", (p, q)),
    ]

    print(f"{'kernel':<22}{'python':>12}{'cython':>12}{'speedup':>10}")
    for name, xs in cases:
        t_py, out_py = timeit(getattr(_kernels_py, name), *xs, repeat=args.repeat)
        if _kernels_cy is None:
            print(f"{name:<22}{t_py * 1e3:>10.2f}ms {'n/a':>12}{'n/a':>10}")
            continue
        t_cy, out_cy = timeit(getattr(_kernels_cy, name), *xs, repeat=args.repeat)
        # sanity: same answers (within float slack for the summation kernel)
        if name == "compensated_cumsum":
            assert np.allclose(out_py, out_cy, atol=1e-9 * np.abs(deltas).sum())
        elif name == "busy_bounds":
            assert all(np.array_equal(a, b) for a, b in zip(out_py, out_cy))
        elif name == "frechet_minimax":
            assert abs(out_py - out_cy) < 1e-12
        else:
            assert np.allclose(out_py, out_cy)
        print(
            f"{name:<22}{t_py * 1e3:>10.2f}ms{t_cy * 1e3:>10.2f}ms"
            f"{t_py / t_cy:>9.1f}x"
        )


if __name__ == "__main__":
    main()
