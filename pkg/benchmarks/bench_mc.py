"""Benchmark the compiled trajectory kernel against the pure-Python fallback.

Runs identical chunks through both kernels on the same threshold tables,
checks the outputs are bit-identical, and prints a timing table.

Usage: python3 benchmarks/bench_mc.py [trajectories]
"""

import sys
import time

import numpy as np

from exitwalk import Region, TransitionModel
from exitwalk import _mckernel_py
from exitwalk.mc import _threshold_tables

try:
    from exitwalk import _mckernel
except ImportError:
    _mckernel = None


def bench(kernel, label, n, args):
    t0 = time.perf_counter()
    counts, kills, capped = kernel.run_chunk(0, n, *args)
    elapsed = time.perf_counter() - t0
    rate = n / elapsed if elapsed else float("inf")
    print(f"  {label:<10} {elapsed:>9.3f}s   {rate:>12,.0f} walks/s")
    return np.asarray(counts), kills, capped, elapsed


def main() -> int:
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    cases = [
        ("single cell", Region(((0, 0), (0, 0))), TransitionModel.uniform(1)),
        ("2x2 box", Region(((0, 1), (0, 1))), TransitionModel.uniform(1)),
        ("4x4 box", Region(((0, 3),) * 4), TransitionModel.uniform(3)),
    ]
    if _mckernel is None:
        print("compiled kernel not available; timing the fallback only")
    for name, region, model in cases:
        lo, hi, cum, scale, limit = _threshold_tables(region, model)
        beta_lo, beta_hi = region.columns[region.m]
        args = (
            42, 0, region.lo(0), region.m, lo, hi, cum, scale, limit,
            beta_lo, beta_hi - beta_lo + 1, 1_000_000,
        )
        print(f"{name}: {n:,} trajectories")
        py = bench(_mckernel_py, "python", n, args)
        if _mckernel is not None:
            cy = bench(_mckernel, "cython", n, args)
            if not (
                np.array_equal(py[0], cy[0]) and py[1] == cy[1] and py[2] == cy[2]
            ):
                print("  ERROR: kernels disagree!")
                return 1
            print(f"  bit-identical outputs, speedup {py[3] / cy[3]:.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
