#!/usr/bin/env python3
"""Compare the numba kernels against the pure-numpy fallback.

Times the three hot kernels on representative workloads and prints a small
table with the speedup.  Run from the repository root:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from hyperq import kernels


def best_of(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def compose_batch_workload(rng):
    # one closure round over a rich slice: 200 known ternary operations
    # on an 8-element carrier, composed through a binary basic operation
    n, arity, m = 8, 2, 200
    length = n ** 3
    f_table = rng.integers(0, n, size=n ** arity).astype(np.int64)
    ops = rng.integers(0, n, size=(m, length)).astype(np.int64)
    combos = rng.integers(0, m, size=(m * m, arity)).astype(np.int64)
    return lambda impl: impl["compose_batch"](f_table, ops, combos, n)


def horn_scan_workload(rng):
    # a quasi-identity with two premises that holds: full scan, no early exit
    total = 2_000_000
    prem_l = rng.integers(0, 5, size=(2, total)).astype(np.int64)
    prem_r = prem_l.copy()
    prem_r[:, ::7] += 1  # premises fail on most assignments
    conc = rng.integers(0, 5, size=total).astype(np.int64)
    return lambda impl: impl["horn_scan"](prem_l, prem_r % 5, conc, conc)


def tc_scan_workload(rng):
    # a ternary operation on 12 elements that satisfies the term condition
    # (a projection), so the scan cannot exit early
    n, m = 12, 3
    table = np.repeat(np.arange(n, dtype=np.int64), n ** (m - 1))
    return lambda impl: impl["tc_scan"](table, n, m)


def tc_scan_early_workload(rng):
    # scanning a whole slice of random operations, the common failing case:
    # violations sit near the start, rewarding early exit
    n, m = 12, 3
    tables = [
        rng.integers(0, n, size=n ** m).astype(np.int64) for _ in range(200)
    ]

    def run(impl):
        for table in tables:
            impl["tc_scan"](table, n, m)

    return run


def main():
    rng = np.random.default_rng(20240811)
    numpy_impl = kernels._IMPL_NUMPY
    try:
        numba_impl = kernels._build_numba_impl()
    except ImportError:
        print("numba not available; nothing to compare")
        return

    workloads = [
        ("compose_batch", compose_batch_workload(rng)),
        ("horn_scan", horn_scan_workload(rng)),
        ("tc_scan/full", tc_scan_workload(rng)),
        ("tc_scan/early", tc_scan_early_workload(rng)),
    ]
    print("%-14s %12s %12s %9s" % ("kernel", "numpy [ms]", "numba [ms]", "speedup"))
    for name, call in workloads:
        call(numba_impl)  # compile before timing
        t_np = best_of(lambda: call(numpy_impl))
        t_nb = best_of(lambda: call(numba_impl))
        print(
            "%-14s %12.2f %12.2f %8.1fx"
            % (name, t_np * 1e3, t_nb * 1e3, t_np / t_nb)
        )


if __name__ == "__main__":
    main()
