#!/usr/bin/env python3
"""Benchmark the GF(2) multiply kernels (compiled vs pure Python).

Workloads are the package's real hot paths: criterion-polynomial table
sweeps and large Dickson-quotient powers. Run:

    python3 benchmarks/bench_gf2.py
"""

import time

from equibox import certifier, gf2poly
from equibox.dickson import dickson_product


def _clear_caches():
    certifier.criterion_polynomial.cache_clear()
    certifier._quotient_power.cache_clear()


def bench_table_m3():
    _clear_caches()
    t0 = time.perf_counter()
    certifier.equipartition_table(3, 64)
    return time.perf_counter() - t0


def bench_table_m4():
    _clear_caches()
    t0 = time.perf_counter()
    certifier.equipartition_table(4, 32)
    return time.perf_counter() - t0


def bench_quotient_power():
    # 31 = 0b11111: four square-and-multiply products with a growing factor
    q = dickson_product(4).divide_by_monomial((1, 0, 0, 0))
    t0 = time.perf_counter()
    p = q ** 31
    dt = time.perf_counter() - t0
    return dt, len(p)


WORKLOADS = [
    ("table m=3, l<=64", lambda: (bench_table_m3(), None)),
    ("table m=4, l<=32", lambda: (bench_table_m4(), None)),
    ("(P4/x1)^31", bench_quotient_power),
]


def main():
    backends = ["pure"]
    try:
        gf2poly.set_active_backend("cython")
        backends.append("cython")
    except ImportError:
        print("compiled kernel not built; only the pure backend runs")

    results = {}
    for backend in backends:
        gf2poly.set_active_backend(backend)
        for name, fn in WORKLOADS:
            best = None
            extra = None
            for _ in range(3):
                dt, extra = fn()
                best = dt if best is None else min(best, dt)
            results[(backend, name)] = best
            suffix = " (%d terms)" % extra if extra else ""
            print("%-8s %-18s %8.1f ms%s" % (backend, name, best * 1e3, suffix))

    if "cython" in backends:
        print()
        for name, _ in WORKLOADS:
            ratio = results[("pure", name)] / results[("cython", name)]
            print("speedup %-18s %.1fx" % (name, ratio))
    gf2poly.set_active_backend(backends[-1])


if __name__ == "__main__":
    main()
