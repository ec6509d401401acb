"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each row runs one workload under both backends (``kernels.set_backend``),
checks that the results agree, and reports the best of N wall times.
The numba column excludes compilation: every workload runs once first.
"""
import argparse
import time

import numpy as np

from p2q import kernels
from p2q.aut import brute_aut
from p2q.catalog import GroupSpec, build
from p2q.groups import is_isomorphic
from p2q.search import count_automorphisms


def _table(spec):
    return np.ascontiguousarray(build(spec).table)


def workloads():
    T147 = _table(GroupSpec(9, 7, 3))
    T605 = _table(GroupSpec(8, 11, 5, 2))
    A = brute_aut(build(GroupSpec(10, 5, 3)))
    G8, G8b = build(GroupSpec(8, 11, 5, 2)), build(GroupSpec(8, 11, 5, 3))
    return [
        ("associativity, order 147 (full)", lambda: kernels.assoc_violation(T147)),
        ("associativity, order 605 (sampled 10n^2)", lambda: kernels.assoc_violation_sampled(T605, 10 * 605**2)),
        ("element orders, order 605", lambda: kernels.element_orders(T605, 0)[0].sum()),
        ("Aut composition table, 1200 x 1200", lambda: int(kernels.compose_table(A.images, A.base_gens, A.keys, A.radix).sum())),
        ("count Aut, type 9 (7,3)", lambda: count_automorphisms(build(GroupSpec(9, 7, 3)))),
        ("count Aut, type 7 (7,3)", lambda: count_automorphisms(build(GroupSpec(7, 7, 3)))),
        ("isomorphism, type 8 s=2 vs s=3 at (11,5)", lambda: is_isomorphic(G8, G8b)[0]),
    ]


def best_of(fn, repeat):
    out, times = None, []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return out, min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    rows = []
    for name, fn in workloads():
        res = {}
        for backend in ("numba", "numpy"):
            kernels.set_backend(backend)
            try:
                fn()  # warm-up (and JIT compile)
                res[backend] = best_of(fn, args.repeat)
            finally:
                kernels.set_backend(None)
        if res["numba"][0] != res["numpy"][0]:
            raise SystemExit(f"backends disagree on {name!r}: {res['numba'][0]} vs {res['numpy'][0]}")
        nb, np_ = res["numba"][1], res["numpy"][1]
        rows.append((name, f"{nb * 1e3:.1f}", f"{np_ * 1e3:.1f}", f"{np_ / nb:.1f}x"))
    head = ("workload", "numba ms", "numpy ms", "speedup")
    widths = [max(len(r[i]) for r in rows + [head]) for i in range(4)]
    for r in [head] + rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)))


if __name__ == "__main__":
    main()
