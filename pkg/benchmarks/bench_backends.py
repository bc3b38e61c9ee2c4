"""Compare the compiled and pure-Python kernel backends.

Times the hot special-function kernels on fixed argument grids and reports
per-call cost and speedup.  Run from the repo root:

    python3 benchmarks/bench_backends.py
"""

import math
import time

from lrlvec import backend


def _grid(lo, hi, n):
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]

S_GRID = _grid(-0.98, 0.98, 200)
KAPPA_GRID = _grid(0.05, 0.95, 40)
U_GRID = _grid(-8.0, 8.0, 400)
X_GRID = _grid(0.05, 50.0, 400)


def bench_ellip_f(mod):
    acc = 0.0
    for kap in KAPPA_GRID:
        for s in S_GRID:
            acc += mod.ellip_f_kernel(s, kap)
    return acc, len(KAPPA_GRID) * len(S_GRID)


def bench_ellip_pi(mod):
    acc = 0.0
    for kap in KAPPA_GRID:
        for s in S_GRID:
            acc += mod.ellip_pi_kernel(s, 0.3, kap)
    return acc, len(KAPPA_GRID) * len(S_GRID)


def bench_jacobi_am(mod):
    acc = 0.0
    for kap in KAPPA_GRID:
        for u in U_GRID:
            acc += mod.jacobi_am_kernel(u, kap)
    return acc, len(KAPPA_GRID) * len(U_GRID)


def bench_sici(mod):
    acc = 0.0
    for x in X_GRID:
        acc += mod.si_kernel(x) + mod.ci_kernel(x)
    return acc, 2 * len(X_GRID)


CASES = [
    ("ellip_f", bench_ellip_f),
    ("ellip_pi", bench_ellip_pi),
    ("jacobi_am", bench_jacobi_am),
    ("si+ci", bench_sici),
]


def _time(fn, mod, min_seconds=0.2):
    # Repeat until the total wall time is long enough to trust.
    reps = 1
    while True:
        t0 = time.perf_counter()
        for _ in range(reps):
            acc, calls = fn(mod)
        dt = time.perf_counter() - t0
        if dt >= min_seconds:
            return dt / (reps * calls), acc
        reps = max(reps * 2, int(reps * min_seconds / max(dt, 1e-9)))


def main():
    backends = backend.available_backends()
    if "cython" not in backends:
        print("compiled backend not built; only timing the pure-Python kernels")
    names = sorted(backends)
    print("active backend: %s" % backend.BACKEND_NAME)
    print()
    header = "%-12s" % "kernel" + "".join("%16s" % ("%s (ns)" % n) for n in names)
    if len(names) == 2:
        header += "%10s" % "speedup"
    print(header)
    for label, fn in CASES:
        per_call = {}
        checksums = {}
        for n in names:
            per_call[n], checksums[n] = _time(fn, backends[n])
        row = "%-12s" % label + "".join("%16.1f" % (per_call[n] * 1e9) for n in names)
        if len(names) == 2:
            row += "%9.1fx" % (per_call["python"] / per_call["cython"])
        print(row)
        vals = list(checksums.values())
        if len(vals) == 2 and not math.isclose(vals[0], vals[1], rel_tol=1e-12):
            print("   checksum mismatch: %r" % checksums)


if __name__ == "__main__":
    main()
