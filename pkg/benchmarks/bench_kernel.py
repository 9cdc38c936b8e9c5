"""Benchmark: compiled kernel vs pure-Python fallback.

Times the two hot primitives on realistic workloads (random echelon
reductions and the full exact-LP path with the backend swapped in place)
and prints a small table.  Run from the repository root:

    python3 benchmarks/bench_kernel.py
"""

import random
import time
from fractions import Fraction

import msn._kernel as kernel
from msn._kernel import pure

try:
    from msn._kernel import _speed as speed
except ImportError:
    speed = None


def echelon_workload(rng, count=400):
    out = []
    for _ in range(count):
        m, n = rng.randint(3, 8), rng.randint(3, 8)
        out.append([[rng.randint(-50, 50) for _ in range(n)] for _ in range(m)])
    return out


def lp_workload(rng, count=120):
    out = []
    for _ in range(count):
        dim = rng.randint(2, 5)
        cons = []
        for i in range(dim):
            e = [Fraction(0)] * dim
            e[i] = Fraction(1)
            cons.append((tuple(e), Fraction(rng.randint(1, 5))))
            e2 = [Fraction(0)] * dim
            e2[i] = Fraction(-1)
            cons.append((tuple(e2), Fraction(rng.randint(1, 5))))
        for _ in range(rng.randint(2, 8)):
            row = tuple(Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(dim))
            cons.append((row, Fraction(rng.randint(0, 6))))
        obj = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(dim)]
        out.append((obj, cons))
    return out


def gauge_workload(rng, count=30):
    """Dual-norm evaluations against large functional families: the shape
    dominating embedding certificates on grown amalgams."""
    out = []
    for _ in range(count):
        dim = rng.randint(6, 8)
        fam = [tuple(Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(dim))
               for _ in range(rng.randint(40, 90))]
        fam = [f for f in fam if any(x != 0 for x in f)]
        psi = tuple(Fraction(rng.randint(-4, 4)) for _ in range(dim))
        out.append((psi, fam))
    return out


def time_gauge(mod, work):
    from msn.lp import gauge_scale

    kernel.bland_min = mod.bland_min
    kernel.pivot = mod.pivot
    kernel.echelon_int = mod.echelon_int
    t0 = time.perf_counter()
    for psi, fam in work:
        gauge_scale(psi, fam)
    return time.perf_counter() - t0


def time_echelon(mod, work):
    t0 = time.perf_counter()
    for rows in work:
        mod.echelon_int(rows)
    return time.perf_counter() - t0


def time_lp(mod, work):
    from msn.lp import solve_lp
    from msn.errors import Infeasible, Unbounded

    kernel.bland_min = mod.bland_min
    kernel.pivot = mod.pivot
    kernel.echelon_int = mod.echelon_int
    t0 = time.perf_counter()
    for obj, cons in work:
        try:
            solve_lp(obj, cons)
        except (Infeasible, Unbounded):
            pass
    return time.perf_counter() - t0


def main():
    rng = random.Random(20250808)
    ech = echelon_workload(rng)
    lps = lp_workload(rng)
    gauges = gauge_workload(rng)
    rows = []
    t_pure = (time_echelon(pure, ech), time_lp(pure, lps), time_gauge(pure, gauges))
    rows.append(("pure",) + t_pure)
    if speed is not None:
        t_fast = (time_echelon(speed, ech), time_lp(speed, lps), time_gauge(speed, gauges))
        rows.append(("compiled",) + t_fast)
    print(f"{'backend':<10} {'echelon (s)':>12} {'small LP (s)':>13} {'gauge LP (s)':>13}")
    for name, te, tl, tg in rows:
        print(f"{name:<10} {te:>12.3f} {tl:>13.3f} {tg:>13.3f}")
    if speed is not None:
        print(f"{'speedup':<10} {t_pure[0] / t_fast[0]:>11.2f}x {t_pure[1] / t_fast[1]:>12.2f}x "
              f"{t_pure[2] / t_fast[2]:>12.2f}x")
    else:
        print("compiled backend not built; run: python3 setup.py build_ext --inplace")


if __name__ == "__main__":
    main()
