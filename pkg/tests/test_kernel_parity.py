"""The compiled kernel must be bitwise identical to the pure one."""

import random
from fractions import Fraction

import pytest

from msn._kernel import pure

speed = pytest.importorskip("msn._kernel._speed")


def random_int_matrix(rng, m, n, lo=-9, hi=9):
    return [[rng.randint(lo, hi) for _ in range(n)] for _ in range(m)]


def test_echelon_parity():
    rng = random.Random(2024)
    for _ in range(200):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        rows = random_int_matrix(rng, m, n)
        assert pure.echelon_int(rows) == speed.echelon_int(rows)


def test_pivot_and_bland_parity():
    rng = random.Random(4048)
    for _ in range(120):
        m, n = rng.randint(1, 5), rng.randint(2, 7)
        tab_a = random_int_matrix(rng, m + 1, n)
        # make a positive pivot element available
        r, jc = rng.randrange(m), rng.randrange(n - 1)
        tab_a[r][jc] = abs(tab_a[r][jc]) + 1
        tab_b = [row[:] for row in tab_a]
        basis_a = list(range(m))
        basis_b = basis_a[:]
        da = pure.pivot(tab_a, 1, basis_a, r, jc)
        db = speed.pivot(tab_b, 1, basis_b, r, jc)
        assert (da, tab_a, basis_a) == (db, tab_b, basis_b)


def test_solve_lp_identical_across_backends(monkeypatch):
    import msn._kernel as kernel
    from msn.lp import solve_lp

    rng = random.Random(11)
    instances = []
    for _ in range(40):
        dim = rng.randint(1, 3)
        cons = []
        for i in range(dim):
            e = [Fraction(0)] * dim
            e[i] = Fraction(1)
            cons.append((tuple(e), Fraction(rng.randint(1, 3))))
            e2 = [Fraction(0)] * dim
            e2[i] = Fraction(-1)
            cons.append((tuple(e2), Fraction(rng.randint(1, 3))))
        for _ in range(rng.randint(0, 3)):
            row = tuple(Fraction(rng.randint(-3, 3)) for _ in range(dim))
            cons.append((row, Fraction(rng.randint(0, 4))))
        obj = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(dim)]
        instances.append((obj, cons))

    results = {}
    for name, mod in (("pure", pure), ("speed", speed)):
        monkeypatch.setattr(kernel, "bland_min", mod.bland_min)
        monkeypatch.setattr(kernel, "pivot", mod.pivot)
        monkeypatch.setattr(kernel, "echelon_int", mod.echelon_int)
        out = []
        for obj, cons in instances:
            res = solve_lp(obj, cons)
            out.append((res.value, res.point, res.active))
        results[name] = out
    assert results["pure"] == results["speed"]
