import random
from fractions import Fraction

import pytest

from msn.errors import Infeasible, Unbounded
from msn.linalg import dot
from msn.lp import solve_lp

from oracles import brute_lp_min, piecewise_min_1d

F = Fraction


def test_absolute_value_epigraph():
    # minimise t subject to -t <= x <= t, x = 3
    res = solve_lp(
        [0, 1],
        [
            ((F(1), F(-1)), F(0)),   # x - t <= 0
            ((F(-1), F(-1)), F(0)),  # -x - t <= 0
            ((F(1), F(0)), F(3)),    # x <= 3
            ((F(-1), F(0)), F(-3)),  # -x <= -3
        ],
    )
    assert res.value == 3
    assert res.point[0] == 3


def test_simple_nonnegative_min():
    res = solve_lp([1], [((F(-1),), F(0))])
    assert res.value == 0


def test_piecewise_linear_epigraph_matches_breakpoint_oracle():
    # minimise |1-x| + |-1+x| + (1/2)|x| in epigraph form.
    pieces = [(F(-1), F(1)), (F(1), F(-1)), (F(1, 2), F(0))]
    expected, argmin = piecewise_min_1d(pieces)
    assert (expected, argmin) == (F(1, 2), F(1))
    # epigraph variables t1,t2,t3 for the three terms, variable x first
    cons = []
    for k, (a, b) in enumerate(pieces):
        for sgn in (1, -1):
            row = [F(0)] * 4
            row[0] = F(sgn) * a
            row[1 + k] = F(-1)
            cons.append((tuple(row), -F(sgn) * b))
    res = solve_lp([F(0), F(1), F(1), F(1)], cons)
    assert res.value == expected


def test_infeasible_and_unbounded_are_distinct():
    with pytest.raises(Infeasible):
        solve_lp([1], [((F(1),), F(0)), ((F(-1),), F(-1))])  # x<=0, x>=1
    with pytest.raises(Unbounded):
        solve_lp([1], [((F(1),), F(1))])  # x <= 1, min x unbounded


def test_active_set_reported():
    res = solve_lp([F(-1), F(-1)], [((F(1), F(0)), F(1)), ((F(0), F(1)), F(1)),
                                    ((F(-1), F(0)), F(0)), ((F(0), F(-1)), F(0))])
    assert res.point == (F(1), F(1))
    assert set(res.active) == {0, 1}


def _random_bounded_instance(rng, dim):
    # Box plus random cuts keeps the feasible set bounded and nonempty near 0.
    cons = []
    for i in range(dim):
        e = [F(0)] * dim
        e[i] = F(1)
        cons.append((tuple(e), F(rng.randint(1, 4))))
        e2 = [F(0)] * dim
        e2[i] = F(-1)
        cons.append((tuple(e2), F(rng.randint(1, 4))))
    for _ in range(rng.randint(0, 3)):
        row = tuple(F(rng.randint(-3, 3)) for _ in range(dim))
        cons.append((row, F(rng.randint(0, 5))))
    obj = [F(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(dim)]
    return obj, cons


def test_lp_matches_vertex_enumeration_oracle():
    rng = random.Random(20240817)
    for trial in range(60):
        dim = rng.randint(1, 3)
        obj, cons = _random_bounded_instance(rng, dim)
        try:
            res = solve_lp(obj, cons)
        except Infeasible:
            continue
        assert brute_lp_min(obj, cons) == res.value
        assert dot(tuple(obj), res.point) == res.value
        for a, b in cons:
            assert dot(a, res.point) <= b
