import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from msn.linalg import dot, in_span, vec
from msn.polytope import support_value
from msn.seminorms import (
    PolyhedralSeminorm,
    dual_ball,
    quotient_norm,
    reduce_functionals,
    seminorm_kernel,
    unit_ball_vertices,
)

F = Fraction
S = PolyhedralSeminorm.from_functionals


def test_eval_examples():
    s = S(2, [(1, 0), (0, 1)])
    assert s((3, -4)) == 4
    assert S(2, [(1, 1)])((1, -1)) == 0
    assert S(2, [(2, 0), (1, 1)])((1, 2)) == 3


def test_kernel_examples():
    assert seminorm_kernel(S(2, [(1, 0)])) == [(F(0), F(1))]
    assert seminorm_kernel(S(2, [(1, 0), (0, 1)])) == []
    assert seminorm_kernel(S(3, [(1, 1, 0)])) == [(F(1), F(-1), F(0)), (F(0), F(0), F(1))]


def test_reduce_examples():
    assert S(2, [(1, 0), (F(1, 2), 0)]).functionals == ((F(1), F(0)),)
    assert S(2, [(1, 0), (0, 1), (F(1, 2), F(1, 2))]).functionals == ((F(0), F(1)), (F(1), F(0)))
    assert S(2, [(1, 0)]).functionals == ((F(1), F(0)),)


def test_quotient_examples():
    q = quotient_norm(S(2, [(1, 0)]))
    assert q.norm.dim == 1
    assert q.norm(q.projection.apply((F(5), F(7)))) == 5
    s = S(2, [(1, 1)])
    q = quotient_norm(s)
    x = (F(3), F(1))
    assert q.norm(q.projection.apply(x)) == s(x) == 4


def test_dual_ball_support_examples():
    s = S(2, [(1, 0), (0, 1)])
    assert support_value(dual_ball(s), (F(3), F(-4))) == 4
    seg = S(2, [(1, 1)])
    assert dual_ball(seg).vrep == ((F(1), F(1)),)
    hexn = S(2, [(1, 1), (1, F(1, 2)), (F(1, 2), 1)])
    assert support_value(dual_ball(hexn), (F(1), F(-1))) == F(1, 2)


def test_unit_ball_vertices_hexagon():
    hexn = S(2, [(1, 1), (1, F(1, 2)), (F(1, 2), 1)])
    verts = set(unit_ball_vertices(hexn))
    assert verts == {(F(1), F(0)), (F(-1), F(0)), (F(0), F(1)), (F(0), F(-1)), (F(2), F(-2)), (F(-2), F(2))}


rat = st.fractions(min_value=-3, max_value=3, max_denominator=3)


def _rand_seminorm(draw_funcs, dim):
    funcs = [f for f in draw_funcs if any(x != 0 for x in f)]
    if not funcs:
        return PolyhedralSeminorm.zero(dim)
    return S(dim, funcs)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(rat, rat, rat), min_size=0, max_size=4),
       st.tuples(rat, rat, rat), st.tuples(rat, rat, rat), rat)
def test_seminorm_axioms(funcs, x, y, c):
    s = _rand_seminorm(funcs, 3)
    x, y = vec(x), vec(y)
    assert s(tuple(a + b for a, b in zip(x, y))) <= s(x) + s(y)
    assert s(tuple(c * a for a in x)) == abs(c) * s(x)
    assert s(x) >= 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(rat, rat, rat), min_size=1, max_size=4), st.tuples(rat, rat, rat))
def test_kernel_iff_zero_and_dual_support(funcs, x):
    s = _rand_seminorm(funcs, 3)
    x = vec(x)
    assert (s(x) == 0) == in_span(seminorm_kernel(s), x)
    if s.functionals:
        assert support_value(dual_ball(s), x) == s(x)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(rat, rat), min_size=1, max_size=5), st.tuples(rat, rat))
def test_reduce_never_changes_eval(funcs, x):
    funcs = [f for f in funcs if any(v != 0 for v in f)]
    if not funcs:
        return
    raw = PolyhedralSeminorm(2, tuple(vec(f) for f in funcs))
    red = reduce_functionals(raw)
    assert red(vec(x)) == raw(vec(x))


def test_quotient_agreement_random():
    rng = random.Random(11)
    for _ in range(30):
        dim = rng.randint(1, 3)
        funcs = []
        for _ in range(rng.randint(0, 3)):
            f = tuple(F(rng.randint(-2, 2)) for _ in range(dim))
            if any(v != 0 for v in f):
                funcs.append(f)
        s = S(dim, funcs) if funcs else PolyhedralSeminorm.zero(dim)
        q = quotient_norm(s)
        assert not seminorm_kernel(q.norm) or q.norm.dim == 0
        for _ in range(5):
            x = tuple(F(rng.randint(-4, 4)) for _ in range(dim))
            assert q.norm(q.projection.apply(x)) == s(x)
