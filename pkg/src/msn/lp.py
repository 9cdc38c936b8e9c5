"""Exact linear programming over the rationals.

``solve_lp`` minimises a rational objective over a system of inequality
constraints ``a·x <= b`` with free variables, using a two-phase simplex
with Bland's anti-cycling rule on an integer tableau (one positive common
denominator; all pivot divisions exact).  Infeasible and unbounded systems
are reported distinctly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from msn import _kernel
from msn.errors import DimensionMismatch, Infeasible, Unbounded
from msn.linalg import Vec, dot, frac, vec


@dataclass(frozen=True)
class LpResult:
    """Exact optimum with the attaining point and its tight constraints."""

    value: Fraction
    point: Vec
    active: tuple[int, ...]


def _scaled_int_row(coeffs, rhs):
    m = lcm(*(c.denominator for c in coeffs), rhs.denominator) if coeffs else rhs.denominator
    return [int(c * m) for c in coeffs], int(rhs * m)


def solve_lp(objective, constraints) -> LpResult:
    """Minimise ``objective . x`` subject to ``a . x <= b`` rows.

    ``constraints`` is an iterable of ``(a, b)`` pairs.  Raises
    ``Infeasible`` or ``Unbounded``.
    """
    c = vec(objective)
    rows = [(vec(a), frac(b)) for a, b in constraints]
    n = len(c)
    for a, _ in rows:
        if len(a) != n:
            raise DimensionMismatch("constraint arity != objective arity")
    if n == 0:
        if any(b < 0 for _, b in rows):
            raise Infeasible("no variables, negative bound")
        return LpResult(Fraction(0), (), tuple(i for i, (_, b) in enumerate(rows) if b == 0))

    m = len(rows)
    # Columns: u (n), v (n), slacks (m), then artificials, then RHS.
    art_rows = []
    body = []
    rhs_vals = []
    for i, (a, b) in enumerate(rows):
        ia, ib = _scaled_int_row(a, b)
        if ib < 0:
            ia = [-x for x in ia]
            ib = -ib
            slack = -1
            art_rows.append(i)
        else:
            slack = 1
        body.append((ia, slack, ib))
        rhs_vals.append(ib)

    nu = 2 * n
    nslack = m
    nart = len(art_rows)
    width = nu + nslack + nart + 1
    tab: list[list[int]] = []
    basis: list[int] = []
    art_col = {}
    for k, i in enumerate(art_rows):
        art_col[i] = nu + nslack + k
    for i, (ia, slack, ib) in enumerate(body):
        row = [0] * width
        for j, x in enumerate(ia):
            row[j] = x
            row[n + j] = -x
        row[nu + i] = slack
        if i in art_col:
            row[art_col[i]] = 1
        row[-1] = ib
        tab.append(row)
        basis.append(art_col[i] if i in art_col else nu + i)

    den = 1
    if nart:
        # Phase 1: minimise the sum of artificial variables.
        obj = [0] * width
        for i in art_rows:
            for j in range(width):
                obj[j] -= tab[i][j]
        for k in range(nart):
            obj[nu + nslack + k] = 0
        tab.append(obj)
        status, den = _kernel.bland_min(tab, den, basis, m, m)
        if status != _kernel.OPTIMAL:
            raise Infeasible("phase-1 unbounded (internal)")
        if tab[m][-1] != 0:
            raise Infeasible("constraint system has no solution")
        tab.pop()
        # Drive any remaining artificial variables out of the basis.
        drop_rows = []
        for i in range(m):
            if basis[i] < nu + nslack:
                continue
            jc = next((j for j in range(nu + nslack) if tab[i][j] != 0), None)
            if jc is None:
                drop_rows.append(i)
                continue
            if tab[i][jc] < 0:
                tab[i] = [-x for x in tab[i]]
            den = _kernel.pivot(tab, den, basis, i, jc)
        for i in sorted(drop_rows, reverse=True):
            tab.pop(i)
            basis.pop(i)
        m = len(basis)
        # Remove artificial columns.
        keep = list(range(nu + nslack)) + [width - 1]
        tab = [[row[j] for j in keep] for row in tab]
        width = nu + nslack + 1

    # Phase 2 objective row: costs (c, -c, 0...) expressed over the basis.
    cm = lcm(*(x.denominator for x in c))
    ci = [int(x * cm) for x in c]
    obj = [0] * width
    for j in range(n):
        obj[j] = ci[j] * den
        obj[n + j] = -ci[j] * den
    # den-scaled costs keep the tableau on one common denominator.
    for i in range(m):
        cb = 0
        if basis[i] < nu:
            cb = ci[basis[i]] if basis[i] < n else -ci[basis[i] - n]
        if cb:
            for j in range(width):
                obj[j] -= cb * tab[i][j]
    tab.append(obj)
    status, den = _kernel.bland_min(tab, den, basis, m, m)
    if status != _kernel.OPTIMAL:
        raise Unbounded("objective unbounded below on the feasible set")

    vals = {}
    for i in range(m):
        vals[basis[i]] = Fraction(tab[i][-1], den)
    x = tuple(vals.get(j, Fraction(0)) - vals.get(n + j, Fraction(0)) for j in range(n))
    value = dot(c, x)
    active = tuple(i for i, (a, b) in enumerate(rows) if dot(a, x) == b)
    return LpResult(value, x, active)


def lp_feasible(constraints) -> bool:
    """Exact feasibility of ``a . x <= b`` rows."""
    rows = list(constraints)
    if not rows:
        return True
    n = len(rows[0][0])
    try:
        solve_lp([Fraction(0)] * n, rows)
        return True
    except Infeasible:
        return False


def lp_value(objective, constraints) -> Fraction:
    return solve_lp(objective, constraints).value


def gauge_scale(psi, functionals) -> Fraction | None:
    """sup of psi over the unit ball {x : |f . x| <= 1 for all f}.

    Equals the least c with psi in c times the symmetric convex hull of
    the functionals; None when psi is outside their span (infinite sup).
    """
    psi = vec(psi)
    funcs = list(functionals)
    if not any(x != 0 for x in psi):
        return Fraction(0)
    if not funcs:
        return None
    rows = []
    for f in funcs:
        rows.append((tuple(f), Fraction(1)))
        rows.append((tuple(-x for x in f), Fraction(1)))
    try:
        res = solve_lp(tuple(-x for x in psi), rows)
    except Unbounded:
        return None
    return -res.value
