"""Polytopes with exact H- and V-representations.

Conversion in both directions runs the double description method on a
homogenising cone: vertex enumeration inserts constraints incrementally
starting from a simplicial cone, and facet enumeration applies the same
ray machinery to the polar cone (lineality there turns into implicit
equalities, emitted as opposite inequality pairs).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from msn import _kernel
from msn.errors import DimensionMismatch, UnboundedPolyhedron
from msn.linalg import Matrix, Vec, coordinate_complement, dot, frac, int_rows, vec

Ineq = tuple[Vec, Fraction]  # a . x <= b


def _primitive_int(vals: list[int]) -> tuple[int, ...]:
    g = 0
    for v in vals:
        g = gcd(g, v)
    if g == 0:
        return tuple(vals)
    return tuple(v // g for v in vals)


def canon_ineq(a, b) -> Ineq:
    """Scale a . x <= b by a positive rational to primitive integers."""
    a = vec(a)
    b = frac(b)
    m = lcm(*(f.denominator for f in a), b.denominator) if a else b.denominator
    ints = [int(f * m) for f in a] + [int(b * m)]
    prim = _primitive_int(ints)
    return tuple(Fraction(x) for x in prim[:-1]), Fraction(prim[-1])


def _cone_rays(rows: list[list[int]], dim: int) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone {y : row . y >= 0 for all rows}.

    Requires the rows to have full rank ``dim`` (pointed cone).  Double
    description: start from a simplicial subcone, insert the remaining
    constraints, recomputing tight sets exactly at every step.
    """
    rank, _, _ = _kernel.echelon_int(rows)
    if rank < dim:
        raise ValueError("cone is not pointed")
    # Greedy choice of dim independent rows for the simplicial start.
    chosen: list[int] = []
    cur: list[list[int]] = []
    for i, r in enumerate(rows):
        cand = cur + [list(r)]
        rk, _, _ = _kernel.echelon_int(cand)
        if rk > len(cur):
            chosen.append(i)
            cur = cand
        if len(cur) == dim:
            break
    rest = [i for i in range(len(rows)) if i not in set(chosen)]
    order = chosen + rest

    B = Matrix.from_rows([[Fraction(x) for x in rows[i]] for i in chosen])
    from msn.linalg import inverse

    Binv = inverse(B)
    rays: list[tuple[int, ...]] = []
    for j in range(dim):
        col = [Binv.entries[i][j] for i in range(dim)]
        m = lcm(*(f.denominator for f in col))
        rays.append(_primitive_int([int(f * m) for f in col]))

    processed = [rows[i] for i in chosen]

    def tight_set(ray) -> frozenset[int]:
        return frozenset(k for k, row in enumerate(processed)
                         if sum(a * x for a, x in zip(row, ray)) == 0)

    tights = {r: tight_set(r) for r in rays}

    for idx in rest:
        row = rows[idx]
        vals = {r: sum(a * x for a, x in zip(row, r)) for r in rays}
        plus = [r for r in rays if vals[r] > 0]
        zero = [r for r in rays if vals[r] == 0]
        minus = [r for r in rays if vals[r] < 0]
        new_rays: list[tuple[int, ...]] = []
        if minus and plus:
            for p in plus:
                tp = tights[p]
                for q in minus:
                    common = tp & tights[q]
                    if len(common) < dim - 2:
                        continue
                    sub = [processed[k] for k in sorted(common)]
                    rk, _, _ = _kernel.echelon_int(sub) if sub else (0, [], [])
                    if rk != dim - 2:
                        continue
                    comb = [vals[p] * qx - vals[q] * px for px, qx in zip(p, q)]
                    new_rays.append(_primitive_int(comb))
        processed.append(row)
        rays = plus + zero + new_rays
        # Dedupe (combinations can coincide in degenerate positions).
        seen = {}
        for r in rays:
            seen.setdefault(r, None)
        rays = list(seen)
        tights = {r: tight_set(r) for r in rays}
    return rays


def polytope_vertices(ineqs: list[Ineq], dim: int) -> list[Vec]:
    """All vertices of {x : a . x <= b}; raises if the set is unbounded."""
    if dim == 0:
        return [()] if all(b >= 0 for _, b in ineqs) else []
    crows = []
    for a, b in ineqs:
        crows.append([b] + [-x for x in a])
    crows.append([Fraction(1)] + [Fraction(0)] * dim)
    irows = int_rows(crows)
    rank, _, _ = _kernel.echelon_int(irows)
    if rank < dim + 1:
        # The homogenising cone has lineality: the polytope is empty or
        # contains a line.  Decide exactly via feasibility.
        from msn.lp import lp_feasible

        if lp_feasible(ineqs):
            raise UnboundedPolyhedron("feasible set contains a line")
        return []
    rays = _cone_rays(irows, dim + 1)
    verts = []
    for r in rays:
        t = r[0]
        if t < 0:
            continue
        if t == 0:
            raise UnboundedPolyhedron("recession ray found during conversion")
        verts.append(tuple(Fraction(x, t) for x in r[1:]))
    return sorted(set(verts))


def polytope_facets(points: list[Vec], dim: int) -> list[Ineq]:
    """Canonical irredundant H-representation of conv(points).

    Lower-dimensional hulls yield implicit equalities, emitted as pairs of
    opposite inequalities.
    """
    if not points:
        raise ValueError("cannot convert an empty vertex set")
    if dim == 0:
        return []
    D = dim + 1
    gens = [[Fraction(1)] + list(p) for p in points]
    grows = int_rows(gens)
    gmat = Matrix.from_rows([[Fraction(x) for x in r] for r in grows])
    from msn.linalg import nullspace

    lin = nullspace(gmat)  # y with gen . y = 0: implicit equalities
    out: list[Ineq] = []
    for y in lin:
        c0, c = y[0], y[1:]
        out.append(canon_ineq(c, -c0))
        out.append(canon_ineq(tuple(-x for x in c), c0))
    comp = coordinate_complement(lin, D)
    k = len(comp)
    # Constraint matrix of the polar cone restricted to the complement.
    sub = [[row[j] for j in comp] for row in grows]
    rays = _cone_rays(sub, k)
    for rz in rays:
        y = [Fraction(0)] * D
        for zi, j in zip(rz, comp):
            y[j] = Fraction(zi)
        c0, c = y[0], tuple(y[1:])
        if all(x == 0 for x in c):
            continue
        out.append(canon_ineq(tuple(-x for x in c), c0))
    return sorted(set(out))


def canon_rep(v: Vec) -> Vec:
    """Representative of {v, -v} with first nonzero coordinate positive."""
    for x in v:
        if x != 0:
            return v if x > 0 else tuple(-y for y in v)
    return v


@dataclass(frozen=True)
class Polytope:
    """Bounded rational polytope; at least one representation present.

    When ``symmetric`` is set the vertex list stores one canonical
    representative per +/- pair.
    """

    dim: int
    hrep: tuple[Ineq, ...] | None = None
    vrep: tuple[Vec, ...] | None = None
    symmetric: bool = False

    def __post_init__(self):
        if self.hrep is None and self.vrep is None:
            raise DimensionMismatch("polytope needs at least one representation")
        for a, _ in self.hrep or ():
            if len(a) != self.dim:
                raise DimensionMismatch("facet arity != dim")
        for v in self.vrep or ():
            if len(v) != self.dim:
                raise DimensionMismatch("vertex arity != dim")

    def vertices_full(self) -> list[Vec]:
        """Vertex list with +/- pairs expanded for symmetric storage."""
        if self.vrep is None:
            raise ValueError("no V-representation")
        if not self.symmetric:
            return list(self.vrep)
        out = set()
        for v in self.vrep:
            out.add(v)
            out.add(tuple(-x for x in v))
        return sorted(out)

    @staticmethod
    def from_h(ineqs, dim: int, symmetric: bool = False) -> "Polytope":
        canon = tuple(sorted(set(canon_ineq(a, b) for a, b in ineqs)))
        return Polytope(dim, hrep=canon, vrep=None, symmetric=symmetric)

    @staticmethod
    def from_v(points, dim: int, symmetric: bool = False) -> "Polytope":
        pts = [vec(p) for p in points]
        if symmetric:
            canon = tuple(sorted(set(canon_rep(p) for p in pts)))
        else:
            canon = tuple(sorted(set(pts)))
        return Polytope(dim, hrep=None, vrep=canon, symmetric=symmetric)


def dd_convert(p: Polytope) -> Polytope:
    """Complete and canonicalise both representations.

    Output vertex lists contain extreme points only, facet lists are
    irredundant, both sorted; converting twice is the identity.
    """
    if p.vrep is not None:
        pts = p.vertices_full()
        facets = polytope_facets(pts, p.dim) if pts else None
        if facets is None:
            raise ValueError("empty polytope has no H-representation")
        verts = polytope_vertices(facets, p.dim)
    else:
        verts = polytope_vertices(list(p.hrep), p.dim)
        facets = polytope_facets(verts, p.dim) if verts else list(p.hrep)
    if p.symmetric:
        vstore = tuple(sorted(set(canon_rep(v) for v in verts)))
    else:
        vstore = tuple(verts)
    return Polytope(p.dim, hrep=tuple(sorted(set(facets))), vrep=vstore, symmetric=p.symmetric)


def support_value(p: Polytope, direction: Vec) -> Fraction:
    """max of direction . x over the polytope (vertex max; exact)."""
    verts = p.vertices_full() if p.vrep is not None else polytope_vertices(list(p.hrep), p.dim)
    if not verts:
        raise ValueError("support of empty polytope")
    return max(dot(v, direction) for v in verts)
