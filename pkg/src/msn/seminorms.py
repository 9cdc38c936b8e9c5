"""Polyhedral seminorms: evaluation, kernels, duality, quotients.

A seminorm is stored as the canonical finite family of functionals whose
absolute values it maximises.  The list keeps one representative per +/-
pair, sorted, with redundant members (those inside the convex hull of the
others and their negatives) removed by exact LP membership tests.  The
empty family encodes the zero seminorm.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from msn.errors import DimensionMismatch
from msn.linalg import Matrix, Vec, canon_vector, coordinate_complement, dot, inverse, nullspace, vec
from msn.lp import gauge_scale
from msn.polytope import Polytope, canon_rep, dd_convert, polytope_vertices


def _dominance_filter(funcs: list[Vec]) -> list[Vec]:
    """Keep only the largest multiple within each +/- direction class."""
    best: dict[Vec, Vec] = {}
    for f in funcs:
        d = canon_vector(f)
        cur = best.get(d)
        if cur is None:
            best[d] = f
            continue
        # compare |scale| against the primitive direction
        j = next(i for i, x in enumerate(d) if x != 0)
        if abs(f[j]) > abs(cur[j]):
            best[d] = f
    return sorted(best.values())


def _in_symmetric_hull(phi: Vec, others: list[Vec]) -> bool:
    """Exact test: phi in conv(others and their negatives)?"""
    if not others:
        return all(x == 0 for x in phi)
    scale = gauge_scale(phi, others)
    return scale is not None and scale <= 1


@dataclass(frozen=True)
class PolyhedralSeminorm:
    """max over stored functionals of the absolute pairing with x."""

    dim: int
    functionals: tuple[Vec, ...]

    @staticmethod
    def from_functionals(dim: int, functionals, reduce: bool = True) -> "PolyhedralSeminorm":
        funcs = []
        for f in functionals:
            f = vec(f)
            if len(f) != dim:
                raise DimensionMismatch("functional arity != dim")
            if all(x == 0 for x in f):
                raise ValueError("zero functionals are not stored; use the empty list")
            funcs.append(canon_rep(f))
        funcs = _dominance_filter(sorted(set(funcs)))
        if reduce and len(funcs) > 1:
            kept = list(funcs)
            i = 0
            while i < len(kept):
                others = kept[:i] + kept[i + 1:]
                if _in_symmetric_hull(kept[i], others):
                    kept.pop(i)
                else:
                    i += 1
            funcs = kept
        return PolyhedralSeminorm(dim, tuple(sorted(funcs)))

    @staticmethod
    def zero(dim: int) -> "PolyhedralSeminorm":
        return PolyhedralSeminorm(dim, ())

    @staticmethod
    def linf(dim: int) -> "PolyhedralSeminorm":
        eye = Matrix.identity(dim)
        return PolyhedralSeminorm(dim, tuple(eye.entries))

    def __call__(self, x) -> Fraction:
        x = vec(x)
        if len(x) != self.dim:
            raise DimensionMismatch("vector arity != dim")
        if not self.functionals:
            return Fraction(0)
        return max(abs(dot(f, x)) for f in self.functionals)

    def is_zero(self) -> bool:
        return not self.functionals


def eval_seminorm(s: PolyhedralSeminorm, x) -> Fraction:
    return s(x)


def seminorm_kernel(s: PolyhedralSeminorm) -> list[Vec]:
    """Canonical basis of {x : s(x) = 0}."""
    if not s.functionals:
        return list(Matrix.identity(s.dim).entries)
    return nullspace(Matrix.from_rows(s.functionals))


def dual_ball(s: PolyhedralSeminorm) -> Polytope:
    """conv of the functionals and their negatives (support function = s)."""
    if not s.functionals:
        return Polytope.from_v([tuple(Fraction(0) for _ in range(s.dim))], s.dim, symmetric=True)
    return Polytope.from_v(s.functionals, s.dim, symmetric=True)


@lru_cache(maxsize=None)
def dual_ball_facets(s: PolyhedralSeminorm) -> tuple:
    """Canonical H-representation of the dual ball."""
    return dd_convert(dual_ball(s)).hrep


@lru_cache(maxsize=None)
def unit_ball_vertices(s: PolyhedralSeminorm) -> tuple[Vec, ...]:
    """Vertices of {x : s(x) <= 1}; requires a trivial kernel."""
    if seminorm_kernel(s):
        raise ValueError("unit ball of a degenerate seminorm is unbounded")
    ineqs = []
    for f in s.functionals:
        ineqs.append((f, Fraction(1)))
        ineqs.append((tuple(-x for x in f), Fraction(1)))
    return tuple(polytope_vertices(ineqs, s.dim))


def reduce_functionals(s: PolyhedralSeminorm) -> PolyhedralSeminorm:
    """Re-canonicalise; output evaluates identically with an irredundant list."""
    return PolyhedralSeminorm.from_functionals(s.dim, s.functionals, reduce=True)


@dataclass(frozen=True)
class QuotientNorm:
    """Seminorm presented as a norm on a complement of its kernel.

    ``projection`` maps ambient coordinates onto the chosen complement
    coordinates, ``lift`` is the section sending complement coordinates to
    ambient vectors; ``norm`` has trivial kernel and
    ``norm(projection(x)) == s(x)`` for all x.
    """

    projection: Matrix
    lift: Matrix
    norm: PolyhedralSeminorm


@lru_cache(maxsize=None)
def quotient_norm(s: PolyhedralSeminorm) -> QuotientNorm:
    """Quotient by the kernel along the lex-first coordinate complement."""
    ker = seminorm_kernel(s)
    d = s.dim
    comp = coordinate_complement(ker, d)
    m = len(comp)
    cols: list[Vec] = [k for k in ker] + [tuple(Fraction(1 if i == j else 0) for i in range(d)) for j in comp]
    M = Matrix.from_rows(cols).transpose()
    Minv = inverse(M)
    proj = Matrix(tuple(Minv.entries[len(ker) + i] for i in range(m)))
    lift = Matrix(tuple(tuple(Fraction(1 if i == comp[jj] else 0) for jj in range(m)) for i in range(d)))
    restricted = []
    for f in s.functionals:
        restricted.append(tuple(f[j] for j in comp))
    norm = PolyhedralSeminorm.from_functionals(m, restricted, reduce=True)
    return QuotientNorm(projection=proj, lift=lift, norm=norm)
