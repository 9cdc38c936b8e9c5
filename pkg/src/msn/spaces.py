"""Multi-seminormed spaces and their structural invariants.

A space is a finite-dimensional rational coordinate space carrying a
nonempty finite sequence of polyhedral seminorms, optionally flagged as
graded (pointwise non-decreasing in the level index).  The graded flag is
validated on construction via exact dual-ball containment.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import chain, combinations

from msn.errors import ArityMismatch, BadLength, DimensionMismatch
from msn.linalg import Matrix, Vec, nullspace, row_space_basis
from msn.seminorms import PolyhedralSeminorm, _in_symmetric_hull


def _level_dominates(lo: PolyhedralSeminorm, hi: PolyhedralSeminorm) -> bool:
    """Exact check that hi >= lo pointwise (dual-ball containment)."""
    others = list(hi.functionals)
    return all(_in_symmetric_hull(f, others) for f in lo.functionals)


@dataclass(frozen=True)
class MultiSpace:
    """dim-dimensional space with seminorm levels 0..length-1."""

    seminorms: tuple[PolyhedralSeminorm, ...]
    graded: bool = False

    def __post_init__(self):
        if not self.seminorms:
            raise BadLength("a space carries at least one seminorm")
        d = self.seminorms[0].dim
        if any(s.dim != d for s in self.seminorms):
            raise DimensionMismatch("seminorm ambient dimensions differ")

    @staticmethod
    def make(seminorms, graded: bool = False) -> "MultiSpace":
        sp = MultiSpace(tuple(seminorms), graded)
        if graded and not is_graded_sequence(sp.seminorms):
            raise ValueError("space flagged graded but levels are not non-decreasing")
        return sp

    @property
    def dim(self) -> int:
        return self.seminorms[0].dim

    @property
    def length(self) -> int:
        return len(self.seminorms)

    def seminorm(self, n: int) -> PolyhedralSeminorm:
        return self.seminorms[n]

    def eval(self, n: int, x) -> Fraction:
        return self.seminorms[n](x)


def is_graded_sequence(seminorms) -> bool:
    return all(_level_dominates(seminorms[n], seminorms[n + 1]) for n in range(len(seminorms) - 1))


def line_space(*scales) -> MultiSpace:
    """1-dimensional space whose level-n seminorm is scales[n] * |t|."""
    sems = []
    for c in scales or (1,):
        c = Fraction(c)
        sems.append(PolyhedralSeminorm.from_functionals(1, [(c,)]) if c != 0
                    else PolyhedralSeminorm.zero(1))
    return MultiSpace.make(tuple(sems))


def trivial_space(length: int = 1) -> MultiSpace:
    """The zero-dimensional space with the requested number of levels."""
    return MultiSpace(tuple(PolyhedralSeminorm.zero(0) for _ in range(length)), graded=True)


@dataclass(frozen=True)
class KernelInvariant:
    """dim of the joint kernel of every subset of levels (alpha function)."""

    length: int
    entries: tuple[tuple[tuple[int, ...], int], ...]

    def alpha(self, subset) -> int:
        key = tuple(sorted(subset))
        for k, v in self.entries:
            if k == key:
                return v
        raise KeyError(key)

    def as_dict(self) -> dict:
        return {",".join(str(i) for i in k): v for k, v in self.entries}


def _subsets(n: int):
    return chain.from_iterable(combinations(range(n), r) for r in range(n + 1))


@lru_cache(maxsize=None)
def invariant_alpha(X: MultiSpace) -> KernelInvariant:
    entries = []
    for s in _subsets(X.length):
        rows = []
        for k in s:
            rows.extend(X.seminorms[k].functionals)
        if not rows:
            entries.append((tuple(s), X.dim))
        else:
            entries.append((tuple(s), len(nullspace(Matrix.from_rows(rows)))))
    return KernelInvariant(X.length, tuple(entries))


def joint_kernel(X: MultiSpace, levels=None) -> list[Vec]:
    rows = []
    for k in (range(X.length) if levels is None else levels):
        rows.extend(X.seminorms[k].functionals)
    if not rows:
        return list(Matrix.identity(X.dim).entries)
    return nullspace(Matrix.from_rows(rows))


def is_separated(X: MultiSpace) -> bool:
    return not joint_kernel(X)


def extend_with_norm(X: MultiSpace) -> MultiSpace:
    """Append a norm level: coordinate sup norm, or its running max if graded."""
    linf = PolyhedralSeminorm.linf(X.dim)
    if X.graded:
        last = X.seminorms[-1]
        new = PolyhedralSeminorm.from_functionals(
            X.dim, tuple(last.functionals) + tuple(linf.functionals))
        return MultiSpace.make(X.seminorms + (new,), graded=True)
    return MultiSpace.make(X.seminorms + (linf,), graded=False)


def truncate(X: MultiSpace, k: int) -> MultiSpace:
    if not 1 <= k <= X.length:
        raise BadLength(f"truncation length {k} outside 1..{X.length}")
    sems = X.seminorms[:k]
    graded = X.graded or is_graded_sequence(sems)
    return MultiSpace(sems, graded)


def graded_closure(X: MultiSpace) -> MultiSpace:
    """Replace level n by the running max of levels <= n."""
    sems = []
    acc: tuple[Vec, ...] = ()
    for s in X.seminorms:
        acc = acc + tuple(s.functionals)
        sems.append(PolyhedralSeminorm.from_functionals(X.dim, acc) if acc
                    else PolyhedralSeminorm.zero(X.dim))
    return MultiSpace(tuple(sems), graded=True)


def _pad_functionals(funcs, offset: int, total: int):
    out = []
    for f in funcs:
        row = [Fraction(0)] * total
        for j, x in enumerate(f):
            row[offset + j] = x
        out.append(tuple(row))
    return out


def product_space(factors, mode: str = "coordinate") -> MultiSpace:
    """Direct sum with coordinate or running-max seminorms.

    In coordinate mode each factor carries a single seminorm and supplies
    exactly the level matching its position; graded-max mode takes the
    running max over block seminorms.
    """
    factors = list(factors)
    if not factors:
        raise ArityMismatch("empty product")
    if len(factors) == 1:
        return factors[0]
    if mode == "coordinate":
        if any(f.length != 1 for f in factors):
            raise ArityMismatch("coordinate mode requires single-seminorm factors")
        total = sum(f.dim for f in factors)
        sems = []
        off = 0
        for f in factors:
            padded = _pad_functionals(f.seminorms[0].functionals, off, total)
            sems.append(PolyhedralSeminorm.from_functionals(total, padded, reduce=False)
                        if padded else PolyhedralSeminorm.zero(total))
            off += f.dim
        return MultiSpace(tuple(sems), graded=False)
    if mode == "graded-max":
        if any(f.length != 1 for f in factors):
            raise ArityMismatch("graded-max mode requires single-seminorm factors")
        total = sum(f.dim for f in factors)
        sems = []
        acc = []
        off = 0
        for f in factors:
            acc.extend(_pad_functionals(f.seminorms[0].functionals, off, total))
            sems.append(PolyhedralSeminorm.from_functionals(total, acc)
                        if acc else PolyhedralSeminorm.zero(total))
            off += f.dim
        return MultiSpace(tuple(sems), graded=True)
    raise ArityMismatch(f"unknown product mode {mode!r}")


def pullback_space(X: MultiSpace, lift: Matrix, graded: bool | None = None) -> MultiSpace:
    """Structure induced on a subspace so its inclusion is exactly isometric.

    ``lift`` is a dim(X) x m matrix with independent columns; level n of the
    result evaluates each functional composed with the inclusion.
    """
    m = lift.cols
    if lift.rows != X.dim:
        raise DimensionMismatch("lift target dimension != space dimension")
    if len(row_space_basis(list(lift.transpose().entries))) != m:
        raise DimensionMismatch("lift columns are dependent")
    sems = []
    for s in X.seminorms:
        restricted = [tuple(sum(f[i] * lift.entries[i][j] for i in range(X.dim)) for j in range(m))
                      for f in s.functionals]
        restricted = [f for f in restricted if any(x != 0 for x in f)]
        sems.append(PolyhedralSeminorm.from_functionals(m, restricted)
                    if restricted else PolyhedralSeminorm.zero(m))
    g = X.graded if graded is None else graded
    return MultiSpace(tuple(sems), graded=g and is_graded_sequence(tuple(sems)))
