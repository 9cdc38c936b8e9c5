"""Amalgamation of multi-seminormed spaces along near-commuting squares.

The basic construction equips the direct sum of the two target spaces
with a three-band sequence of seminorms: below the common length the
seminorm penalises the overlap through the shared space (an infimal
convolution, materialised exactly through its dual polytope), between the
two target lengths it is the block max (or running max in graded mode),
and above, the longer factor's seminorm.  Both inclusion legs are exactly
isometric and the legs nearly commute with exact certificates.

Variants: a level-count-preserving pushout that is exact below a cutoff
level and additive above it, the per-level product amalgam for separated
spaces, and the fold discharging finitely many embedding pairs at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from msn.errors import EpsNonPositive, NotAnEmbedding, NotAnNEmbedding, NotSeparated, ShapeMismatch
from msn.linalg import Matrix, Vec, frac
from msn.maps import LinearMap, compose, identity_map, is_embedding, map_distance
from msn.polytope import canon_rep, polytope_vertices
from msn.seminorms import PolyhedralSeminorm, dual_ball_facets, quotient_norm
from msn.spaces import (
    MultiSpace,
    extend_with_norm,
    is_separated,
    product_space,
    trivial_space,
    truncate,
)


@dataclass(frozen=True)
class AmalgamResult:
    """Pushout space with its two exact legs and near-commuting certificate."""

    space: MultiSpace
    leg_y: LinearMap
    leg_z: LinearMap
    bound_certificate: tuple[Fraction, ...]
    delta: Fraction
    eps: Fraction


def _pad(funcs, offset: int, total: int):
    out = []
    for f in funcs:
        row = [Fraction(0)] * total
        for j, x in enumerate(f):
            row[offset + j] = x
        out.append(tuple(row))
    return out


def _coupled_level(Y: MultiSpace, Z: MultiSpace, X: MultiSpace,
                   f: LinearMap, g: LinearMap, n: int, c: Fraction) -> PolyhedralSeminorm:
    """Materialise the overlap-penalised seminorm at level n via its dual.

    The dual ball is the set of functional pairs lying in the two dual
    balls whose pullback difference through f and g lies in c times the
    shared dual ball; its vertex list is the functional family.
    """
    dy, dz = Y.dim, Z.dim
    total = dy + dz
    rows = []
    for a, b in dual_ball_facets(Y.seminorms[n]):
        rows.append((tuple(a) + (Fraction(0),) * dz, b))
    for a, b in dual_ball_facets(Z.seminorms[n]):
        rows.append(((Fraction(0),) * dy + tuple(a), b))
    for a, b in dual_ball_facets(X.seminorms[n]):
        fa = f.matrix.apply(a) if f.matrix.entries else ()
        ga = g.matrix.apply(a) if g.matrix.entries else ()
        fa = fa if fa else (Fraction(0),) * dy
        ga = ga if ga else (Fraction(0),) * dz
        rows.append((tuple(fa) + tuple(-x for x in ga), c * b))
    verts = polytope_vertices(rows, total)
    funcs = sorted({canon_rep(v) for v in verts if any(x != 0 for x in v)})
    if not funcs:
        return PolyhedralSeminorm.zero(total)
    return PolyhedralSeminorm.from_functionals(total, funcs, reduce=False)


def primal_pushout_value(Y, Z, X, f, g, n, c, y: Vec, z: Vec) -> Fraction:
    """Independent LP evaluation of the infimal-convolution formula.

    Minimises ||u||_Y,n + ||v||_Z,n + c ||x||_X,n over decompositions
    y = u + f(x), z = v - g(x); kept separate from the dual
    materialisation as the cross-check oracle.
    """
    from msn.lp import solve_lp

    dx = X.dim
    # variables: x (dx), then epigraph bounds s >= ||y - f(x)||_Y,n,
    # t >= ||z + g(x)||_Z,n, r >= ||x||_X,n
    nv = dx + 3
    cons = []
    for phi in Y.seminorms[n].functionals:
        base = sum(phi[i] * y[i] for i in range(Y.dim))
        comp = tuple(sum(phi[i] * f.matrix.entries[i][j] for i in range(Y.dim)) for j in range(dx))
        for sgn in (1, -1):
            row = tuple(-Fraction(sgn) * x for x in comp) + (Fraction(-1), Fraction(0), Fraction(0))
            cons.append((row, -Fraction(sgn) * base))
    for psi in Z.seminorms[n].functionals:
        base = sum(psi[i] * z[i] for i in range(Z.dim))
        comp = tuple(sum(psi[i] * g.matrix.entries[i][j] for i in range(Z.dim)) for j in range(dx))
        for sgn in (1, -1):
            row = tuple(Fraction(sgn) * x for x in comp) + (Fraction(0), Fraction(-1), Fraction(0))
            cons.append((row, -Fraction(sgn) * base))
    for chi in X.seminorms[n].functionals:
        for sgn in (1, -1):
            row = tuple(Fraction(sgn) * x for x in chi) + (Fraction(0), Fraction(0), Fraction(-1))
            cons.append((row, Fraction(0)))
    for k in range(3):
        row = [Fraction(0)] * nv
        row[dx + k] = Fraction(-1)
        cons.append((tuple(row), Fraction(0)))
    obj = [Fraction(0)] * dx + [Fraction(1), Fraction(1), c]
    return solve_lp(obj, cons).value


def _check_embedding(f: LinearMap, delta: Fraction, who: str):
    ok, wit = is_embedding(f, delta)
    if not ok:
        raise NotAnEmbedding(f"{who} is not a multi-{delta}-isometric embedding", wit)


def pushout(X: MultiSpace, Y: MultiSpace, Z: MultiSpace, f: LinearMap, g: LinearMap,
            delta, eps, graded: bool = False, separated: bool = False) -> AmalgamResult:
    """Amalgamate f: X -> Y and g: X -> Z into W = Y (+) Z.

    Legs are exactly isometric; for every level n below the length of X
    the legs nearly commute with exact certificate at most 2*delta + eps.
    ``graded`` switches the upper bands to running maxima; ``separated``
    appends a norm level if the sum fails to be separated.
    """
    delta = frac(delta)
    eps = frac(eps)
    if eps <= 0:
        raise EpsNonPositive("the amalgamation error must be strictly positive")
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if f.domain != X or g.domain != X or f.codomain != Y or g.codomain != Z:
        raise ShapeMismatch("pushout maps must share the domain X and land in Y, Z")
    if Y.length > Z.length:
        swapped = pushout(X, Z, Y, g, f, delta, eps, graded=graded, separated=separated)
        return AmalgamResult(swapped.space, swapped.leg_z, swapped.leg_y,
                             swapped.bound_certificate, swapped.delta, swapped.eps)
    _check_embedding(f, delta, "f")
    _check_embedding(g, delta, "g")

    dy, dz = Y.dim, Z.dim
    total = dy + dz
    # coupling constant from the expansive rescaling route
    c = (2 * delta + delta * delta + eps) / (1 + delta)
    sems: list[PolyhedralSeminorm] = []
    use_graded = graded and X.graded and Y.graded and Z.graded
    for n in range(Z.length):
        if n < X.length:
            sem = _coupled_level(Y, Z, X, f, g, n, c)
        elif n < Y.length:
            funcs = _pad(Y.seminorms[n].functionals, 0, total) + _pad(Z.seminorms[n].functionals, dy, total)
            if use_graded:
                funcs += list(sems[-1].functionals)
            sem = (PolyhedralSeminorm.from_functionals(total, funcs)
                   if funcs else PolyhedralSeminorm.zero(total))
        else:
            funcs = _pad(Z.seminorms[n].functionals, dy, total)
            if use_graded:
                funcs += list(sems[-1].functionals)
            sem = (PolyhedralSeminorm.from_functionals(total, funcs)
                   if funcs else PolyhedralSeminorm.zero(total))
        sems.append(sem)
    W = MultiSpace.make(tuple(sems), graded=use_graded)
    if separated and not is_separated(W):
        W = extend_with_norm(W)
    my = Matrix.from_rows([[Fraction(1 if j == i else 0) for j in range(dy)] for i in range(dy)]
                          + [[Fraction(0)] * dy for _ in range(dz)])
    mz = Matrix.from_rows([[Fraction(0)] * dz for _ in range(dy)]
                          + [[Fraction(1 if j == i else 0) for j in range(dz)] for i in range(dz)])
    leg_y = LinearMap(Y, W, my)
    leg_z = LinearMap(Z, W, mz)
    cert = tuple(map_distance(compose(leg_y, f), compose(leg_z, g), n) for n in range(X.length))
    return AmalgamResult(W, leg_y, leg_z, cert, delta, eps)


def _partner_in_ball(target: Vec, adj_rows: list[Vec], ball_funcs, slack_funcs):
    """Least-slack alignment: a ball point whose adjoint image matches target.

    Finds coefficients for a point psi of the unit ball of ``ball_funcs``
    and a slack vector in the span of ``slack_funcs`` with
    adjoint(psi) + slack = target, minimising the l1 mass of the slack
    (the least c with target - adjoint(psi) in c times the slack ball).
    Returns (psi, c) or None when no alignment exists.
    """
    from msn.lp import solve_lp
    from msn.errors import Infeasible

    kz = len(ball_funcs)
    kx = len(slack_funcs)
    d = len(target)
    nv = 2 * kz + 2 * kx
    cons = []
    for i in range(nv):
        row = [Fraction(0)] * nv
        row[i] = Fraction(-1)
        cons.append((tuple(row), Fraction(0)))
    row = [Fraction(1)] * (2 * kz) + [Fraction(0)] * (2 * kx)
    cons.append((tuple(row), Fraction(1)))
    for c in range(d):
        row = ([adj_rows[i][c] for i in range(kz)] + [-adj_rows[i][c] for i in range(kz)]
               + [slack_funcs[j][c] for j in range(kx)] + [-slack_funcs[j][c] for j in range(kx)])
        cons.append((tuple(row), target[c]))
        cons.append((tuple(-x for x in row), -target[c]))
    obj = [Fraction(0)] * (2 * kz) + [Fraction(1)] * (2 * kx)
    try:
        res = solve_lp(obj, cons)
    except Infeasible:
        return None
    lam = res.point[:kz]
    mu = res.point[kz:2 * kz]
    psi = None
    for i, bf in enumerate(ball_funcs):
        scaled = tuple((lam[i] - mu[i]) * x for x in bf)
        psi = scaled if psi is None else tuple(a + b for a, b in zip(psi, scaled))
    if psi is None:
        psi = ()
    return psi, res.value


def _sparse_level(Y: MultiSpace, Z: MultiSpace, X: MultiSpace,
                  f: LinearMap, g: LinearMap, n: int, c: Fraction) -> PolyhedralSeminorm:
    """Aligned-pair seminorm: same legs as the coupled level, far fewer
    functionals (one partner per functional instead of a vertex product)."""
    dy, dz = Y.dim, Z.dim
    fy = Y.seminorms[n].functionals
    fz = Z.seminorms[n].functionals
    fx = list(X.seminorms[n].functionals)

    def adj(mat: Matrix, func: Vec) -> Vec:
        return tuple(sum(func[i] * mat.entries[i][j] for i in range(mat.rows))
                     for j in range(mat.cols)) if mat.entries else (Fraction(0),) * 0

    dx = X.dim
    fadj = [adj(f.matrix, phi) for phi in fy]
    gadj = [adj(g.matrix, psi) for psi in fz]
    funcs = []
    for i, phi in enumerate(fy):
        if dx:
            hit = _partner_in_ball(fadj[i], gadj, fz, fx)
            if hit is None or hit[1] > c:
                raise ValueError("no aligned partner within the coupling budget")
            psi = hit[0] if hit[0] else (Fraction(0),) * dz
        else:
            psi = (Fraction(0),) * dz
        funcs.append(tuple(phi) + tuple(psi))
    for j, psi in enumerate(fz):
        if dx:
            hit = _partner_in_ball(gadj[j], fadj, fy, fx)
            if hit is None or hit[1] > c:
                raise ValueError("no aligned partner within the coupling budget")
            phi = hit[0] if hit[0] else (Fraction(0),) * dy
        else:
            phi = (Fraction(0),) * dy
        funcs.append(tuple(phi) + tuple(psi))
    funcs = [v for v in funcs if any(x != 0 for x in v)]
    if not funcs:
        return PolyhedralSeminorm.zero(dy + dz)
    return PolyhedralSeminorm.from_functionals(dy + dz, funcs, reduce=True)


def sparse_pushout(X: MultiSpace, Y: MultiSpace, Z: MultiSpace, f: LinearMap, g: LinearMap,
                   delta, eps) -> AmalgamResult:
    """Amalgam with aligned-pair seminorms below the shared length.

    Same exact-leg and near-commuting guarantees as ``pushout`` but the
    functional count per level is additive instead of multiplicative, at
    the price of a coarser (non-canonical) seminorm.  Upper bands follow
    the standard construction.
    """
    delta = frac(delta)
    eps = frac(eps)
    if eps <= 0:
        raise EpsNonPositive("the amalgamation error must be strictly positive")
    if f.domain != X or g.domain != X or f.codomain != Y or g.codomain != Z:
        raise ShapeMismatch("pushout maps must share the domain X and land in Y, Z")
    if Y.length > Z.length:
        swapped = sparse_pushout(X, Z, Y, g, f, delta, eps)
        return AmalgamResult(swapped.space, swapped.leg_z, swapped.leg_y,
                             swapped.bound_certificate, swapped.delta, swapped.eps)
    _check_embedding(f, delta, "f")
    _check_embedding(g, delta, "g")
    dy, dz = Y.dim, Z.dim
    total = dy + dz
    c = (2 * delta + delta * delta + eps) / (1 + delta)
    sems: list[PolyhedralSeminorm] = []
    for n in range(Z.length):
        if n < X.length:
            sems.append(_sparse_level(Y, Z, X, f, g, n, c))
        elif n < Y.length:
            funcs = _pad(Y.seminorms[n].functionals, 0, total) + _pad(Z.seminorms[n].functionals, dy, total)
            sems.append(PolyhedralSeminorm.from_functionals(total, funcs)
                        if funcs else PolyhedralSeminorm.zero(total))
        else:
            funcs = _pad(Z.seminorms[n].functionals, dy, total)
            sems.append(PolyhedralSeminorm.from_functionals(total, funcs)
                        if funcs else PolyhedralSeminorm.zero(total))
    W = MultiSpace(tuple(sems))
    my = Matrix.from_rows([[Fraction(1 if j == i else 0) for j in range(dy)] for i in range(dy)]
                          + [[Fraction(0)] * dy for _ in range(dz)])
    mz = Matrix.from_rows([[Fraction(0)] * dz for _ in range(dy)]
                          + [[Fraction(1 if j == i else 0) for j in range(dz)] for i in range(dz)])
    leg_y = LinearMap(Y, W, my)
    leg_z = LinearMap(Z, W, mz)
    ok_y, wit_y = is_embedding(leg_y, 0)
    ok_z, wit_z = is_embedding(leg_z, 0)
    if not (ok_y and ok_z):
        raise NotAnEmbedding("sparse amalgam produced a non-isometric leg", wit_y or wit_z)
    cert = tuple(map_distance(compose(leg_y, f), compose(leg_z, g), n) for n in range(X.length))
    if any(b is None or b > 2 * delta + eps for b in cert):
        raise ValueError("sparse amalgam certificate exceeded the modulus")
    return AmalgamResult(W, leg_y, leg_z, cert, delta, eps)


def rescale_expansive(X: MultiSpace, delta) -> MultiSpace:
    """Scale every level by 1/(1+delta).

    A delta-embedding of X becomes an expansive (2*delta + delta^2)-
    embedding of the rescaled space.
    """
    delta = frac(delta)
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if delta == 0:
        return X
    factor = Fraction(1, 1) / (1 + delta)
    sems = []
    for s in X.seminorms:
        funcs = [tuple(factor * x for x in f) for f in s.functionals]
        sems.append(PolyhedralSeminorm.from_functionals(X.dim, funcs, reduce=False)
                    if funcs else PolyhedralSeminorm.zero(X.dim))
    return MultiSpace(tuple(sems), X.graded)


def pushout_n_preserving(X: MultiSpace, Y: MultiSpace, Z: MultiSpace,
                         f: LinearMap, g: LinearMap, n: int, eps) -> AmalgamResult:
    """Pushout of maps preserving the first n levels exactly.

    All three spaces must have equal length; below level n the overlap
    seminorm with weight eps is used, from level n on the sum seminorm.
    Legs are exactly isometric at every level and the legs commute within
    eps below level n.
    """
    eps = frac(eps)
    if eps <= 0:
        raise EpsNonPositive("eps must be strictly positive")
    if not (X.length == Y.length == Z.length):
        raise ShapeMismatch("the n-preserving pushout needs equal lengths")
    if not 0 <= n <= X.length:
        raise ShapeMismatch("cutoff level outside the shared length")
    for name, h in (("f", f), ("g", g)):
        if h.domain != X:
            raise ShapeMismatch("maps must share the domain X")
        if n:
            ok, wit = is_embedding(LinearMap(truncate(X, n), truncate(h.codomain, n), h.matrix), 0)
        else:
            ok, wit = h.is_injective(), {"kind": "injectivity"}
        if not ok:
            raise NotAnNEmbedding(f"{name} does not preserve the first {n} levels exactly", wit)

    dy, dz = Y.dim, Z.dim
    total = dy + dz
    sems = []
    for m in range(Z.length):
        if m < n:
            sems.append(_coupled_level(Y, Z, X, f, g, m, eps))
        else:
            fy = Y.seminorms[m].functionals
            fz = Z.seminorms[m].functionals
            funcs = []
            if fy and fz:
                for a in fy:
                    for b in fz:
                        funcs.append(tuple(a) + tuple(b))
                        funcs.append(tuple(a) + tuple(-x for x in b))
            elif fy:
                funcs = _pad(fy, 0, total)
            elif fz:
                funcs = _pad(fz, dy, total)
            sems.append(PolyhedralSeminorm.from_functionals(total, funcs)
                        if funcs else PolyhedralSeminorm.zero(total))
    graded = X.graded and Y.graded and Z.graded
    from msn.spaces import is_graded_sequence

    W = MultiSpace(tuple(sems), graded and is_graded_sequence(tuple(sems)))
    my = Matrix.from_rows([[Fraction(1 if j == i else 0) for j in range(dy)] for i in range(dy)]
                          + [[Fraction(0)] * dy for _ in range(dz)])
    mz = Matrix.from_rows([[Fraction(0)] * dz for _ in range(dy)]
                          + [[Fraction(1 if j == i else 0) for j in range(dz)] for i in range(dz)])
    leg_y = LinearMap(Y, W, my)
    leg_z = LinearMap(Z, W, mz)
    cert = tuple(map_distance(compose(leg_y, f), compose(leg_z, g), m) for m in range(n))
    return AmalgamResult(W, leg_y, leg_z, cert, Fraction(0), eps)


def _quotient_block(space: MultiSpace, i: int):
    q = quotient_norm(space.seminorms[i])
    return MultiSpace((q.norm,)), q


def product_amalgam(X: MultiSpace, Y: MultiSpace, Z: MultiSpace,
                    f: LinearMap, g: LinearMap, delta, eps) -> AmalgamResult:
    """Per-level amalgam of separated spaces through their quotient norms.

    Level i of the result sees only the i-th factor: a normed pushout of
    the level-i quotients below the length of X, a joint embedding of the
    quotients between the lengths of X and Y, and Z's quotient above.
    """
    delta = frac(delta)
    eps = frac(eps)
    if eps <= 0:
        raise EpsNonPositive("eps must be strictly positive")
    for name, S in (("X", X), ("Y", Y), ("Z", Z)):
        if not is_separated(S):
            raise NotSeparated(f"{name} must be separated")
    if Y.length > Z.length:
        swapped = product_amalgam(X, Z, Y, g, f, delta, eps)
        return AmalgamResult(swapped.space, swapped.leg_z, swapped.leg_y,
                             swapped.bound_certificate, swapped.delta, swapped.eps)
    _check_embedding(f, delta, "f")
    _check_embedding(g, delta, "g")

    blocks: list[MultiSpace] = []
    legy_blocks: list[Matrix | None] = []
    legz_blocks: list[Matrix | None] = []
    for i in range(Z.length):
        if i < X.length:
            Xi, qx = _quotient_block(X, i)
            Yi, qy = _quotient_block(Y, i)
            Zi, qz = _quotient_block(Z, i)
            f0 = LinearMap(Xi, Yi, qy.projection.mul(f.matrix).mul(qx.lift))
            g0 = LinearMap(Xi, Zi, qz.projection.mul(g.matrix).mul(qx.lift))
            res = pushout(Xi, Yi, Zi, f0, g0, delta, eps)
            blocks.append(res.space)
            legy_blocks.append(res.leg_y.matrix.mul(qy.projection))
            legz_blocks.append(res.leg_z.matrix.mul(qz.projection))
        elif i < Y.length:
            Yi, qy = _quotient_block(Y, i)
            Zi, qz = _quotient_block(Z, i)
            triv = trivial_space(1)
            z0 = LinearMap(triv, Yi, Matrix(()))
            z1 = LinearMap(triv, Zi, Matrix(()))
            res = pushout(triv, Yi, Zi, z0, z1, 0, eps)
            blocks.append(res.space)
            legy_blocks.append(res.leg_y.matrix.mul(qy.projection))
            legz_blocks.append(res.leg_z.matrix.mul(qz.projection))
        else:
            Zi, qz = _quotient_block(Z, i)
            blocks.append(Zi)
            legy_blocks.append(None)
            legz_blocks.append(qz.projection)
    W = product_space(blocks, "coordinate")

    def stack(blocks_list, src_dim):
        rows = []
        for i, blk in enumerate(blocks_list):
            h = blocks[i].dim
            if blk is None:
                rows.extend([[Fraction(0)] * src_dim for _ in range(h)])
            else:
                rows.extend([list(r) for r in blk.entries])
        return Matrix.from_rows(rows) if rows else Matrix(())

    leg_y = LinearMap(Y, W, stack(legy_blocks, Y.dim))
    leg_z = LinearMap(Z, W, stack(legz_blocks, Z.dim))
    cert = tuple(map_distance(compose(leg_y, f), compose(leg_z, g), i) for i in range(X.length))
    return AmalgamResult(W, leg_y, leg_z, cert, delta, eps)


@dataclass(frozen=True)
class MultiAmalgamResult:
    space: MultiSpace
    into: LinearMap                       # I : Y -> Z
    legs: tuple[LinearMap, ...]           # J_p : Y -> Z per pair
    bounds: tuple[tuple[Fraction, ...], ...]


def multi_amalgam(Y: MultiSpace, pairs, eps) -> MultiAmalgamResult:
    """Discharge finitely many near-commuting pairs by folding pushouts.

    Each pair is (X, gamma, eta, delta) with gamma, eta delta-embeddings
    of X into Y.  Returns (Z, I, per-pair J) with
    max_l ||I . gamma - J . eta||_l <= 2*delta + eps, recomputed exactly
    after all folds.
    """
    eps = frac(eps)
    if eps <= 0:
        raise EpsNonPositive("eps must be strictly positive")
    Zc = Y
    I = identity_map(Y)
    js: list[LinearMap] = []
    deltas = []
    for X, gamma, eta, delta in pairs:
        delta = frac(delta)
        _check_embedding(gamma, delta, "gamma")
        _check_embedding(eta, delta, "eta")
        res = pushout(X, Zc, Y, compose(I, gamma), eta, delta, eps)
        Zc = res.space
        js = [compose(res.leg_y, j) for j in js]
        js.append(res.leg_z)
        I = compose(res.leg_y, I)
        deltas.append(delta)
    bounds = []
    for (X, gamma, eta, delta), J in zip(pairs, js):
        bounds.append(tuple(map_distance(compose(I, gamma), compose(J, eta), l)
                            for l in range(X.length)))
    return MultiAmalgamResult(Zc, I, tuple(js), tuple(bounds))
