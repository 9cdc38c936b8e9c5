"""Colouring machinery for approximate Ramsey experiments.

Embedding sets of one-dimensional spaces are finite unions of polytope
faces (seminorm-sphere intersections), so they admit exhaustively
enumerated nets with exact density certificates.  On top of the nets sit
discrete and continuous colourings, the transformers between them, the
product-colouring identity, the quotient lift through padded spaces, and
a brute-force monochromatic-set search that is sound by exhaustive
re-checking.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct

from msn.errors import (
    DimensionMismatch,
    EmptyEmbeddingSet,
    MultiLevelInput,
    ShapeMismatch,
    UndefinedPoint,
)
from msn.linalg import Matrix, Vec, vec_sub, zero_vec
from msn.maps import LinearMap, compose, is_embedding, map_distance, sup_distance
from msn.polytope import polytope_vertices
from msn.seminorms import PolyhedralSeminorm, quotient_norm
from msn.spaces import MultiSpace, joint_kernel, product_space


def _map_metric(f: LinearMap, g: LinearMap) -> Fraction:
    d = sup_distance(f, g)
    if d is None:
        raise ValueError("unbounded distance between net points")
    return d


@dataclass(frozen=True)
class EmbeddingNet:
    """Finite list of exact embeddings, epsilon-dense when certified.

    ``resolution`` is the certified mesh in the max-over-levels operator
    distance; None marks sampled nets carrying no density certificate.
    """

    domain: MultiSpace
    codomain: MultiSpace
    points: tuple[LinearMap, ...]
    resolution: Fraction | None

    def index_of(self, f: LinearMap) -> int:
        for i, p in enumerate(self.points):
            if p.matrix == f.matrix:
                return i
        raise UndefinedPoint("map is not a net point")


def _line_image_constraints(X: MultiSpace, Y: MultiSpace):
    """Values the image vector of the basis of a line must attain."""
    return [X.seminorms[m]((Fraction(1),)) for m in range(X.length)]


def _sphere_faces(Y: MultiSpace, targets):
    """Face pieces of {y : ||y||_m = c_m for all m} as (eqs, ineqs) systems."""
    levels = list(range(len(targets)))
    choices = []
    for m in levels:
        funcs = Y.seminorms[m].functionals
        if targets[m] == 0 or not funcs:
            choices.append([None])
            continue
        opts = []
        for phi in funcs:
            opts.append((phi, Fraction(1)))
            opts.append((tuple(-x for x in phi), Fraction(1)))
        choices.append(opts)
    for combo in iproduct(*choices):
        eqs = []
        ineqs = []
        for m in levels:
            funcs = Y.seminorms[m].functionals
            c = targets[m]
            for phi in funcs:
                ineqs.append((phi, c))
                ineqs.append((tuple(-x for x in phi), c))
            if combo[m] is not None:
                face, sgn = combo[m]
                eqs.append((tuple(sgn * x for x in face), c))
        yield eqs, ineqs


def _grid_on_hull(verts: list[Vec], mesh_den, metric) -> list[Vec]:
    """Points of the convex hull within ``mesh_den`` of every hull point.

    Simplex grid on the convex-combination weights with exact rounding
    bound (#verts - 1) * diameter / N.
    """
    if not verts:
        return []
    if len(verts) == 1:
        return list(verts)
    diam = max(metric(a, b) for a in verts for b in verts)
    if diam == 0 or mesh_den is None:
        return list(verts)
    k = len(verts)
    need = (k - 1) * diam / mesh_den
    n = -(-need.numerator // need.denominator)  # ceil
    n = max(int(n), 1)
    out = []
    for weights in _compositions(n, k):
        p = zero_vec(len(verts[0]))
        for w, v in zip(weights, verts):
            p = tuple(a + Fraction(w, n) * b for a, b in zip(p, v))
        out.append(p)
    return out


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def build_net(X: MultiSpace, Y: MultiSpace, eps) -> EmbeddingNet:
    """Exhaustive net of Emb(X, Y) for one-dimensional X.

    The embedding set is the intersection of seminorm spheres, a finite
    union of polytope faces; each face is covered by an exact simplex grid
    with mesh at most eps.  Raises when the constraint set is empty.
    """
    eps = Fraction(eps)
    if X.dim != 1:
        raise DimensionMismatch("exhaustive enumeration needs a one-dimensional domain")
    if X.length > Y.length:
        raise ShapeMismatch("domain carries more levels than the codomain")
    targets = _line_image_constraints(X, Y)

    if all(t == 0 for t in targets):
        ker = joint_kernel(Y, range(X.length))
        if not ker:
            raise EmptyEmbeddingSet("no nonzero vector annihilated by every level")
        pts = [ker[0], tuple(-x for x in ker[0])]
        maps = tuple(LinearMap(X, Y, Matrix.from_rows([[x] for x in p])) for p in pts)
        return EmbeddingNet(X, Y, maps, eps)

    scale = max(t for t in targets if t != 0)

    def metric(a: Vec, b: Vec) -> Fraction:
        best = Fraction(0)
        for m in range(X.length):
            if targets[m] == 0:
                continue
            best = max(best, Y.seminorms[m](vec_sub(a, b)) / targets[m])
        return best

    points: set[Vec] = set()
    for eqs, ineqs in _sphere_faces(Y, targets):
        rows = list(ineqs)
        for a, b in eqs:
            rows.append((a, b))
            rows.append((tuple(-x for x in a), -b))
        # faces can be unbounded along degenerate directions; quotient out
        kernel = joint_kernel(Y, [m for m in range(X.length) if targets[m] != 0])
        if kernel:
            # pin the kernel coordinates to zero for a canonical section
            for k in kernel:
                rows.append((k, Fraction(0)))
                rows.append((tuple(-x for x in k), Fraction(0)))
        try:
            verts = polytope_vertices(rows, Y.dim)
        except Exception:
            continue
        if not verts:
            continue
        for p in _grid_on_hull(verts, eps, metric):
            # grid points of a face of the sphere stay on the sphere only
            # if the face is exact; re-check exactly and keep valid ones
            if all(Y.seminorms[m](p) == targets[m] for m in range(X.length)):
                points.add(p)
    if not points:
        raise EmptyEmbeddingSet("sphere system has no solutions")
    maps = tuple(LinearMap(X, Y, Matrix.from_rows([[x] for x in p]))
                 for p in sorted(points))
    for f in maps:
        ok, _ = is_embedding(f, 0)
        if not ok:
            raise EmptyEmbeddingSet("enumerated point fails the embedding check")
    return EmbeddingNet(X, Y, maps, eps)


def sampled_net(X: MultiSpace, Y: MultiSpace, candidates) -> EmbeddingNet:
    """Net from externally supplied candidates; no density certificate."""
    maps = []
    for f in candidates:
        ok, _ = is_embedding(f, 0)
        if ok:
            maps.append(f)
    return EmbeddingNet(X, Y, tuple(maps), None)


@dataclass(frozen=True)
class Colouring:
    """Total evaluator on embedding points.

    Discrete colourings map to {0..colours-1}; continuous ones map to
    [0,1] and are expected to be 1-Lipschitz for the max-over-levels
    distance up to their stated level count.
    """

    kind: str                      # "discrete" | "continuous"
    colours: int | None            # discrete only
    level: int | None              # continuous only: Lipschitz level count
    table: tuple[tuple[tuple, Fraction | int], ...] | None
    builtin: tuple | None          # ("coordinate-clamp", coord) | ("distance-to", matrix)

    def __call__(self, f: LinearMap):
        if self.table is not None:
            key = f.matrix.entries
            for k, v in self.table:
                if k == key:
                    return v
            raise UndefinedPoint("colouring table does not cover this map")
        name = self.builtin[0]
        if name == "coordinate-clamp":
            coord = self.builtin[1]
            val = f.matrix.entries[coord][0]
            return min(Fraction(1), max(Fraction(0), val))
        if name == "distance-to":
            ref = self.builtin[1]
            other = LinearMap(f.domain, f.codomain, ref)
            d = sup_distance(f, other)
            return min(Fraction(1), d)
        raise UndefinedPoint(f"unknown builtin colouring {name!r}")


def discrete_table(net: EmbeddingNet, values, colours: int) -> Colouring:
    table = tuple((p.matrix.entries, int(v)) for p, v in zip(net.points, values, strict=True))
    return Colouring("discrete", colours, None, table, None)


def continuous_table(net: EmbeddingNet, values, level: int) -> Colouring:
    table = tuple((p.matrix.entries, Fraction(v)) for p, v in zip(net.points, values, strict=True))
    return Colouring("continuous", None, level, table, None)


def lipschitz_audit(c: Colouring, points) -> bool:
    """Exact pairwise check of the defining Lipschitz inequality."""
    pts = list(points)
    for i, a in enumerate(pts):
        for b in pts[i + 1:]:
            lhs = abs(Fraction(c(a)) - Fraction(c(b)))
            bound = max(map_distance(a, b, m) for m in range(min(c.level, a.domain.length)))
            if lhs > bound:
                return False
    return True


def oscillation(c: Colouring, points, eps=None):
    """Max pairwise colour gap; for discrete colourings, a coverage report.

    Discrete: returns 0 when one colour class eps-covers all points, else 1.
    """
    pts = list(points)
    if c.kind == "continuous":
        worst = Fraction(0)
        for i, a in enumerate(pts):
            for b in pts[i + 1:]:
                worst = max(worst, abs(Fraction(c(a)) - Fraction(c(b))))
        return worst
    if eps is None:
        raise ValueError("discrete oscillation needs the stated eps")
    eps = Fraction(eps)
    for colour in range(c.colours):
        marked = [p for p in pts if c(p) == colour]
        if not marked:
            continue
        if all(any(_map_metric(p, q) <= eps for q in marked) for p in pts):
            return Fraction(0)
    return Fraction(1)


def grid_of(eps) -> tuple[Fraction, ...]:
    """Uniform rational grid of mesh eps covering [0, 1]."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    out = []
    k = 0
    while True:
        v = k * eps
        if v >= 1:
            out.append(Fraction(1))
            break
        out.append(v)
        k += 1
    return tuple(out)


def discretize(c: Colouring, eps) -> tuple[Colouring, tuple[Fraction, ...]]:
    """Round a continuous table colouring to the uniform grid of mesh eps.

    The discrete value is the grid index; pointwise the rounded value is
    within eps of the original.
    """
    if c.kind != "continuous" or c.table is None:
        raise ValueError("discretize expects a continuous table colouring")
    grid = grid_of(eps)

    def nearest(v: Fraction) -> int:
        return min(range(len(grid)), key=lambda i: (abs(grid[i] - v), i))

    table = tuple((key, nearest(Fraction(v))) for key, v in c.table)
    return Colouring("discrete", len(grid), None, table, None), grid


def bad_colouring_from_discrete(c: Colouring, net: EmbeddingNet, top_colour: int) -> Colouring:
    """Distance-to-last-colour-class colouring (capped at 1).

    Value 0 exactly on the points of the top colour class; 1-Lipschitz in
    the max-over-levels distance.
    """
    marked = [p for p in net.points if c(p) == top_colour]
    values = []
    for p in net.points:
        if not marked:
            values.append(Fraction(1))
            continue
        d = min(_map_metric(p, q) for q in marked)
        values.append(min(Fraction(1), d))
    return continuous_table(net, values, net.domain.length)


def product_embedding(factors, Z: MultiSpace, X: MultiSpace) -> LinearMap:
    """Stack per-level embeddings into the coordinate product."""
    rows = []
    for f in factors:
        rows.extend(list(f.matrix.entries))
    m = Matrix.from_rows(rows)
    return LinearMap(X, Z, m)


def product_colouring(c: Colouring, X: MultiSpace, blocks):
    """Induced colouring on tuples of per-level embeddings.

    ``blocks`` are the single-level codomains; the induced value on a
    tuple is the value of c on the stacked embedding into their product.
    """
    Z = product_space(list(blocks), "coordinate")

    def evaluate(factor_maps) -> Fraction | int:
        stacked = product_embedding(factor_maps, Z, X)
        return c(stacked)

    return Z, evaluate


def quotient_lift(c, X: MultiSpace, Z: MultiSpace):
    """Lift a colouring through the kernel quotient, with the padded space.

    X must carry a single seminorm.  Returns (Xq, pi, padded, embed_pad,
    lifted) where pi is the canonical surjection onto the quotient normed
    space, padded is Z x Z with the first-block seminorm, embed_pad sends
    z to (z, 0) and lifted evaluates on Emb(Xq, Z) by composing with pi.
    """
    if X.length != 1:
        raise MultiLevelInput("only the single-seminorm base case is modelled")
    q = quotient_norm(X.seminorms[0])
    Xq = MultiSpace((q.norm,))
    pi = LinearMap(X, Xq, q.projection)
    total = 2 * Z.dim
    padded_funcs = []
    for phi in Z.seminorms[0].functionals:
        padded_funcs.append(tuple(phi) + (Fraction(0),) * Z.dim)
    padded = MultiSpace((PolyhedralSeminorm.from_functionals(total, padded_funcs, reduce=False)
                         if padded_funcs else PolyhedralSeminorm.zero(total),))
    pad_matrix = Matrix.from_rows([[Fraction(1 if j == i else 0) for j in range(Z.dim)]
                                   for i in range(Z.dim)]
                                  + [[Fraction(0)] * Z.dim for _ in range(Z.dim)])
    embed_pad = LinearMap(Z, padded, pad_matrix)

    def lifted(gamma: LinearMap):
        return c(compose(gamma, pi))

    return Xq, pi, padded, embed_pad, lifted


def search_monochromatic(c: Colouring, net_xz: EmbeddingNet, net_xy: EmbeddingNet,
                         candidates, eps):
    """First candidate whose composed copies are eps-covered by one colour.

    Exhaustive over the supplied finite data; returns (gamma, colour) or
    None.  Soundness: the coverage condition is re-checkable from the
    returned witness alone.
    """
    eps = Fraction(eps)
    for gamma in candidates:
        ok, _ = is_embedding(gamma, 0)
        if not ok:
            raise ValueError("candidates must be exact embeddings")
    for gamma in candidates:
        composed = [compose(gamma, eta) for eta in net_xy.points]
        for colour in range(c.colours):
            marked = [p for p in net_xz.points if c(p) == colour]
            if not marked:
                continue
            if all(any(_map_metric(h, q) <= eps for q in marked) for h in composed):
                return gamma, colour
    return None
