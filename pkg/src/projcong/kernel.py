"""Exact rational kernel: vectors, convex polytopes, support/radial functions
and rational coordinatizations of planes through the origin.

Vectors are plain tuples.  Coordinates are ``Fraction`` or ``int``; every
predicate is evaluated exactly.  Directions are never normalized, so all
direction-dependent formulas here are homogeneous in the direction.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import DegenerateInput, OriginNotInterior, ZeroDirection

Rat = Fraction
Vector = tuple

DIM = 3


def rat(x) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to a Fraction (floats rejected)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def vec(coords: Iterable) -> tuple:
    return tuple(rat(c) for c in coords)


def exact(coords: Iterable) -> tuple:
    """Like vec, but ints stay ints so integer inputs keep integer arithmetic."""
    return tuple(c if isinstance(c, int) and not isinstance(c, bool) else rat(c) for c in coords)


def dot(u, v):
    if len(u) == 3:
        return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
    return sum(a * b for a, b in zip(u, v))


def add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v):
    if len(u) == 3:
        return (u[0] - v[0], u[1] - v[1], u[2] - v[2])
    return tuple(a - b for a, b in zip(u, v))


def neg(u):
    return tuple(-a for a in u)


def scale(s, u):
    return tuple(s * a for a in u)


def cross(u, v):
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


def norm2(u):
    return dot(u, u)


def is_zero(u) -> bool:
    return all(a == 0 for a in u)


def primitive(v) -> tuple:
    """Positive rescaling of a rational vector to coprime integers."""
    if all(type(a) is int for a in v):
        g = gcd(*v)
        if g == 0:
            raise ZeroDirection("zero vector has no direction")
        return tuple(a // g for a in v) if g != 1 else tuple(v)
    fs = [rat(a) if not isinstance(a, int) else a for a in v]
    den = reduce(lcm, (a.denominator if isinstance(a, Fraction) else 1 for a in fs), 1)
    ints = [int(a * den) for a in fs]
    g = reduce(gcd, ints, 0)
    if g == 0:
        raise ZeroDirection("zero vector has no direction")
    return tuple(a // g for a in ints)


def canonical_line(v) -> tuple:
    """Primitive integer vector with its first nonzero coordinate positive."""
    p = primitive(v)
    for a in p:
        if a:
            return p if a > 0 else tuple(-b for b in p)
    raise ZeroDirection("zero vector has no direction")


def direction(xi) -> tuple:
    """Primitive integer representative of a nonzero direction (sign kept)."""
    if is_zero(xi):
        raise ZeroDirection("direction must be nonzero")
    return primitive(xi)


def fmt_rat(x) -> str:
    x = rat(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_vec(v) -> list:
    return [fmt_rat(a) for a in v]


# ---------------------------------------------------------------------------
# Polytopes


@dataclass(frozen=True)
class Facet:
    normal: tuple          # primitive integer outer normal
    offset: Fraction       # normal . v for every vertex v of the facet
    cycle: tuple           # vertex ids, counterclockwise seen from outside


@dataclass(frozen=True)
class Edge:
    vertices: tuple        # (i, j) with i < j
    facets: tuple          # the two incident facet ids, ascending


@dataclass(frozen=True, eq=False)
class Polytope:
    """Full-dimensional convex polytope with its face lattice.

    Built by :func:`hull`; vertices are in lexicographic order, facets are
    sorted by normal and edges by vertex pair.  Instances hash by identity;
    use :func:`same_vertices` for geometric equality.
    """

    vertices: tuple
    facets: tuple
    edges: tuple
    dim: int = DIM

    @cached_property
    def scale(self) -> int:
        """Common denominator of all vertex coordinates."""
        return reduce(lcm, (c.denominator for v in self.vertices for c in v), 1)

    @cached_property
    def int_vertices(self) -> tuple:
        d = self.scale
        return tuple(tuple(int(c * d) for c in v) for v in self.vertices)

    @cached_property
    def edge_index(self) -> dict:
        return {e.vertices: k for k, e in enumerate(self.edges)}

    @cached_property
    def int_edge_vectors(self) -> tuple:
        iv = self.int_vertices
        return tuple(sub(iv[e.vertices[1]], iv[e.vertices[0]]) for e in self.edges)

    def edge_between(self, i: int, j: int) -> int:
        return self.edge_index[(i, j) if i < j else (j, i)]

    def contains_origin_strictly(self) -> bool:
        return all(f.offset > 0 for f in self.facets)

    def require_origin_interior(self) -> None:
        if not self.contains_origin_strictly():
            raise OriginNotInterior("origin is not strictly interior to the polytope")

    def __repr__(self) -> str:
        return (f"Polytope(vertices={len(self.vertices)}, edges={len(self.edges)}, "
                f"facets={len(self.facets)})")


def _orient3(a, b, c, d) -> int:
    return dot(cross(sub(b, a), sub(c, a)), sub(d, a))


def _initial_simplex(pts: Sequence[tuple]) -> list[int]:
    i0 = 0
    i1 = next((i for i in range(1, len(pts)) if pts[i] != pts[i0]), None)
    if i1 is None:
        raise DegenerateInput("all points coincide")
    d01 = sub(pts[i1], pts[i0])
    i2 = next((i for i in range(len(pts)) if not is_zero(cross(d01, sub(pts[i], pts[i0])))), None)
    if i2 is None:
        raise DegenerateInput("points are collinear")
    i3 = next((i for i in range(len(pts)) if _orient3(pts[i0], pts[i1], pts[i2], pts[i]) != 0), None)
    if i3 is None:
        raise DegenerateInput("points are coplanar")
    return [i0, i1, i2, i3]


def _hull_planes(pts: Sequence[tuple]) -> set:
    """Incremental 3D hull over integer points; returns the supporting planes
    (primitive normal, offset) of all facets."""
    s = _initial_simplex(pts)
    faces: dict[int, tuple] = {}
    edge_face: dict[tuple, int] = {}
    next_id = 0

    def add_face(a, b, c):
        nonlocal next_id
        n = cross(sub(pts[b], pts[a]), sub(pts[c], pts[a]))
        faces[next_id] = (a, b, c, n, dot(n, pts[a]))
        for u, v in ((a, b), (b, c), (c, a)):
            edge_face[(u, v)] = next_id
        next_id += 1

    for a, b, c, d in ((s[0], s[1], s[2], s[3]), (s[0], s[1], s[3], s[2]),
                       (s[0], s[2], s[3], s[1]), (s[1], s[2], s[3], s[0])):
        if _orient3(pts[a], pts[b], pts[c], pts[d]) > 0:
            b, c = c, b
        add_face(a, b, c)

    in_simplex = set(s)
    for k, p in enumerate(pts):
        if k in in_simplex:
            continue
        visible = {f for f, (_, _, _, n, off) in faces.items() if dot(n, p) > off}
        if not visible:
            continue
        horizon = []
        for f in visible:
            a, b, c = faces[f][:3]
            for u, v in ((a, b), (b, c), (c, a)):
                if edge_face.get((v, u)) not in visible:
                    horizon.append((u, v))
        for f in visible:
            a, b, c = faces.pop(f)[:3]
            for u, v in ((a, b), (b, c), (c, a)):
                if edge_face.get((u, v)) == f:
                    del edge_face[(u, v)]
        for u, v in horizon:
            add_face(u, v, k)

    planes = set()
    for a, _, _, n, _ in faces.values():
        pn = primitive(n)
        planes.add((pn, dot(pn, pts[a])))
    return planes


def _cross2(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_2d(points: Sequence[tuple]) -> list[int]:
    """Indices of the strictly convex hull, counterclockwise (monotone chain).

    Collinear boundary points are dropped.  Starts at the lexicographically
    smallest point.
    """
    order = sorted(range(len(points)), key=lambda i: points[i])
    if len(order) < 3:
        return order
    lower: list[int] = []
    for i in order:
        while len(lower) >= 2 and _cross2(points[lower[-2]], points[lower[-1]], points[i]) <= 0:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in reversed(order):
        while len(upper) >= 2 and _cross2(points[upper[-2]], points[upper[-1]], points[i]) <= 0:
            upper.pop()
        upper.append(i)
    return lower[:-1] + upper[:-1]


def hull(points: Iterable) -> Polytope:
    """Exact convex hull of rational points in 3-space with full face lattice."""
    pts = sorted(set(vec(p) for p in points))
    if any(len(p) != DIM for p in pts):
        raise DegenerateInput("hull is implemented for points in 3-space")
    if len(pts) < DIM + 1:
        raise DegenerateInput("need at least 4 affinely independent points")
    den = reduce(lcm, (c.denominator for p in pts for c in p), 1)
    ipts = [tuple(int(c * den) for c in p) for p in pts]

    planes = _hull_planes(ipts)

    facet_cycles = []
    for n, off in planes:
        on = [i for i, p in enumerate(ipts) if dot(n, p) == off]
        k = max(range(3), key=lambda t: abs(n[t]))
        i, j = (k + 1) % 3, (k + 2) % 3
        cyc = [on[t] for t in convex_hull_2d([(ipts[q][i], ipts[q][j]) for q in on])]
        if n[k] < 0:
            cyc.reverse()
        facet_cycles.append((n, cyc))

    used = sorted({q for _, cyc in facet_cycles for q in cyc})
    new_id = {q: t for t, q in enumerate(used)}
    vertices = tuple(pts[q] for q in used)

    facets = []
    for n, cyc in sorted(facet_cycles):
        ids = [new_id[q] for q in cyc]
        r = ids.index(min(ids))
        ids = ids[r:] + ids[:r]
        facets.append(Facet(normal=n, offset=dot(n, vertices[ids[0]]), cycle=tuple(ids)))

    inc: dict[tuple, list[int]] = {}
    for f, fc in enumerate(facets):
        cyc = fc.cycle
        for t in range(len(cyc)):
            u, v = cyc[t], cyc[(t + 1) % len(cyc)]
            inc.setdefault((min(u, v), max(u, v)), []).append(f)
    edges = []
    for key in sorted(inc):
        fs = inc[key]
        assert len(fs) == 2, "every edge must be shared by exactly two facets"
        edges.append(Edge(vertices=key, facets=tuple(sorted(fs))))

    return Polytope(vertices=vertices, facets=tuple(facets), edges=tuple(edges))


def translate(P: Polytope, t) -> Polytope:
    t = vec(t)
    return hull(add(v, t) for v in P.vertices)


def negate(P: Polytope) -> Polytope:
    return hull(neg(v) for v in P.vertices)


def linear_image(P: Polytope, matrix) -> Polytope:
    """Image under a rational 3x3 matrix (rows act on column vectors)."""
    m = [vec(row) for row in matrix]
    return hull(tuple(dot(row, v) for row in m) for v in P.vertices)


def same_vertices(P: Polytope, Q: Polytope) -> bool:
    return P.vertices == Q.vertices


def support(P: Polytope, u) -> Fraction:
    """h_P(u) = max over vertices of v . u."""
    u = vec(u)
    if is_zero(u):
        raise ZeroDirection("support needs a nonzero direction")
    return max(dot(v, u) for v in P.vertices)


def radial(P: Polytope, u) -> Fraction:
    """rho_P(u) = max{lam > 0 : lam u in P}, exact from the facet inequalities."""
    u = vec(u)
    if is_zero(u):
        raise ZeroDirection("radial needs a nonzero direction")
    P.require_origin_interior()
    best = None
    for f in P.facets:
        s = dot(f.normal, u)
        if s > 0:
            lam = f.offset / s
            if best is None or lam < best:
                best = lam
    assert best is not None  # a bounded body is hit in every direction
    return best


# ---------------------------------------------------------------------------
# Frames


@dataclass(frozen=True)
class Frame:
    """Integer orthogonal basis of xi-perp; (e1, e2, xi) is right-handed."""

    xi: tuple
    basis: tuple

    @cached_property
    def gram(self) -> tuple:
        return (norm2(self.basis[0]), norm2(self.basis[1]))

    def coords(self, x) -> tuple:
        """Coordinates of the orthogonal projection of x onto xi-perp."""
        g1, g2 = self.gram
        return (Fraction(dot(x, self.basis[0])) / g1, Fraction(dot(x, self.basis[1])) / g2)

    def lift(self, c) -> tuple:
        e1, e2 = self.basis
        return tuple(c[0] * a + c[1] * b for a, b in zip(e1, e2))

    def to_json(self) -> dict:
        return {"xi": fmt_vec(self.xi), "basis": [fmt_vec(b) for b in self.basis]}


def frame(xi) -> Frame:
    """Deterministic rational basis of xi-perp.

    e1 is the projection of the standard axis on which xi has the smallest
    absolute coordinate (lowest index on ties); e2 = xi x e1.  Both are
    reduced to primitive integer vectors.
    """
    x = direction(vec(xi))
    k = min(range(3), key=lambda t: (abs(x[t]), t))
    n2 = norm2(x)
    e1 = tuple((n2 if t == k else 0) - x[k] * x[t] for t in range(3))
    e1 = primitive(e1)
    e2 = primitive(cross(x, e1))
    return Frame(xi=x, basis=(e1, e2))
