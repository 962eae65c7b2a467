"""Projections and sections of a polytope by a plane through the origin,
with the pre-image tags that tie polygon vertices back to 3D features."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache, reduce
from math import gcd, lcm
from typing import Sequence

import numpy as np

from .errors import DegeneratePolygon, ExceptionalDirection
from .kernel import Frame, Polytope, cross, direction, dot, frame, sub


@dataclass(frozen=True)
class VertexOf:
    vertex: int


@dataclass(frozen=True)
class OnEdge:
    edge: int
    t: Fraction     # position along the edge from its lower-id endpoint


@dataclass(frozen=True, eq=False)
class PlanarBody:
    """Convex polygon in the coordinates of a frame of xi-perp.

    Vertex i has frame coordinates (xs[i] / (denom * g1), ys[i] / (denom * g2))
    where (g1, g2) are the squared lengths of the frame basis.  Keeping the
    integer numerators makes every metric comparison an integer one.
    """

    frame: Frame
    xs: tuple
    ys: tuple
    denom: int
    preimage: tuple = ()

    def __len__(self) -> int:
        return len(self.xs)

    @cached_property
    def vertices2d(self) -> tuple:
        g1, g2 = self.frame.gram
        return tuple((Fraction(x, self.denom * g1), Fraction(y, self.denom * g2))
                     for x, y in zip(self.xs, self.ys))

    def points3d(self) -> tuple:
        return tuple(self.frame.lift(c) for c in self.vertices2d)

    @cached_property
    def metric_entries(self) -> tuple:
        """Per vertex i: (|e_i|^2, e_i . e_{i+1}) for edge vectors e_i = v_{i+1} - v_i,
        all multiplied by ``metric_scale``."""
        g1, g2 = self.frame.gram
        n = len(self.xs)
        dx = [self.xs[(i + 1) % n] - self.xs[i] for i in range(n)]
        dy = [self.ys[(i + 1) % n] - self.ys[i] for i in range(n)]
        return tuple((g2 * dx[i] * dx[i] + g1 * dy[i] * dy[i],
                      g2 * dx[i] * dx[(i + 1) % n] + g1 * dy[i] * dy[(i + 1) % n])
                     for i in range(n))

    @property
    def metric_scale(self) -> int:
        g1, g2 = self.frame.gram
        return self.denom * self.denom * g1 * g2

    def euclidean(self) -> list:
        """Float coordinates in the orthonormalized frame (for reporting)."""
        g1, g2 = self.frame.gram
        s1, s2 = g1 ** 0.5, g2 ** 0.5
        return [(float(a) * s1, float(b) * s2) for a, b in self.vertices2d]

    def validate(self) -> None:
        n = len(self.xs)
        if n < 3:
            raise DegeneratePolygon("a polygon needs at least 3 vertices")
        for i in range(n):
            a = (self.xs[(i + 1) % n] - self.xs[i], self.ys[(i + 1) % n] - self.ys[i])
            b = (self.xs[(i + 2) % n] - self.xs[(i + 1) % n], self.ys[(i + 2) % n] - self.ys[(i + 1) % n])
            if a[0] * b[1] - a[1] * b[0] <= 0:
                raise DegeneratePolygon("vertices are not strictly convex and counterclockwise")
        # a strictly left-turning cycle can still wind twice; total turning must be one loop
        area2 = sum(self.xs[i] * self.ys[(i + 1) % n] - self.xs[(i + 1) % n] * self.ys[i]
                    for i in range(n))
        if area2 <= 0:
            raise DegeneratePolygon("polygon is not counterclockwise")


def planar_body(fr: Frame, points: Sequence, preimage: Sequence = ()) -> PlanarBody:
    """PlanarBody from rational frame coordinates; checks convexity and orientation."""
    g1, g2 = fr.gram
    pts = [(Fraction(p[0]) * g1, Fraction(p[1]) * g2) for p in points]
    w = reduce(lcm, (c.denominator for p in pts for c in p), 1)
    body = PlanarBody(frame=fr, xs=tuple(int(p[0] * w) for p in pts),
                      ys=tuple(int(p[1] * w) for p in pts), denom=w, preimage=tuple(preimage))
    body.validate()
    return body


# ---------------------------------------------------------------------------
# Projections


@dataclass(frozen=True)
class ShadowBoundary:
    """Shadow boundary as a counterclockwise vertex cycle; edges[i] joins
    vertices[i] and vertices[i+1].  Starts at the smallest vertex id."""

    vertices: tuple
    edges: tuple

    @property
    def cycle(self) -> tuple:
        out = []
        for v, e in zip(self.vertices, self.edges):
            out += [("vertex", v), ("edge", e)]
        return tuple(out)

    def same_cycle(self, other: "ShadowBoundary") -> bool:
        """Equality up to cyclic rotation (both are stored rotated to a
        canonical start, so this is plain equality)."""
        return self.vertices == other.vertices and self.edges == other.edges


@lru_cache(maxsize=64)
def _facet_arrays(P: Polytope) -> tuple:
    normals = np.array([f.normal for f in P.facets], dtype=float)
    ef = np.array([e.facets for e in P.edges], dtype=np.intp)
    ev = np.array([e.vertices for e in P.edges], dtype=np.intp)
    return normals, np.abs(normals), ef, ev


def _facet_signs(P: Polytope, x) -> np.ndarray:
    """sign(normal . x) per facet; float evaluation, exact where undecided."""
    normals, absn, _, _ = _facet_arrays(P)
    xf = np.array(x, dtype=float)
    vals = normals @ xf
    unsure = np.abs(vals) <= (absn @ np.abs(xf)) * 1e-12
    signs = np.sign(vals)
    for k in np.nonzero(unsure)[0]:
        v = dot(P.facets[k].normal, x)
        signs[k] = (v > 0) - (v < 0)
    if not signs.all():
        k = int(np.nonzero(signs == 0)[0][0])
        raise ExceptionalDirection(f"direction is parallel to facet {P.facets[k].normal}")
    return signs


def orient_cycle(cyc, points, x) -> tuple:
    """Reverse a convex cycle (keeping its start) unless it turns
    counterclockwise about x."""
    a = sub(points[cyc[1]], points[cyc[0]])
    b = sub(points[cyc[2]], points[cyc[1]])
    if dot(cross(a, b), x) < 0:
        return (cyc[0],) + tuple(cyc[1:][::-1])
    return tuple(cyc)


def silhouette(P: Polytope, x) -> tuple:
    """Counterclockwise cycle of vertex ids projecting to the boundary of the
    shadow; these are the endpoints of edges whose two facets face opposite
    ways with respect to x."""
    return orient_cycle(silhouette_from_signs(P, _facet_signs(P, x)), P.int_vertices, x)


def silhouette_from_signs(P: Polytope, signs) -> tuple:
    """Silhouette vertex cycle (unoriented) for given per-facet signs of
    normal . x; starts at the smallest vertex id."""
    signs = np.asarray(signs)
    _, _, ef, ev = _facet_arrays(P)
    adj: dict[int, list] = {}
    for i, j in ev[signs[ef[:, 0]] != signs[ef[:, 1]]].tolist():
        adj.setdefault(i, []).append(j)
        adj.setdefault(j, []).append(i)
    start = min(adj)
    cyc = [start, adj[start][0]]
    while True:
        a, b = adj[cyc[-1]]
        nxt = a if a != cyc[-2] else b
        if nxt == start:
            break
        cyc.append(nxt)
    return tuple(cyc)


def shadow_boundary(P: Polytope, xi) -> ShadowBoundary:
    x = direction(xi)
    cyc = silhouette(P, x)
    n = len(cyc)
    return ShadowBoundary(vertices=cyc,
                          edges=tuple(P.edge_between(cyc[i], cyc[(i + 1) % n]) for i in range(n)))


def project(P: Polytope, xi) -> PlanarBody:
    """Orthogonal projection onto xi-perp, each vertex tagged with its unique
    3D pre-image."""
    x = direction(xi)
    cyc = silhouette(P, x)
    fr = frame(x)
    e1, e2 = fr.basis
    iv = P.int_vertices
    return PlanarBody(frame=fr, xs=tuple(dot(iv[v], e1) for v in cyc),
                      ys=tuple(dot(iv[v], e2) for v in cyc), denom=P.scale,
                      preimage=tuple(VertexOf(v) for v in cyc))


# ---------------------------------------------------------------------------
# Sections


@lru_cache(maxsize=4096)
def section_cycle(P: Polytope, x: tuple) -> tuple:
    """Counterclockwise section vertices as (edge id, N, d, t): the vertex
    is N / d with integer N and d > 0, lying on the edge at parameter t."""
    iv = P.int_vertices
    s = []
    for v in iv:
        sv = dot(v, x)
        if sv == 0:
            raise ExceptionalDirection(f"vertex {v} lies on the plane orthogonal to the direction")
        s.append(sv)
    crossing = {}
    by_facet: dict[int, list] = {}
    for k, e in enumerate(P.edges):
        p, q = e.vertices
        if (s[p] > 0) != (s[q] > 0):
            crossing[k] = e
            for f in e.facets:
                by_facet.setdefault(f, []).append(k)
    start = min(crossing)
    nbr: dict[int, list] = {k: [] for k in crossing}
    for f, ks in by_facet.items():
        a, b = ks
        nbr[a].append(b)
        nbr[b].append(a)
    cyc = [start, nbr[start][0]]
    while True:
        a, b = nbr[cyc[-1]]
        nxt = a if a != cyc[-2] else b
        if nxt == start:
            break
        cyc.append(nxt)

    def point(k):
        p, q = crossing[k].vertices
        num = tuple(s[p] * b - s[q] * a for a, b in zip(iv[p], iv[q]))
        den = (s[p] - s[q]) * P.scale
        if den < 0:
            num, den = tuple(-a for a in num), -den
        g = reduce(gcd, num, den)
        return tuple(a // g for a in num), den // g

    pts = {k: point(k) for k in cyc}
    # orientation from three consecutive points, cross-multiplied by positive denominators
    (n0, d0), (n1, d1), (n2, d2) = pts[cyc[0]], pts[cyc[1]], pts[cyc[2]]
    a = sub(tuple(d0 * c for c in n1), tuple(d1 * c for c in n0))
    b = sub(tuple(d1 * c for c in n2), tuple(d2 * c for c in n1))
    if dot(cross(a, b), x) < 0:
        cyc = [cyc[0]] + cyc[1:][::-1]
    out = []
    for k in cyc:
        p, q = crossing[k].vertices
        out.append((k, pts[k][0], pts[k][1], Fraction(s[p], s[p] - s[q])))
    return tuple(out)


def section_points(P: Polytope, x) -> list:
    """(N, d) pairs of the section vertices, counterclockwise."""
    return [(n, d) for _, n, d, _ in section_cycle(P, tuple(x))]


def section(P: Polytope, xi) -> PlanarBody:
    """The polygon P cap xi-perp, vertices tagged by the crossed edge."""
    P.require_origin_interior()
    x = direction(xi)
    cyc = section_cycle(P, x)
    fr = frame(x)
    e1, e2 = fr.basis
    w = reduce(lcm, (d for _, _, d, _ in cyc), 1)
    return PlanarBody(frame=fr,
                      xs=tuple(dot(n, e1) * (w // d) for _, n, d, _ in cyc),
                      ys=tuple(dot(n, e2) * (w // d) for _, n, d, _ in cyc),
                      denom=w,
                      preimage=tuple(OnEdge(k, t) for k, _, _, t in cyc))


# ---------------------------------------------------------------------------
# Planar support and radial functions


def planar_support(body: PlanarBody, u) -> Fraction:
    """Support of the polygon at a direction u in xi-perp (3D coordinates)."""
    return max(dot(p, u) for p in body.points3d())


def planar_radial(body: PlanarBody, u) -> Fraction:
    """Largest lam with lam*u in the polygon; u in xi-perp, origin interior."""
    c = body.frame.coords(u)
    pts = body.vertices2d
    n = len(pts)
    best = None
    for i in range(n):
        p, q = pts[i], pts[(i + 1) % n]
        e = (q[0] - p[0], q[1] - p[1])
        cu = e[0] * c[1] - e[1] * c[0]
        cp = e[0] * p[1] - e[1] * p[0]
        if cp >= 0:
            raise ExceptionalDirection("origin is not interior to the polygon")
        if cu < 0:
            lam = cp / cu
            best = lam if best is None or lam < best else best
    return best
