"""Planar congruence under rotations, reflections and translations.

Polygons are compared through the cyclic sequence of (squared edge length,
dot product of consecutive edges).  For convex counterclockwise polygons the
two numbers fix the edge and the exterior angle, so equal sequences up to a
cyclic shift (or reversal) are exactly the congruences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Sequence

import numpy as np

from .directions import DirectionCell, Mode
from .errors import DegeneratePolygon, EmptyIntersection
from .kernel import Polytope, direction, dot, sub
from .shadow import PlanarBody, orient_cycle, section_cycle, silhouette


class Orientation(str, Enum):
    DIRECT = "direct"
    REFLECTED = "reflected"


@dataclass(frozen=True)
class CanonicalCode:
    direct: tuple
    reflected: tuple


@dataclass(frozen=True)
class CongruenceWitness:
    orientation: Orientation
    vertex_map: tuple                 # vertex_map[i] = index of the image vertex in B
    motion: tuple                     # ((m11, m12), (m21, m22)), (t1, t2) in orthonormal frame coords


@dataclass(frozen=True)
class StablePermutation:
    sigma: tuple                      # sorted (feature of P, feature of Q) pairs
    orientation: Orientation
    support_count: int

    def as_dict(self) -> dict:
        return dict(self.sigma)


def _reflected_entries(entries: Sequence) -> list:
    n = len(entries)
    return [(entries[(-j - 1) % n][0], entries[(-j - 2) % n][1]) for j in range(n)]


def _min_rotation(seq: list) -> tuple:
    n = len(seq)
    return min(tuple(seq[k:] + seq[:k]) for k in range(n))


def canonical_code(A: PlanarBody) -> CanonicalCode:
    """Lexicographically least rotation of the metric sequence, for the
    body and for its reversed traversal."""
    if len(A) < 3:
        raise DegeneratePolygon("a polygon needs at least 3 vertices")
    f = A.metric_scale
    seq = [(Fraction(a, f), Fraction(b, f)) for a, b in A.metric_entries]
    return CanonicalCode(direct=_min_rotation(seq), reflected=_min_rotation(_reflected_entries(seq)))


def match_entries(ea: Sequence, fa: int, eb: Sequence, fb: int) -> list:
    """All (orientation, vertex_map) aligning metric sequence ``ea`` (scale
    fa) with ``eb`` (scale fb).  Direct shifts first, then reflected ones."""
    n = len(ea)
    if n != len(eb):
        return []
    g = math.gcd(fa, fb)
    ma, mb = fb // g, fa // g
    a = [(x * ma, y * ma) for x, y in ea]
    b = [(x * mb, y * mb) for x, y in eb]
    return _match_lists(a, b)


def _match_lists(a: list, b: list) -> list:
    n = len(a)
    out = []
    bb = b + b
    for k in range(n):
        if bb[k:k + n] == a:
            out.append((Orientation.DIRECT, tuple((i + k) % n for i in range(n))))
    # a[i] must equal (b[k-i-1] length, b[k-i-2] turn), i.e. c[i-k] below
    c = [(b[(-m - 1) % n][0], b[(-m - 2) % n][1]) for m in range(n)]
    cc = c + c
    for k in range(n):
        s = (n - k) % n
        if cc[s:s + n] == a:
            out.append((Orientation.REFLECTED, tuple((k - i) % n for i in range(n))))
    return out


def fit_motion(pa: Sequence, pb: Sequence, orientation: Orientation) -> tuple:
    """Least-squares rigid motion taking points pa onto pb (2D Procrustes)."""
    n = len(pa)
    ca = (sum(p[0] for p in pa) / n, sum(p[1] for p in pa) / n)
    cb = (sum(p[0] for p in pb) / n, sum(p[1] for p in pb) / n)
    flip = -1.0 if orientation is Orientation.REFLECTED else 1.0
    sdot = scross = 0.0
    for p, q in zip(pa, pb):
        ax, ay = p[0] - ca[0], flip * (p[1] - ca[1])
        bx, by = q[0] - cb[0], q[1] - cb[1]
        sdot += ax * bx + ay * by
        scross += ax * by - ay * bx
    th = math.atan2(scross, sdot)
    c, s = math.cos(th), math.sin(th)
    m = ((c, -s * flip), (s, c * flip))
    t = (cb[0] - m[0][0] * ca[0] - m[0][1] * ca[1], cb[1] - m[1][0] * ca[0] - m[1][1] * ca[1])
    return m, t


def congruence_witnesses(A: PlanarBody, B: PlanarBody) -> list[CongruenceWitness]:
    """Every rigid motion of the plane (reflections included) mapping A onto B."""
    if len(A) < 3 or len(B) < 3:
        raise DegeneratePolygon("a polygon needs at least 3 vertices")
    maps = match_entries(A.metric_entries, A.metric_scale, B.metric_entries, B.metric_scale)
    if not maps:
        return []
    pa, pb = A.euclidean(), B.euclidean()
    out = []
    for orient, vmap in maps:
        motion = fit_motion(pa, [pb[j] for j in vmap], orient)
        out.append(CongruenceWitness(orientation=orient, vertex_map=vmap, motion=motion))
    return out


# ---------------------------------------------------------------------------
# Feature-level matching used by the recovery pipeline


def feature_cycle(K: Polytope, x: tuple, mode: Mode) -> tuple:
    """(features, metric entries, scale) of the planar body of K at x.

    Features are 3D vertex ids (projections) or edge ids (sections).  The
    entries are computed straight from 3D data and agree, up to the common
    factor, with PlanarBody.metric_entries of project/section.
    """
    if mode is Mode.PROJECTIONS:
        return projection_entries(K, silhouette(K, x), x)
    cyc = section_cycle(K, x)
    w = reduce(lcm, (c[2] for c in cyc), 1)
    pts = [tuple(a * (w // c[2]) for a in c[1]) for c in cyc]
    n = len(pts)
    d = [sub(pts[(i + 1) % n], pts[i]) for i in range(n)]
    ents = tuple((dot(d[i], d[i]), dot(d[i], d[(i + 1) % n])) for i in range(n))
    return tuple(c[0] for c in cyc), ents, w * w


def projection_entries(K: Polytope, cyc: tuple, x: tuple) -> tuple:
    """Metric entries of the projection at x of a silhouette cycle, computed
    from 3D edge vectors: |d|^2 |x|^2 - (d.x)^2 and the analogous cross terms."""
    iv = K.int_vertices
    cyc = orient_cycle(cyc, iv, x)
    n = len(cyc)
    d = [sub(iv[cyc[(i + 1) % n]], iv[cyc[i]]) for i in range(n)]
    xx = dot(x, x)
    dx = [dot(v, x) for v in d]
    ents = tuple((dot(d[i], d[i]) * xx - dx[i] * dx[i],
                  dot(d[i], d[(i + 1) % n]) * xx - dx[i] * dx[(i + 1) % n]) for i in range(n))
    return cyc, ents, K.scale * K.scale


def feature_maps(P: Polytope, Q: Polytope, x: tuple, mode: Mode, cycles=None) -> list:
    """Witnesses at x lifted to (sigma, orientation) over 3D feature ids.

    ``cycles`` optionally supplies the (unoriented) silhouette cycles of P and
    Q when the caller already knows the facet signs at x."""
    if cycles is not None:
        return ProjectionMatcher(P, Q, cycles, x).maps(x)
    fp, ep, sp = feature_cycle(P, x, mode)
    fq, eq, sq = feature_cycle(Q, x, mode)
    return _lift(fp, fq, match_entries(ep, sp, eq, sq))


def _lift(fp, fq, matches) -> list:
    return [(tuple(sorted((fp[i], fq[j]) for i, j in enumerate(vmap))), orient)
            for orient, vmap in matches]


_INT64_SAFE = 1 << 62


def _quadratic_forms(K: Polytope, cyc: tuple, mult: int) -> list:
    """Rows of coefficients on (x0^2, x1^2, x2^2, x0x1, x0x2, x1x2) giving
    mult times the projection metric entries of the cycle: first the squared
    edge lengths, then the consecutive edge dots."""
    iv = K.int_vertices
    n = len(cyc)
    d = [sub(iv[cyc[(i + 1) % n]], iv[cyc[i]]) for i in range(n)]
    rows = []
    for i in range(n):
        u, v = d[i], d[(i + 1) % n]
        uu = dot(u, u)
        rows.append((mult * (uu - u[0] * u[0]), mult * (uu - u[1] * u[1]), mult * (uu - u[2] * u[2]),
                     -2 * mult * u[0] * u[1], -2 * mult * u[0] * u[2], -2 * mult * u[1] * u[2]))
    for i in range(n):
        u, v = d[i], d[(i + 1) % n]
        uv = dot(u, v)
        rows.append((mult * (uv - u[0] * v[0]), mult * (uv - u[1] * v[1]), mult * (uv - u[2] * v[2]),
                     -mult * (u[0] * v[1] + u[1] * v[0]), -mult * (u[0] * v[2] + u[2] * v[0]),
                     -mult * (u[1] * v[2] + u[2] * v[1])))
    return rows


class ProjectionMatcher:
    """Projection congruences over one direction cell.

    The silhouette cycles and their orientation are constant on a cell, so
    the metric entries are fixed quadratic forms in x, scaled here to a
    common denominator.  They are evaluated in int64 when that provably
    cannot overflow and in Python integers otherwise.
    """

    def __init__(self, P: Polytope, Q: Polytope, cycles: tuple, x0: tuple):
        self.fp = orient_cycle(cycles[0], P.int_vertices, x0)
        self.fq = orient_cycle(cycles[1], Q.int_vertices, x0)
        self.n = len(self.fp)
        if self.n != len(self.fq):
            self.rows = None
            return
        sp, sq = P.scale * P.scale, Q.scale * Q.scale
        g = math.gcd(sp, sq)
        self.rows = _quadratic_forms(P, self.fp, sq // g) + _quadratic_forms(Q, self.fq, sp // g)
        self.bound = max(sum(abs(c) for c in r) for r in self.rows)
        self.arr = np.array(self.rows, dtype=np.int64) if self.bound < _INT64_SAFE else None

    def entries(self, x: tuple) -> list:
        x0, x1, x2 = x
        mono = (x0 * x0, x1 * x1, x2 * x2, x0 * x1, x0 * x2, x1 * x2)
        if self.arr is not None and self.bound * max(abs(m) for m in mono) < _INT64_SAFE:
            return (self.arr @ np.array(mono, dtype=np.int64)).tolist()
        return [sum(c * m for c, m in zip(r, mono)) for r in self.rows]

    def entries_many(self, xs: Sequence) -> list:
        monos = [(x0 * x0, x1 * x1, x2 * x2, x0 * x1, x0 * x2, x1 * x2) for x0, x1, x2 in xs]
        top = max(abs(m) for mono in monos for m in mono)
        if self.arr is not None and self.bound * top < _INT64_SAFE:
            return (np.array(monos, dtype=np.int64) @ self.arr.T).tolist()
        return [self.entries(x) for x in xs]

    def _maps_from(self, e: list) -> list:
        n = self.n
        a = list(zip(e[:n], e[n:2 * n]))
        b = list(zip(e[2 * n:3 * n], e[3 * n:]))
        return _lift(self.fp, self.fq, _match_lists(a, b))

    def maps(self, x: tuple) -> list:
        if self.rows is None:
            return []
        return self._maps_from(self.entries(x))

    def maps_many(self, xs: Sequence) -> list:
        if self.rows is None:
            return [[] for _ in xs]
        return [self._maps_from(e) for e in self.entries_many(xs)]


def stable_permutation(P: Polytope, Q: Polytope, cell: DirectionCell, mode: Mode | str,
                       samples: Sequence) -> list[StablePermutation]:
    """Feature bijections witnessed at every sample of the cell."""
    mode = Mode(mode)
    if len(samples) < 2:
        raise ValueError("stable_permutation needs at least two samples")
    survivors = None
    for xi in samples:
        here = feature_maps(P, Q, direction(xi), mode)
        survivors = here if survivors is None else [m for m in survivors if m in set(here)]
        if not survivors:
            raise EmptyIntersection(f"no permutation survives every sample of cell {cell.id}",
                                    cell=cell.id)
    return [StablePermutation(sigma=s, orientation=o, support_count=len(samples))
            for s, o in survivors]
