"""Recovery primitives: segment and line comparisons from projected or sectional
distances, 2D reconstruction from normals and edge lengths, and the global
sign/translation patch."""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from math import isqrt
from typing import Optional, Sequence

from .directions import Mode
from .errors import (DirectionOnLine, InputError, IrrationalPolygon, NoConsistentPatch,
                     NotClosed, OriginLine, ParallelNormals, ZeroDirection, ZeroSegment)
from .kernel import (Polytope, add, canonical_line, dot, exact, fmt_vec, frame, is_zero, neg, norm2,
                     scale, sub, vec)
from .shadow import PlanarBody, planar_body

ZERO = (Fraction(0), Fraction(0), Fraction(0))


def random_direction(rng: random.Random) -> tuple:
    while True:
        x = tuple(Fraction(rng.randint(-97, 97), rng.randint(1, 13)) for _ in range(3))
        if not is_zero(x):
            return x


def _check_dirs(dirs) -> list:
    if not dirs:
        raise ValueError("at least one direction is required")
    out = [exact(d) for d in dirs]
    if any(is_zero(d) for d in out):
        raise ZeroDirection("directions must be nonzero")
    return out


# ---------------------------------------------------------------------------
# Segments


@dataclass(frozen=True)
class ParallelEqual:
    direction: tuple
    length2: Fraction
    sign: int            # D - C = sign * (B - A)


@dataclass(frozen=True)
class Distinct:
    witness: tuple


def projected_length2(u, x) -> Fraction:
    """|u projected to x-perp|^2 times |x|^2."""
    ux = dot(u, x)
    return norm2(u) * norm2(x) - ux * ux


def segment_pair_test(A, B, C, D, dirs: Sequence) -> ParallelEqual | Distinct:
    """Compare segments AB and CD through their projections onto x-perp.

    Equal projected lengths along an open set of directions force CD to be a
    translate of AB or of BA.  ``dirs`` should come from an open region; when
    none of them separates the segments but they are not parallel-equal, a
    separating direction is searched deterministically.
    """
    A, B, C, D = exact(A), exact(B), exact(C), exact(D)
    if A == B or C == D:
        raise ZeroSegment("segments must have distinct endpoints")
    return compare_segments(sub(B, A), sub(D, C), _check_dirs(dirs))


def compare_segments(u, w, dirs) -> ParallelEqual | Distinct:
    """segment_pair_test on edge vectors u = B - A, w = D - C with validated dirs."""
    uu, ww = norm2(u), norm2(w)
    for x in dirs:
        ux, wx = dot(u, x), dot(w, x)
        if (uu - ww) * dot(x, x) != ux * ux - wx * wx:
            return Distinct(witness=x)
    if w == u or w == neg(u):
        return ParallelEqual(direction=u, length2=norm2(u), sign=1 if w == u else -1)
    rng = random.Random(0)
    while True:
        x = random_direction(rng)
        if projected_length2(u, x) != projected_length2(w, x):
            return Distinct(witness=x)


# ---------------------------------------------------------------------------
# Lines


@dataclass(frozen=True)
class ParamLine:
    """Line {b + t a}: a is a primitive integer vector with canonical sign,
    b the foot point closest to the origin (a . b = 0, b != 0)."""

    a: tuple
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", canonical_line(self.a))
        object.__setattr__(self, "b", vec(self.b))
        if dot(self.a, self.b) != 0:
            raise InputError("foot point must be orthogonal to the direction")
        if is_zero(self.b):
            raise OriginLine("line passes through the origin")

    @property
    def a_norm2(self) -> int:
        return norm2(self.a)

    @classmethod
    def make(cls, a, point) -> "ParamLine":
        """Line through ``point`` with direction ``a``."""
        av = canonical_line(vec(a))
        p = vec(point)
        b = sub(p, scale(Fraction(dot(p, av), norm2(av)), av))
        return cls(a=av, b=b)

    @classmethod
    def through(cls, p, q) -> "ParamLine":
        p, q = vec(p), vec(q)
        if p == q:
            raise ZeroSegment("a line needs two distinct points")
        return cls.make(sub(q, p), p)

    def __neg__(self) -> "ParamLine":
        return ParamLine(a=self.a, b=neg(self.b))

    def shifted(self, t) -> "ParamLine":
        return ParamLine.make(self.a, add(self.b, vec(t)))

    def meet(self, x) -> tuple:
        """The point where the line crosses x-perp."""
        xa = dot(x, self.a)
        if xa == 0:
            raise DirectionOnLine("direction is orthogonal to the line")
        return sub(self.b, scale(Fraction(dot(x, self.b), xa), self.a))

    def cleared_meet(self, x) -> tuple:
        """(x . a) times the crossing point: (x.a) b - (x.b) a."""
        xa = dot(x, self.a)
        if xa == 0:
            raise DirectionOnLine("direction is orthogonal to the line")
        xb = dot(x, self.b)
        return tuple(xa * bi - xb * ai for ai, bi in zip(self.a, self.b))

    def to_json(self) -> dict:
        return {"a": fmt_vec(self.a), "b": fmt_vec(self.b)}


@dataclass(frozen=True)
class ParallelTranslate:
    b: tuple


@dataclass(frozen=True)
class ParallelSwap:
    c: tuple


@dataclass(frozen=True)
class SignMatch:
    s1: int
    s2: int
    pairing: str         # "13-24": l3 = s1 l1, l4 = s2 l2;  "14-23": l4 = s1 l1, l3 = s2 l2


@dataclass(frozen=True)
class Inconsistent:
    witness: tuple


def _pair_gap2(l1: ParamLine, l2: ParamLine, x) -> Fraction:
    d = sub(l1.meet(x), l2.meet(x))
    return dot(d, d)


def _rank(vectors) -> int:
    rows = [list(v) for v in vectors if not is_zero(v)]
    rank, col = 0, 0
    while rows and col < 3:
        piv = next((r for r in rows[rank:] if r[col] != 0), None) if rank < len(rows) else None
        if piv is None:
            col += 1
            continue
        i = rows.index(piv, rank)
        rows[rank], rows[i] = rows[i], rows[rank]
        for r in rows[rank + 1:]:
            f = Fraction(r[col]) / rows[rank][col]
            for k in range(3):
                r[k] -= f * rows[rank][k]
        rank += 1
        col += 1
    return rank


def _witness_search(lines, seed: int = 0) -> tuple:
    l1, l2, l3, l4 = lines
    rng = random.Random(seed)
    for _ in range(10_000):
        x = random_direction(rng)
        if any(dot(x, l.a) == 0 for l in lines):
            continue
        if _pair_gap2(l1, l2, x) != _pair_gap2(l3, l4, x):
            return x
    raise AssertionError("no separating direction found; lines satisfy the identity")


def line_pair_classify(l1: ParamLine, l2: ParamLine, l3: ParamLine, l4: ParamLine,
                       dirs: Sequence) -> ParallelTranslate | ParallelSwap | SignMatch | Inconsistent:
    """Classify four lines with |v1 v2| = |v3 v4| for their crossings v_i with x-perp."""
    lines = (l1, l2, l3, l4)
    for x in _check_dirs(dirs):
        if any(dot(x, l.a) == 0 for l in lines):
            raise DirectionOnLine("a supplied direction is orthogonal to one of the lines")
        if _pair_gap2(l1, l2, x) != _pair_gap2(l3, l4, x):
            return Inconsistent(witness=x)

    if l1.a == l2.a:
        if l3.a == l1.a and l4.a == l1.a:
            t = sub(l3.b, l1.b)
            if sub(l4.b, l2.b) == t:
                return ParallelTranslate(b=t)
            c = add(l3.b, l1.b)
            if add(l4.b, l2.b) == c:
                return ParallelSwap(c=c)
        return Inconsistent(witness=_witness_search(lines))

    mixed_allowed = _rank([l1.a, l1.b, l2.a, l2.b]) < 3
    for pairing, (m1, m2) in (("13-24", (l3, l4)), ("14-23", (l4, l3))):
        for s1, s2 in ((1, 1), (-1, -1), (1, -1), (-1, 1)):
            if s1 != s2 and not mixed_allowed:
                continue
            if m1 == (l1 if s1 > 0 else -l1) and m2 == (l2 if s2 > 0 else -l2):
                return SignMatch(s1=s1, s2=s2, pairing=pairing)
    return Inconsistent(witness=_witness_search(lines))


def right_angle_guard(lp: ParamLine, lq: ParamLine, lr: ParamLine, xi) -> bool:
    """True iff the crossings v_p, v_q, v_r of the lines with xi-perp form a
    right angle at v_p; evaluated as a polynomial after clearing the
    denominators (xi . a_i)."""
    x = vec(xi)
    wp, wq, wr = (l.cleared_meet(x) for l in (lp, lq, lr))
    ap, aq, ar = (dot(x, l.a) for l in (lp, lq, lr))
    u = tuple(ap * b - aq * a for a, b in zip(wp, wq))
    v = tuple(ap * b - ar * a for a, b in zip(wp, wr))
    return dot(u, v) == 0


# ---------------------------------------------------------------------------
# Minkowski reconstruction in the plane


def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    q = Fraction(q)
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    return Fraction(n, d) if n * n == q.numerator and d * d == q.denominator else None


def _half(n) -> int:
    return 0 if n[1] > 0 or (n[1] == 0 and n[0] > 0) else 1


def _sort_by_angle(items: list) -> list:
    """Sort (vector, payload) pairs by polar angle in [0, 2pi), exactly."""

    def cmp(a, b):
        ha, hb = _half(a[0]), _half(b[0])
        if ha != hb:
            return ha - hb
        c = a[0][0] * b[0][1] - a[0][1] * b[0][0]
        return -1 if c > 0 else (1 if c < 0 else 0)

    return sorted(items, key=cmp_to_key(cmp))


def minkowski_2d(normals: Sequence, lengths: Sequence) -> PlanarBody:
    """Convex polygon with the given outer edge normals and edge lengths,
    translated so that its lexicographically smallest vertex is the origin."""
    ns = [tuple(Fraction(c) for c in n) for n in normals]
    ls = [Fraction(v) for v in lengths]
    if len(ns) != len(ls):
        raise InputError("normals and lengths must have equal length")
    if len(ns) < 3:
        raise InputError("a polygon needs at least 3 edges")
    if any(n[0] == 0 and n[1] == 0 for n in ns):
        raise ZeroDirection("normals must be nonzero")
    if any(v <= 0 for v in ls):
        raise InputError("lengths must be positive")
    for i in range(len(ns)):
        for j in range(i + 1, len(ns)):
            a, b = ns[i], ns[j]
            if a[0] * b[1] - a[1] * b[0] == 0 and a[0] * b[0] + a[1] * b[1] > 0:
                raise ParallelNormals(f"normals {i} and {j} point the same way")

    # edge_i = l_i / |n_i| * rot90(n_i); |n_i| may be irrational, so split the
    # closure sum by square class of |n_i|^2 (distinct classes are independent)
    m2 = [n[0] * n[0] + n[1] * n[1] for n in ns]
    classes: list[tuple[Fraction, list]] = []
    for i, m in enumerate(m2):
        for rep, members in classes:
            if _rational_sqrt(rep * m) is not None:
                members.append(i)
                break
        else:
            classes.append((m, [i]))
    for rep, members in classes:
        sx = sy = Fraction(0)
        for i in members:
            r = _rational_sqrt(rep / m2[i])       # sqrt(rep) / |n_i|
            sx += ls[i] * r * -ns[i][1]
            sy += ls[i] * r * ns[i][0]
        if sx != 0 or sy != 0:
            raise NotClosed("edge vectors do not sum to zero")
    if len(classes) > 1 or _rational_sqrt(classes[0][0]) is None:
        raise IrrationalPolygon("normals with irrational length give irrational vertices")

    order = _sort_by_angle([(n, i) for i, n in enumerate(ns)])
    pts = [(Fraction(0), Fraction(0))]
    for n, i in order[:-1]:
        k = ls[i] / _rational_sqrt(m2[i])
        x, y = pts[-1]
        pts.append((x - k * n[1], y + k * n[0]))
    r = pts.index(min(pts))
    pts = pts[r:] + pts[:r]
    o = pts[0]
    pts = [(x - o[0], y - o[1]) for x, y in pts]
    return planar_body(frame((0, 0, 1)), pts)


def polygon_normals_lengths(body: PlanarBody) -> tuple[list, list]:
    """Outer normals (rot90 clockwise of each edge) and Euclidean edge lengths
    of a polygon in a standard frame; lengths must be rational."""
    pts = body.vertices2d
    n = len(pts)
    normals, lengths = [], []
    for i in range(n):
        e = (pts[(i + 1) % n][0] - pts[i][0], pts[(i + 1) % n][1] - pts[i][1])
        normals.append((e[1], -e[0]))
        ln = _rational_sqrt(e[0] * e[0] + e[1] * e[1])
        if ln is None:
            raise IrrationalPolygon("edge length is irrational")
        lengths.append(ln)
    return normals, lengths


# ---------------------------------------------------------------------------
# Global patch


@dataclass(frozen=True)
class PatchRecord:
    cell: int
    sign: int            # +1 or -1
    offset: tuple        # ZERO in sections mode


def verify_relation(P: Polytope, Q: Polytope, sign: int, b) -> bool:
    """Exact check that the vertex set of Q equals that of sign * P + b."""
    b = vec(b)
    img = sorted(add(v if sign > 0 else neg(v), b) for v in P.vertices)
    return img == list(Q.vertices)


def global_patch(patch: Sequence[PatchRecord], P: Polytope, Q: Polytope,
                 mode: Mode | str) -> tuple[int, tuple]:
    """Single (sign, b) consistent with the per-cell records, verified exactly;
    + wins when both signs verify."""
    mode = Mode(mode)
    records = list(patch)
    if not records:
        raise InputError("no cell records")
    ids = [r.cell for r in records]
    if len(set(ids)) != len(ids):
        raise InputError("every cell must appear exactly once")
    if mode is Mode.SECTIONS and any(not is_zero(r.offset) for r in records):
        raise InputError("sections mode requires zero offsets")

    counts = Counter((r.sign, tuple(vec(r.offset))) for r in records)
    candidates = sorted(counts, key=lambda sb: (-sb[0], -counts[sb], sb[1]))
    if mode is Mode.SECTIONS:
        candidates = sorted({(s, ZERO) for s, _ in candidates}, key=lambda sb: -sb[0])
    for sign, b in candidates:
        if verify_relation(P, Q, sign, b):
            if sign < 0:
                # centrally symmetric bodies verify with both signs; + wins
                b_plus = ZERO if mode is Mode.SECTIONS else sub(Q.vertices[0], P.vertices[0])
                if verify_relation(P, Q, 1, b_plus):
                    return 1, vec(b_plus)
            return sign, b

    conflict = None
    by_cell = sorted(records, key=lambda r: r.cell)
    for i, r in enumerate(by_cell):
        for s in by_cell[i + 1:]:
            if (r.sign, tuple(r.offset)) != (s.sign, tuple(s.offset)):
                conflict = (r.cell, s.cell)
                break
        if conflict:
            break
    raise NoConsistentPatch("no global sign and offset verifies against the bodies", conflict=conflict)
