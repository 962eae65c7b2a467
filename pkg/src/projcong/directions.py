"""Direction space: exceptional great circles, their exact arrangement on the
sphere, per-cell sampling and the degeneracy predicates used to reject
samples."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cmp_to_key, lru_cache, reduce
from itertools import combinations
from math import lcm
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import SamplingExhausted
from .kernel import Polytope, canonical_line, cross, direction, dot, is_zero, primitive, sub


class Mode(str, Enum):
    PROJECTIONS = "projections"
    SECTIONS = "sections"


@dataclass(frozen=True)
class FacetParallel:
    facet: int
    body: int


@dataclass(frozen=True)
class VertexPerp:
    vertex: int
    body: int


@dataclass(frozen=True)
class GreatCircle:
    """The circle {xi : xi . normal = 0}; provenance lists every source feature."""

    id: int
    normal: tuple
    provenance: tuple


@dataclass(frozen=True)
class DirectionCell:
    id: int
    sample_interior_point: tuple
    bounding_circles: tuple
    sign_vector: tuple          # +1 / -1 per circle, indexed by circle id
    corners: tuple = field(default=(), compare=False)

    def contains(self, xi, circles: Sequence[GreatCircle]) -> bool:
        return all(_sgn(dot(c.normal, xi)) == s for c, s in zip(circles, self.sign_vector))


@dataclass(frozen=True)
class Arrangement:
    circles: tuple
    vertices: tuple             # (point, circle ids through it)
    cells: tuple

    @property
    def edge_count(self) -> int:
        per_circle = [0] * len(self.circles)
        for _, through in self.vertices:
            for j in through:
                per_circle[j] += 1
        # a circle without vertices is one closed edge-free loop; it adds no edges
        return sum(per_circle)

    def euler(self) -> int:
        return len(self.vertices) - self.edge_count + len(self.cells)


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def _collect(tagged) -> list[GreatCircle]:
    groups: dict[tuple, list] = {}
    for normal, tag in tagged:
        groups.setdefault(canonical_line(normal), []).append(tag)
    return [GreatCircle(id=i, normal=n, provenance=tuple(groups[n]))
            for i, n in enumerate(sorted(groups))]


def exceptional_projection_set(P: Polytope, Q: Optional[Polytope] = None) -> list[GreatCircle]:
    """Directions parallel to some facet of P or Q, one circle per normal line."""
    bodies = (P,) if Q is None else (P, Q)
    return _collect((f.normal, FacetParallel(i, body))
                    for body, K in enumerate(bodies) for i, f in enumerate(K.facets))


def exceptional_section_set(P: Polytope, Q: Optional[Polytope] = None) -> list[GreatCircle]:
    """Directions whose orthogonal plane passes through a vertex of P or Q."""
    bodies = (P,) if Q is None else (P, Q)
    for K in bodies:
        K.require_origin_interior()
    return _collect((v, VertexPerp(i, body))
                    for body, K in enumerate(bodies) for i, v in enumerate(K.int_vertices))


# ---------------------------------------------------------------------------
# Arrangement


def _angular_sort(rays: list, axis) -> list:
    """Sort tangent vectors at a sphere point counterclockwise about ``axis``."""
    r0 = rays[0]

    def half(t):
        c = dot(cross(r0, t), axis)
        return 0 if c > 0 or (c == 0 and dot(r0, t) > 0) else 1

    def cmp(s, t):
        hs, ht = half(s), half(t)
        if hs != ht:
            return hs - ht
        c = dot(cross(s, t), axis)
        return -1 if c > 0 else (1 if c < 0 else 0)

    return sorted(rays, key=cmp_to_key(cmp))


def _unit(v):
    n = math.sqrt(sum(float(a) * float(a) for a in v))
    return tuple(float(a) / n for a in v)


def _round_filtered(target, signed, abs_signed, normals, signs, scales, skip):
    """Smallest-scale integer rounding of a float direction that lands
    strictly inside the region of (normals, signs) and is not in ``skip``;
    None if none does.  ``signed`` holds the normals times the wanted signs
    as floats: a filter in front of the exact check."""
    for k in scales:
        cf = np.rint(target * float(1 << k))
        vals = signed @ cf
        err = (abs_signed @ np.abs(cf)) * 1e-12
        if not (vals > err).all():
            if (vals < -err).any() or not cf.any():
                continue
            cand = tuple(int(a) for a in cf)
            if not all(_sgn(dot(n, cand)) == sg for n, sg in zip(normals, signs)):
                continue
        cand = primitive(tuple(int(a) for a in cf))
        if cand not in skip:
            return cand
    return None


def _exact_interior(p, w, normals, signs, through) -> tuple:
    """p + eps*w with eps small enough to stay on the correct side of every
    circle not through p."""
    eps = None
    for j, n in enumerate(normals):
        if j in through:
            continue
        np_, nw = dot(n, p), dot(n, w)
        if nw != 0 and _sgn(nw) != _sgn(np_):
            r = abs(np_) / abs(nw)
            eps = r if eps is None or r < eps else eps
    eps = Fraction(1) if eps is None else Fraction(eps) / 2
    return primitive(tuple(a + eps * b for a, b in zip(p, w)))


def cells(circles: Sequence[GreatCircle]) -> list[DirectionCell]:
    return arrangement(circles).cells


def arrangement(circles: Sequence[GreatCircle]) -> Arrangement:
    """Exact arrangement of great circles; cells sorted by sign vector."""
    circles = tuple(circles)
    normals = [c.normal for c in circles]
    m = len(normals)
    if m == 0:
        raise ValueError("an arrangement needs at least one circle")
    if m == 1:
        n = normals[0]
        cl = [DirectionCell(id=i, sample_interior_point=tuple(s * a for a in n),
                            bounding_circles=(0,), sign_vector=(s,))
              for i, s in enumerate((-1, 1))]
        return Arrangement(circles=circles, vertices=(), cells=tuple(cl))

    lines: dict[tuple, set] = {}
    for i, j in combinations(range(m), 2):
        lines.setdefault(canonical_line(cross(normals[i], normals[j])), set()).update((i, j))

    vertices = []
    found: dict[tuple, dict] = {}
    for line in sorted(lines):
        through = tuple(sorted(lines[line]))
        for p in (line, tuple(-a for a in line)):
            vertices.append((p, through))
            rays = []
            for j in through:
                t = cross(normals[j], p)
                rays.append((t, j))
                rays.append((tuple(-a for a in t), j))
            order = _angular_sort([r for r, _ in rays], p)
            owner = {r: j for r, j in rays}
            base = [_sgn(dot(n, p)) for n in normals]
            for a in range(len(order)):
                ta, tb = order[a], order[(a + 1) % len(order)]
                w = tuple(x + y for x, y in zip(ta, tb))
                sv = list(base)
                for j in through:
                    sv[j] = _sgn(dot(normals[j], w))
                key = tuple(sv)
                rec = found.setdefault(key, {"corners": [], "bounds": set(), "seed": (p, w, through)})
                rec["corners"].append((p, w))
                rec["bounds"].update((owner[ta], owner[tb]))

    nrm = np.array(normals, dtype=float)
    cl = []
    for cid, key in enumerate(sorted(found)):
        rec = found[key]
        # corner average; the corners of a lune cancel, so use their inward tangents
        tv = np.sum([_unit(p) for p, _ in rec["corners"]], axis=0)
        if np.linalg.norm(tv) < 1e-9:
            tv = np.sum([_unit(w) for _, w in rec["corners"]], axis=0)
        pt = None
        sg = np.array(key, dtype=float)[:, None] * nrm
        margin = ((sg / np.linalg.norm(sg, axis=1)[:, None]) @ tv).min() / max(np.linalg.norm(tv), 1e-300)
        if margin > 1e-12:
            k0 = max(3, math.ceil(math.log2(1.0 / margin)) + 1)
            pt = _round_filtered(tv, sg, np.abs(sg), normals, key, range(k0, 56, 3), ())
        if pt is None:
            p, w, through = rec["seed"]
            pt = _exact_interior(p, w, normals, key, set(through))
        assert all(_sgn(dot(n, pt)) == s for n, s in zip(normals, key))
        cl.append(DirectionCell(id=cid, sample_interior_point=pt,
                                bounding_circles=tuple(sorted(rec["bounds"])),
                                sign_vector=key,
                                corners=tuple(p for p, _ in rec["corners"])))
    return Arrangement(circles=circles, vertices=tuple(vertices), cells=tuple(cl))


# ---------------------------------------------------------------------------
# Sampling


def sample_cell(cell: DirectionCell, circles: Sequence[GreatCircle], n: int, seed: int,
                reject: Optional[Callable[[tuple], bool]] = None,
                reject_many: Optional[Callable[[list], list]] = None) -> list[tuple]:
    """n distinct primitive integer directions strictly inside ``cell``.

    Points are drawn along random geodesics through the cell's interior
    point, rounded to small integers and checked exactly.  ``reject`` lets the
    caller veto a candidate (degeneracy predicates); ``reject_many`` does the
    same for a whole batch of candidates at once.
    """
    if n < 1:
        raise ValueError("sample_cell needs n >= 1")
    rng = np.random.default_rng(seed)
    normals = [c.normal for c in circles]
    signs = cell.sign_vector
    c = np.array(_unit(cell.sample_interior_point))
    nf = np.array(normals, dtype=float) * np.array(signs, dtype=float)[:, None]
    nf /= np.linalg.norm(nf, axis=1)[:, None]
    a_coef = nf @ c
    signed = np.array(normals, dtype=float) * np.array(signs, dtype=float)[:, None]
    abs_signed = np.abs(signed)

    out: list[tuple] = []
    seen = set()
    rejections = 0
    limit = 10_000 * n
    while len(out) < n:
        batch = n - len(out) + 2
        g = rng.standard_normal((batch, 3))
        us = rng.uniform(0.02, 0.98, batch)
        d = g - np.outer(g @ c, c)
        dn = np.linalg.norm(d, axis=1)
        ok = dn > 1e-12
        d[ok] /= dn[ok][:, None]
        b = d @ nf.T
        with np.errstate(divide="ignore"):
            cut = np.where(b < 0, np.arctan2(a_coef[None, :], -b), np.inf)
        t_max = np.minimum(cut.min(axis=1), math.pi / 2)
        t = us * t_max
        targets = np.cos(t)[:, None] * c[None, :] + np.sin(t)[:, None] * d
        margins = (targets @ nf.T).min(axis=1)
        ok &= margins > 0
        # rounding moves a unit vector by at most sqrt(3)/2 / scale
        k0 = np.maximum(8, np.ceil(np.log2(1.0 / np.where(ok, margins, 1.0))) + 1)
        cf = np.rint(targets * np.exp2(k0)[:, None])
        vals = cf @ signed.T
        err = (np.abs(cf) @ abs_signed.T) * 1e-12
        first_ok = ((vals > err).all(axis=1) & ok).tolist()
        rounded = cf.astype(np.int64).tolist()
        cands = []
        for r in range(batch):
            cand = None
            if first_ok[r]:
                cand = primitive(tuple(rounded[r]))
            elif ok[r]:
                cand = _round_filtered(targets[r], signed, abs_signed, normals, signs,
                                       range(int(k0[r]), 56, 4), seen)
            cands.append(cand)
        vetoed = [False] * batch
        if reject_many is not None:
            live = [r for r, x in enumerate(cands) if x is not None]
            for r, bad in zip(live, reject_many([cands[r] for r in live])):
                vetoed[r] = bad
        for cand, bad in zip(cands, vetoed):
            if len(out) >= n:
                break
            if cand is None or bad or cand in seen or (reject is not None and reject(cand)):
                rejections += 1
                if rejections >= limit:
                    raise SamplingExhausted(f"cell {cell.id}: {rejections} rejected samples")
                continue
            seen.add(cand)
            out.append(cand)
    return out


# ---------------------------------------------------------------------------
# Degeneracy predicates


@lru_cache(maxsize=64)
def _edge_line_pairs(P: Polytope) -> tuple:
    """Distinct edge direction lines, all index pairs, and float copies for
    the filtered evaluation."""
    lines = sorted({canonical_line(v) for v in P.int_edge_vectors})
    pairs = list(combinations(range(len(lines)), 2))
    ii = np.array([i for i, _ in pairs], dtype=np.intp)
    jj = np.array([j for _, j in pairs], dtype=np.intp)
    fl = np.array(lines, dtype=float)
    ab = np.einsum("ij,ij->i", fl[ii], fl[jj])
    return tuple(lines), ii, jj, fl, ab


def orthogonal_projected_pair(P: Polytope, x) -> Optional[tuple]:
    """Some pair of edge directions of P whose projections onto x-perp are
    orthogonal, i.e. (a.b)|x|^2 - (a.x)(b.x) = 0; None when there is none.

    Evaluated in floating point with an error bound; only pairs the bound
    cannot decide are re-evaluated exactly.
    """
    lines, ii, jj, fl, ab = _edge_line_pairs(P)
    if len(ii) == 0:
        return None
    xf = np.array(x, dtype=float)
    ax = fl @ xf
    xx = float(xf @ xf)
    t1 = ab * xx
    t2 = ax[ii] * ax[jj]
    bound = (np.abs(t1) + np.abs(t2)) * 1e-12
    unsure = np.nonzero(np.abs(t1 - t2) <= bound)[0]
    xx_exact = dot(x, x)
    for k in unsure:
        a, b = lines[ii[k]], lines[jj[k]]
        if dot(a, b) * xx_exact == dot(a, x) * dot(b, x):
            return a, b
    return None


def right_angle_in_section(P: Polytope, x) -> Optional[tuple]:
    """Some vertex triple (p, q, r), q < r, of the section by x-perp with a
    right angle at p; None when there is none.  Floating-point filtered; the
    first exact hit in lexicographic order is returned."""
    from .shadow import section_points
    sp = section_points(P, x)
    w = reduce(lcm, (d for _, d in sp), 1)
    pts = [tuple(a * (w // d) for a in n) for n, d in sp]
    k = len(pts)
    X = np.array(pts, dtype=float)
    U = X[None, :, :] - X[:, None, :]                     # U[p, q] = pts[q] - pts[p]
    G = np.einsum("pqi,pri->pqr", U, U)
    nrm = np.linalg.norm(U, axis=2)
    bound = nrm[:, :, None] * nrm[:, None, :] * 1e-9
    idx = np.arange(k)
    mask = (idx[None, :, None] < idx[None, None, :]) & (idx[:, None, None] != idx[None, :, None]) \
        & (idx[:, None, None] != idx[None, None, :])
    for p, q, r in np.argwhere(mask & (np.abs(G) <= bound)):
        if dot(sub(pts[q], pts[p]), sub(pts[r], pts[p])) == 0:
            return int(p), int(q), int(r)
    return None


def _orthogonal_pair_rows(P: Polytope, xs: list) -> list:
    """orthogonal_projected_pair(P, x) is not None, for every x in xs."""
    lines, ii, jj, fl, ab = _edge_line_pairs(P)
    if len(ii) == 0:
        return [False] * len(xs)
    X = np.array(xs, dtype=float)
    ax = X @ fl.T
    t1 = (X * X).sum(axis=1)[:, None] * ab
    t2 = ax[:, ii]
    t2 *= ax[:, jj]
    gap = np.abs(t1 - t2)
    np.abs(t1, out=t1)
    np.abs(t2, out=t2)
    t1 += t2
    t1 *= 1e-12
    unsure = gap <= t1
    out = [False] * len(xs)
    for r in np.nonzero(unsure.any(axis=1))[0]:
        x = xs[r]
        xx = dot(x, x)
        out[r] = any(dot(lines[ii[k]], lines[jj[k]]) * xx == dot(lines[ii[k]], x) * dot(lines[jj[k]], x)
                     for k in np.nonzero(unsure[r])[0])
    return out


@lru_cache(maxsize=64)
def _same_up_to_sign(P: Polytope, Q: Polytope) -> bool:
    vp = set(P.vertices)
    return set(Q.vertices) in (vp, {tuple(-a for a in v) for v in vp})


def is_degenerate_direction(xi, P: Polytope, Q: Polytope, mode: Mode | str) -> bool:
    """True when xi lies on the nowhere-dense set the recovery must avoid."""
    mode = Mode(mode)
    x = direction(xi)
    if mode is Mode.PROJECTIONS:
        if orthogonal_projected_pair(P, x) is not None:
            return True
        # translates and reflections share their edge lines; no need to redo them
        if _edge_line_pairs(Q)[0] == _edge_line_pairs(P)[0]:
            return False
        return orthogonal_projected_pair(Q, x) is not None
    if right_angle_in_section(P, x) is not None:
        return True
    # sections of -P are reflections of those of P, with the same angles
    if _same_up_to_sign(P, Q):
        return False
    return right_angle_in_section(Q, x) is not None


def degenerate_mask(xs: Sequence, P: Polytope, Q: Polytope, mode: Mode | str) -> list[bool]:
    """is_degenerate_direction over a batch of directions."""
    mode = Mode(mode)
    xs = [direction(x) for x in xs]
    if not xs:
        return []
    if mode is Mode.SECTIONS:
        return [is_degenerate_direction(x, P, Q, mode) for x in xs]
    bad = _orthogonal_pair_rows(P, xs)
    if _edge_line_pairs(Q)[0] != _edge_line_pairs(P)[0]:
        bad = [a or b for a, b in zip(bad, _orthogonal_pair_rows(Q, xs))]
    return bad
