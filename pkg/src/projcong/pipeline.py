"""End-to-end recovery: from congruent projections (or sections) of two
polytopes to an exact relation Q = P + b, Q = -P + b, Q = P or Q = -P.

Steps: exceptional circles and their cells; per cell, sampled directions,
all planar congruences lifted to 3D feature bijections and intersected over
the samples; per-cell sign and offset from the surviving bijection; a
global patch verified exactly on the vertex sets.
"""
from __future__ import annotations

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .congruence import ProjectionMatcher, feature_maps
from .directions import (DirectionCell, Mode, arrangement, exceptional_projection_set,
                         degenerate_mask, exceptional_section_set, sample_cell)
from .errors import EmptyIntersection
from .kernel import Polytope, canonical_line, fmt_vec, is_zero, sub
from .shadow import silhouette_from_signs
from .recovery import ZERO, ParamLine, PatchRecord, global_patch, verify_relation

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Config:
    samples_per_cell: int = 8
    seed: int = 0
    float_tol: Optional[float] = None
    mode: Mode = Mode.PROJECTIONS

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.samples_per_cell < 2:
            raise ValueError("samples_per_cell must be at least 2")


@dataclass(frozen=True)
class Translate:
    b: tuple


@dataclass(frozen=True)
class ReflectTranslate:
    b: tuple


@dataclass(frozen=True)
class Identity:
    pass


@dataclass(frozen=True)
class Reflection:
    pass


@dataclass(frozen=True)
class NotCongruent:
    xi: tuple
    cell: int


@dataclass(frozen=True)
class CellEvidence:
    cell: int
    witnesses: int          # congruences found at the first sample
    surviving: int          # bijections witnessed at every sample
    sign: int
    offset: tuple


@dataclass(frozen=True)
class Relation:
    verdict: object
    evidence: tuple = ()
    circles: int = 0
    cells: int = 0

    @property
    def positive(self) -> bool:
        return not isinstance(self.verdict, NotCongruent)


def verify(P: Polytope, Q: Polytope, relation: Relation) -> bool:
    """Exact vertex-set check of a positive verdict."""
    v = relation.verdict
    if isinstance(v, Translate):
        return verify_relation(P, Q, 1, v.b)
    if isinstance(v, ReflectTranslate):
        return verify_relation(P, Q, -1, v.b)
    if isinstance(v, Identity):
        return verify_relation(P, Q, 1, ZERO)
    if isinstance(v, Reflection):
        return verify_relation(P, Q, -1, ZERO)
    raise ValueError("only positive verdicts can be verified")


def cell_seed(seed: int, cell_id: int) -> int:
    h = hashlib.sha256(f"{seed}:{cell_id}".encode()).digest()
    return int.from_bytes(h[:8], "big")


@lru_cache(maxsize=64)
def _edge_lines(K: Polytope) -> tuple:
    return tuple(ParamLine.through(K.vertices[e.vertices[0]], K.vertices[e.vertices[1]])
                 for e in K.edges)


def _projection_record(P: Polytope, Q: Polytope, cyc: tuple, sigma: dict) -> list:
    """(sign, b) with Q = sign * P + b on the shadow boundary, if sigma gives one.

    Matching shadow edges must be parallel with equal length, i.e. equal up
    to sign as 3D vectors, with one sign along the whole cycle."""
    dp, dq = P.scale, Q.scale
    pv, qv = P.int_vertices, Q.int_vertices
    n = len(cyc)
    sign = None
    for i in range(n):
        p, r = cyc[i], cyc[(i + 1) % n]
        u = sub(pv[r], pv[p])
        w = sub(qv[sigma[r]], qv[sigma[p]])
        s = 1 if all(a * dq == c * dp for a, c in zip(u, w)) else (
            -1 if all(a * dq == -c * dp for a, c in zip(u, w)) else 0)
        if s == 0 or (sign is not None and s != sign):
            return []
        sign = s
    offs = {tuple(a * dp - sign * c * dq for a, c in zip(qv[sigma[p]], pv[p])) for p in cyc}
    if len(offs) != 1:
        return []
    (off,) = offs
    return [(sign, tuple(Fraction(c, dp * dq) for c in off))]


def _section_record(P: Polytope, Q: Polytope, sigma: dict) -> list:
    lp, lq = _edge_lines(P), _edge_lines(Q)
    out = []
    for s in (1, -1):
        if all(lq[j] == (lp[i] if s > 0 else -lp[i]) for i, j in sigma.items()):
            out.append((s, ZERO))
    return out


def _facet_keys(K: Polytope, circles: tuple) -> tuple:
    """(circle id, orientation) of every facet normal of K; every facet
    normal spans one of the circles, so sign(normal . x) on a cell is read
    off the cell's sign vector."""
    index = {c.normal: c.id for c in circles}
    out = []
    for f in K.facets:
        line = canonical_line(f.normal)
        out.append((index[line], 1 if line == f.normal else -1))
    return tuple(out)


def _cell_work(P: Polytope, Q: Polytope, cell: DirectionCell, circles: tuple, cfg: Config,
               facet_keys: Optional[tuple] = None):
    """Per-cell step; returns ("fail", sample index, xi) or ("ok", CellEvidence)."""
    mode = cfg.mode
    samples = sample_cell(cell, circles, cfg.samples_per_cell, cell_seed(cfg.seed, cell.id),
                          reject_many=lambda xs: degenerate_mask(xs, P, Q, mode))
    cycles = None
    if mode is Mode.PROJECTIONS:
        sv = cell.sign_vector
        cycles = tuple(silhouette_from_signs(K, [sv[j] * o for j, o in keys])
                       for K, keys in zip((P, Q), facet_keys))
    matcher = ProjectionMatcher(P, Q, cycles, samples[0]) if cycles else None
    survivors = None
    first_count = 0
    per_sample = matcher.maps_many(samples) if matcher else None
    for k, x in enumerate(samples):
        maps = per_sample[k] if matcher else feature_maps(P, Q, x, mode)
        if not maps:
            return ("fail", k, x)
        if survivors is None:
            survivors, first_count = maps, len(maps)
        else:
            here = set(maps)
            survivors = [m for m in survivors if m in here]
    if not survivors:
        raise EmptyIntersection(f"no feature bijection survives all samples of cell {cell.id}",
                                cell=cell.id)

    cands = set()
    cyc = matcher.fp if matcher else None
    for sigma, _orient in survivors:
        smap = dict(sigma)
        if mode is Mode.PROJECTIONS:
            cands.update(_projection_record(P, Q, cyc, smap))
        else:
            cands.update(_section_record(P, Q, smap))
    if not cands:
        raise EmptyIntersection(f"no surviving bijection of cell {cell.id} yields a sign and offset",
                                cell=cell.id)
    sign, off = min(cands, key=lambda sb: (-sb[0], sb[1]))
    return ("ok", CellEvidence(cell=cell.id, witnesses=first_count, surviving=len(survivors),
                               sign=sign, offset=off))


def _cell_job(args):
    return _cell_work(*args)


def decide(P: Polytope, Q: Polytope, cfg: Config = Config(), jobs: int = 1) -> Relation:
    """Recover the relation between P and Q from their planar slices.

    Positive verdicts are checked exactly before they are returned; finite
    sampling can only produce retryable failures.
    """
    mode = cfg.mode
    if mode is Mode.PROJECTIONS:
        circles = exceptional_projection_set(P, Q)
    else:
        circles = exceptional_section_set(P, Q)
    arr = arrangement(circles)
    circles = arr.circles
    keys = (_facet_keys(P, circles), _facet_keys(Q, circles)) if mode is Mode.PROJECTIONS else None
    tasks = [(P, Q, cell, circles, cfg, keys) for cell in arr.cells]

    evidence = []

    def consume(results):
        for cell, res in zip(arr.cells, results):
            if res[0] == "fail":
                return NotCongruent(xi=res[2], cell=cell.id)
            evidence.append(res[1])
        return None

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            failure = consume(pool.map(_cell_job, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        failure = consume(_cell_work(*t) for t in tasks)
    if failure is not None:
        return Relation(verdict=failure, circles=len(circles), cells=len(arr.cells))

    records = [PatchRecord(cell=e.cell, sign=e.sign, offset=e.offset) for e in evidence]
    sign, b = global_patch(records, P, Q, mode)
    if mode is Mode.PROJECTIONS:
        verdict = Translate(b) if sign > 0 else ReflectTranslate(b)
    else:
        assert is_zero(b)
        verdict = Identity() if sign > 0 else Reflection()
    rel = Relation(verdict=verdict, evidence=tuple(evidence), circles=len(circles),
                   cells=len(arr.cells))
    assert verify(P, Q, rel), "positive verdict failed exact verification"
    return rel


# ---------------------------------------------------------------------------
# Reporting


def verdict_json(v) -> dict:
    if isinstance(v, (Translate, ReflectTranslate)):
        return {"kind": type(v).__name__, "b": fmt_vec(v.b)}
    if isinstance(v, NotCongruent):
        return {"kind": "NotCongruent", "xi": fmt_vec(v.xi), "cell": v.cell}
    return {"kind": type(v).__name__}


def report(relation: Relation, cfg: Config) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "mode": cfg.mode.value,
        "config": {"samples_per_cell": cfg.samples_per_cell, "seed": cfg.seed},
        "verdict": verdict_json(relation.verdict),
        "tie_break": "+ is preferred when both signs verify",
        "arrangement": {"circles": relation.circles, "cells": relation.cells},
        "evidence": [{"cell": e.cell, "witnesses": e.witnesses, "surviving": e.surviving,
                      "sign": "+" if e.sign > 0 else "-", "offset": fmt_vec(e.offset)}
                     for e in relation.evidence],
    }


def report_json(relation: Relation, cfg: Config) -> str:
    return json.dumps(report(relation, cfg), indent=2) + "\n"
