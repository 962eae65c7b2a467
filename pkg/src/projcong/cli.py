"""Command line interface.

Exit codes: 0 positive verdict or success, 1 NotCongruent, 2 retryable
failure (more samples may help), 3 input error.
"""
from __future__ import annotations

import argparse
import os
import random
import sys
from pathlib import Path

from . import io
from .congruence import congruence_witnesses
from .directions import (FacetParallel, Mode, arrangement, exceptional_projection_set,
                         exceptional_section_set)
from .errors import InputError, RetryableFailure
from .kernel import dot, fmt_vec
from .pipeline import Config, decide, report_json
from .recovery import (Inconsistent, ParallelSwap, ParallelTranslate, SignMatch,
                       line_pair_classify, minkowski_2d, random_direction)
from .shadow import project, section
from .svg import arrangement_svg, planar_body_svg

EXIT_OK, EXIT_NOT_CONGRUENT, EXIT_RETRY, EXIT_INPUT = 0, 1, 2, 3


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_decide(args) -> int:
    P = io.read_polytope(args.P, args.float_tol)
    Q = io.read_polytope(args.Q, args.float_tol)
    cfg = Config(samples_per_cell=args.samples, seed=args.seed, float_tol=args.float_tol,
                 mode=Mode(args.mode))
    rel = decide(P, Q, cfg, jobs=args.jobs)
    _emit(report_json(rel, cfg), args.report)
    return EXIT_OK if rel.positive else EXIT_NOT_CONGRUENT


def _planar(args, op) -> int:
    P = io.read_polytope(args.P, args.float_tol)
    body = op(P, io.parse_vector(args.xi, 3))
    _emit(io.dumps(io.planar_body_to_json(body)), args.out)
    if args.svg:
        Path(args.svg).write_text(planar_body_svg(body))
    return EXIT_OK


def _provenance_json(tag) -> dict:
    if isinstance(tag, FacetParallel):
        return {"kind": "facet", "body": tag.body, "facet": tag.facet}
    return {"kind": "vertex", "body": tag.body, "vertex": tag.vertex}


def _cmd_stratify(args) -> int:
    bodies = [io.read_polytope(p, args.float_tol) for p in args.polytopes]
    if len(bodies) > 2:
        raise InputError("stratify takes one or two polytopes")
    build = exceptional_projection_set if args.mode == Mode.PROJECTIONS.value else exceptional_section_set
    arr = arrangement(build(*bodies))
    data = {
        "circles": [{"id": c.id, "normal": fmt_vec(c.normal),
                     "provenance": [_provenance_json(t) for t in c.provenance]} for c in arr.circles],
        "cells": [{"id": c.id, "sample_point": fmt_vec(c.sample_interior_point),
                   "sign_vector": list(c.sign_vector)} for c in arr.cells],
    }
    _emit(io.dumps(data), args.out)
    if args.svg:
        Path(args.svg).write_text(arrangement_svg(arr))
    return EXIT_OK


def _cmd_congruent(args) -> int:
    A = io.read_planar_body(args.A, args.float_tol)
    B = io.read_planar_body(args.B, args.float_tol)
    ws = congruence_witnesses(A, B)
    data = {"congruent": bool(ws),
            "witnesses": [{"orientation": w.orientation.value, "vertex_map": list(w.vertex_map),
                           "motion": {"linear": [list(r) for r in w.motion[0]],
                                      "translation": list(w.motion[1])}} for w in ws]}
    _emit(io.dumps(data), args.out)
    return EXIT_OK


def _cmd_minkowski(args) -> int:
    normals, lengths = io.read_polygon_data(args.input, args.float_tol)
    body = minkowski_2d(normals, lengths)
    _emit(io.dumps(io.planar_body_to_json(body)), args.out)
    if args.svg:
        Path(args.svg).write_text(planar_body_svg(body))
    return EXIT_OK


def _classification_json(c) -> dict:
    if isinstance(c, ParallelTranslate):
        return {"kind": "ParallelTranslate", "b": fmt_vec(c.b)}
    if isinstance(c, ParallelSwap):
        return {"kind": "ParallelSwap", "c": fmt_vec(c.c)}
    if isinstance(c, SignMatch):
        return {"kind": "SignMatch", "s1": c.s1, "s2": c.s2, "pairing": c.pairing}
    assert isinstance(c, Inconsistent)
    return {"kind": "Inconsistent", "witness": fmt_vec(c.witness)}


def _cmd_classify(args) -> int:
    lines, dirs = io.read_lines(args.input)
    if not dirs:
        rng = random.Random(args.seed)
        while len(dirs) < 3:
            x = random_direction(rng)
            if all(dot(x, l.a) != 0 for l in lines):
                dirs.append(x)
    _emit(io.dumps(_classification_json(line_pair_classify(*lines, dirs))), args.out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors are input errors, not the retryable code argparse would use
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="projcong",
                 description="Recover polytopes from congruent projections or sections.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, out=True):
        p.add_argument("--float-tol", type=float, default=None,
                       help="accept float coordinates, snapped to rationals within this tolerance")
        if out:
            p.add_argument("--out", default=None, help="write JSON here instead of stdout")

    p = sub.add_parser("decide", help="recover the relation between two polytopes")
    p.add_argument("P")
    p.add_argument("Q")
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.PROJECTIONS.value)
    p.add_argument("--samples", type=int, default=Config.samples_per_cell)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--report", default=None, help="write the JSON report here instead of stdout")
    common(p, out=False)
    p.set_defaults(func=_cmd_decide)

    for name, op in (("project", project), ("section", section)):
        p = sub.add_parser(name, help=f"{name} a polytope onto/by the plane orthogonal to xi")
        p.add_argument("P")
        p.add_argument("--xi", required=True, help="direction as p,q,r (rationals)")
        p.add_argument("--svg", default=None)
        common(p)
        p.set_defaults(func=lambda a, op=op: _planar(a, op))

    p = sub.add_parser("stratify", help="exceptional great circles and their cells")
    p.add_argument("polytopes", nargs="+")
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.PROJECTIONS.value)
    p.add_argument("--svg", default=None)
    common(p)
    p.set_defaults(func=_cmd_stratify)

    p = sub.add_parser("congruent", help="planar congruences between two bodies")
    p.add_argument("A")
    p.add_argument("B")
    common(p)
    p.set_defaults(func=_cmd_congruent)

    p = sub.add_parser("minkowski2d", help="polygon from edge normals and lengths")
    p.add_argument("input")
    p.add_argument("--svg", default=None)
    common(p)
    p.set_defaults(func=_cmd_minkowski)

    p = sub.add_parser("classify-lines", help="classify four lines with equal crossing distances")
    p.add_argument("input")
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=_cmd_classify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "jobs", 1) < 1 or getattr(args, "samples", 2) < 2:
            raise InputError("--jobs must be >= 1 and --samples >= 2")
        return args.func(args)
    except InputError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except RetryableFailure as e:
        print(f"retryable failure ({type(e).__name__}): {e}", file=sys.stderr)
        return EXIT_RETRY


if __name__ == "__main__":
    sys.exit(main())
