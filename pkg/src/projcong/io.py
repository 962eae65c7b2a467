"""JSON readers and writers for polytopes, planar bodies, polygons and lines."""
from __future__ import annotations

import json
import math
import re
from fractions import Fraction
from pathlib import Path

from .errors import InputError
from .kernel import Frame, Polytope, dot, fmt_rat, fmt_vec, frame, hull, is_zero
from .recovery import ParamLine
from .shadow import OnEdge, PlanarBody, VertexOf, planar_body

_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


def parse_rational(value, float_tol: float | None = None) -> Fraction:
    """Integer, "p/q" string, or (with a tolerance) a float snapped to the
    simplest nearby rational."""
    if isinstance(value, bool):
        raise InputError(f"not a number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        if not _RATIONAL.match(value):
            raise InputError(f"expected an integer or p/q rational, got {value!r}")
        try:
            return Fraction(value.replace(" ", ""))
        except ZeroDivisionError:
            raise InputError(f"zero denominator in {value!r}") from None
    if isinstance(value, float):
        if float_tol is None:
            raise InputError(f"float {value!r} given; pass a float tolerance to accept floats")
        if not math.isfinite(value):
            raise InputError(f"non-finite coordinate {value!r}")
        if float_tol <= 0:
            raise InputError("float tolerance must be positive")
        return Fraction(value).limit_denominator(max(1, math.ceil(1 / float_tol)))
    raise InputError(f"not a number: {value!r}")


def parse_vector(values, dim: int, float_tol: float | None = None) -> tuple:
    if isinstance(values, str):
        values = values.split(",")
    if not isinstance(values, (list, tuple)) or len(values) != dim:
        raise InputError(f"expected {dim} coordinates, got {values!r}")
    return tuple(parse_rational(v, float_tol) for v in values)


def _load(source) -> dict:
    if isinstance(source, dict):
        return source
    try:
        return json.loads(Path(source).read_text())
    except OSError as e:
        raise InputError(f"cannot read {source}: {e}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{source}: invalid JSON: {e}") from None


def polytope_from_json(data: dict, float_tol: float | None = None) -> Polytope:
    if not isinstance(data, dict) or "vertices" not in data:
        raise InputError("polytope JSON needs a 'vertices' list")
    if data.get("dim", 3) != 3:
        raise InputError("only dim = 3 is supported")
    return hull(parse_vector(v, 3, float_tol) for v in data["vertices"])


def read_polytope(source, float_tol: float | None = None) -> Polytope:
    return polytope_from_json(_load(source), float_tol)


def polytope_to_json(P: Polytope) -> dict:
    return {"dim": 3, "vertices": [fmt_vec(v) for v in P.vertices]}


def _preimage_json(tag) -> dict:
    if isinstance(tag, VertexOf):
        return {"vertex": tag.vertex}
    return {"edge": tag.edge, "t": fmt_rat(tag.t)}


def _preimage_from_json(d: dict):
    if "vertex" in d:
        return VertexOf(int(d["vertex"]))
    return OnEdge(int(d["edge"]), parse_rational(d["t"]))


def planar_body_to_json(A: PlanarBody) -> dict:
    out = {"frame": A.frame.to_json(), "vertices": [fmt_vec(p) for p in A.vertices2d]}
    if A.preimage:
        out["preimage"] = [_preimage_json(t) for t in A.preimage]
    return out


def planar_body_from_json(data: dict, float_tol: float | None = None) -> PlanarBody:
    """PlanarBody from frame coordinates; the frame defaults to the xy-plane."""
    if not isinstance(data, dict) or "vertices" not in data:
        raise InputError("planar body JSON needs a 'vertices' list")
    fr = frame((0, 0, 1))
    if "frame" in data:
        f = data["frame"]
        xi = parse_vector(f["xi"], 3)
        fr = frame(xi)
        if "basis" in f:
            e1, e2 = (parse_vector(b, 3) for b in f["basis"])
            if any(c.denominator != 1 for c in e1 + e2):
                raise InputError("frame basis vectors must have integer coordinates")
            e1, e2 = tuple(map(int, e1)), tuple(map(int, e2))
            if any(dot(u, v) != 0 for u, v in ((e1, e2), (e1, xi), (e2, xi))) or is_zero(e1) or is_zero(e2):
                raise InputError("frame basis must be nonzero and orthogonal to xi and to each other")
            fr = Frame(xi=fr.xi, basis=(e1, e2))
    pts = [parse_vector(p, 2, float_tol) for p in data["vertices"]]
    pre = [_preimage_from_json(t) for t in data.get("preimage", [])]
    return planar_body(fr, pts, pre)


def read_planar_body(source, float_tol: float | None = None) -> PlanarBody:
    return planar_body_from_json(_load(source), float_tol)


def read_polygon_data(source, float_tol: float | None = None) -> tuple[list, list]:
    """(normals, lengths) from {"normals": [[a, b], ...], "lengths": [...]}."""
    data = _load(source)
    try:
        normals = [parse_vector(n, 2, float_tol) for n in data["normals"]]
        lengths = [parse_rational(v, float_tol) for v in data["lengths"]]
    except (KeyError, TypeError):
        raise InputError("polygon JSON needs 'normals' and 'lengths'") from None
    return normals, lengths


def _line_from_json(d: dict) -> ParamLine:
    if "points" in d:
        p, q = d["points"]
        return ParamLine.through(parse_vector(p, 3), parse_vector(q, 3))
    return ParamLine.make(parse_vector(d["a"], 3), parse_vector(d["b"], 3))


def read_lines(source) -> tuple[list, list]:
    """Four lines ({"a", "b"} or {"points": [p, q]}) and optional directions."""
    data = _load(source)
    try:
        lines = [_line_from_json(d) for d in data["lines"]]
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError("lines JSON needs four lines given by 'a'/'b' or 'points'") from None
    if len(lines) != 4:
        raise InputError("exactly four lines are required")
    dirs = [parse_vector(x, 3) for x in data.get("directions", [])]
    return lines, dirs


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"
