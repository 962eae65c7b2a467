"""Minimal SVG output: arrangements in plate carree, planar bodies in frame coordinates."""
from __future__ import annotations

import math

from .directions import Arrangement
from .shadow import PlanarBody

_W, _H = 720, 360


def _lonlat(v) -> tuple:
    x, y, z = (float(a) for a in v)
    r = math.sqrt(x * x + y * y + z * z)
    return math.degrees(math.atan2(y, x)), math.degrees(math.asin(max(-1.0, min(1.0, z / r))))


def _px(lon: float, lat: float) -> tuple:
    return (lon + 180.0) / 360.0 * _W, (90.0 - lat) / 180.0 * _H


def _circle_points(normal, steps: int = 360) -> list:
    n = [float(a) for a in normal]
    # any vector not parallel to n, then an orthonormal pair spanning the circle
    t = [1.0, 0.0, 0.0] if abs(n[0]) < 0.9 * math.sqrt(sum(a * a for a in n)) else [0.0, 1.0, 0.0]
    u = [n[1] * t[2] - n[2] * t[1], n[2] * t[0] - n[0] * t[2], n[0] * t[1] - n[1] * t[0]]
    lu = math.sqrt(sum(a * a for a in u))
    u = [a / lu for a in u]
    ln = math.sqrt(sum(a * a for a in n))
    m = [a / ln for a in n]
    w = [m[1] * u[2] - m[2] * u[1], m[2] * u[0] - m[0] * u[2], m[0] * u[1] - m[1] * u[0]]
    return [tuple(math.cos(a) * p + math.sin(a) * q for p, q in zip(u, w))
            for a in (2 * math.pi * k / steps for k in range(steps + 1))]


def arrangement_svg(arr: Arrangement) -> str:
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
             f'viewBox="0 0 {_W} {_H}">',
             f'<rect width="{_W}" height="{_H}" fill="white" stroke="black"/>']
    for c in arr.circles:
        runs, cur, prev = [], [], None
        for p in _circle_points(c.normal):
            lon, lat = _lonlat(p)
            if prev is not None and abs(lon - prev) > 180:
                runs.append(cur)
                cur = []
            cur.append(_px(lon, lat))
            prev = lon
        runs.append(cur)
        for run in runs:
            if len(run) > 1:
                pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in run)
                parts.append(f'<polyline points="{pts}" fill="none" stroke="steelblue" stroke-width="0.8"/>')
    for cell in arr.cells:
        x, y = _px(*_lonlat(cell.sample_interior_point))
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="1.6" fill="crimson"><title>cell {cell.id}</title></circle>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def planar_body_svg(A: PlanarBody, size: int = 400) -> str:
    pts = A.euclidean()
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    pad = 0.1 * span
    s = (size - 20) / (span + 2 * pad)

    def px(p):
        return 10 + (p[0] - min(xs) + pad) * s, size - 10 - (p[1] - min(ys) + pad) * s

    poly = " ".join("{:.2f},{:.2f}".format(*px(p)) for p in pts)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">',
             f'<polygon points="{poly}" fill="lightsteelblue" stroke="black"/>']
    for i, p in enumerate(pts):
        x, y = px(p)
        parts.append(f'<text x="{x + 3:.2f}" y="{y - 3:.2f}" font-size="10">{i}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
