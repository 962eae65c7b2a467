"""Random rational fixtures: polytopes, polygons, segments and lines."""
from __future__ import annotations

import math
import random
from fractions import Fraction

from .errors import DegenerateInput
from .kernel import Polytope, hull


def random_rational(rng: random.Random, lo: int = -9, hi: int = 9, max_den: int = 5) -> Fraction:
    return Fraction(rng.randint(lo * max_den, hi * max_den), rng.randint(1, max_den))


def random_vector(rng: random.Random, lo: int = -9, hi: int = 9, max_den: int = 5) -> tuple:
    return tuple(random_rational(rng, lo, hi, max_den) for _ in range(3))


def random_polytope(rng: random.Random, n_min: int = 6, n_max: int = 20,
                    origin_interior: bool = True, radius: int = 8, max_den: int = 4) -> Polytope:
    """Hull of rational points near a sphere; retried until the vertex count is
    in [n_min, n_max] (and the origin is interior, when requested)."""
    while True:
        n = rng.randint(n_min, n_max)
        pts = []
        for _ in range(n):
            g = [rng.gauss(0.0, 1.0) for _ in range(3)]
            norm = math.sqrt(sum(a * a for a in g)) or 1.0
            r = radius * rng.uniform(0.9, 1.0)
            den = rng.randint(1, max_den)
            pts.append(tuple(Fraction(round(a / norm * r * den), den) for a in g))
        try:
            P = hull(pts)
        except DegenerateInput:
            continue
        if not n_min <= len(P.vertices) <= n_max:
            continue
        if origin_interior and not P.contains_origin_strictly():
            continue
        return P


def pythagorean_rotation(rng: random.Random) -> tuple:
    """Rational rotation (cos, sin) from a primitive Pythagorean triple."""
    while True:
        m, n = rng.randint(1, 12), rng.randint(1, 12)
        if m > n and math.gcd(m, n) == 1 and (m - n) % 2 == 1:
            a, b, c = m * m - n * n, 2 * m * n, m * m + n * n
            s = rng.choice((1, -1))
            return (Fraction(a, c), Fraction(s * b, c)) if rng.random() < 0.5 else (Fraction(b, c), Fraction(s * a, c))


def rotate2(p, rot) -> tuple:
    c, s = rot
    return (c * p[0] - s * p[1], s * p[0] + c * p[1])


def random_pythagorean_polygon(rng: random.Random, n_min: int = 3, n_max: int = 7) -> list:
    """Convex polygon whose edges have rational lengths: edge vectors are
    rational multiples of rational unit vectors, sorted by angle, and closed
    with a final edge that is made rational by choosing the last two edges
    along prescribed rational unit directions."""
    while True:
        n = rng.randint(n_min, n_max)
        units = set()
        while len(units) < n:
            c, s = pythagorean_rotation(rng)
            units.add((c, s) if rng.random() < 0.5 else (-c, -s))
            units.add((c, s))
        units = sorted(units, key=lambda u: math.atan2(u[1], u[0]))
        dirs = rng.sample(units, n)
        dirs.sort(key=lambda u: math.atan2(u[1], u[0]))
        # consecutive directions must turn by less than pi for a convex closed polygon
        gaps = [(math.atan2(dirs[(i + 1) % n][1], dirs[(i + 1) % n][0])
                 - math.atan2(dirs[i][1], dirs[i][0])) % (2 * math.pi) for i in range(n)]
        if max(gaps) >= math.pi - 1e-9:
            continue
        lengths = [Fraction(rng.randint(1, 40), rng.randint(1, 6)) for _ in range(n - 2)]
        sx = sum(l * d[0] for l, d in zip(lengths, dirs))
        sy = sum(l * d[1] for l, d in zip(lengths, dirs))
        # solve a*d_{n-2} + b*d_{n-1} = -(sx, sy)
        u, v = dirs[n - 2], dirs[n - 1]
        det = u[0] * v[1] - u[1] * v[0]
        if det == 0:
            continue
        a = (-sx * v[1] + sy * v[0]) / det
        b = (-sy * u[0] + sx * u[1]) / det
        if a <= 0 or b <= 0:
            continue
        lengths += [a, b]
        pts = [(Fraction(0), Fraction(0))]
        for l, d in zip(lengths[:-1], dirs[:-1]):
            pts.append((pts[-1][0] + l * d[0], pts[-1][1] + l * d[1]))
        return pts
