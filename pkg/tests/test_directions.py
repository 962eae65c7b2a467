import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import cube01, cube11, octahedron, polytopes, scalene_simplex, seeds, unit_simplex
from projcong.directions import (GreatCircle, Mode, arrangement, cells, exceptional_projection_set,
                                 exceptional_section_set, is_degenerate_direction,
                                 orthogonal_projected_pair, right_angle_in_section, sample_cell)
from projcong.errors import OriginNotInterior
from projcong.generators import random_polytope
from projcong.kernel import dot, hull
from projcong.shadow import section_points


def circles_from(normals):
    return [GreatCircle(id=i, normal=n, provenance=()) for i, n in enumerate(sorted(normals))]


def float_cell_count(normals, n=20000, seed=0):
    """Independent estimate: distinct sign patterns over random unit directions."""
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, 3))
    s = np.sign(x @ np.array(normals, dtype=float).T)
    return len({tuple(r) for r in s.astype(int)})


def test_projection_circle_counts():
    assert len(exceptional_projection_set(cube01(), cube01())) == 3
    assert len(exceptional_projection_set(cube11(), octahedron())) == 7
    assert len(exceptional_projection_set(unit_simplex(), unit_simplex())) == 4


def test_circle_normals_canonical_and_distinct():
    cs = exceptional_projection_set(cube11(), octahedron())
    normals = [c.normal for c in cs]
    assert len(set(normals)) == len(normals)
    for n in normals:
        first = next(a for a in n if a)
        assert first > 0


def test_provenance_collects_both_bodies():
    cs = exceptional_projection_set(cube11(), cube11())
    # each axis line: two opposite facets in each of the two bodies
    assert all(len(c.provenance) == 4 for c in cs)


def test_section_circle_counts():
    assert len(exceptional_section_set(cube11(), cube11())) == 4
    assert len(exceptional_section_set(octahedron(), octahedron())) == 3
    with pytest.raises(OriginNotInterior):
        exceptional_section_set(unit_simplex(), cube11())


def test_cell_counts():
    axes = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert len(cells(circles_from(axes))) == 8
    assert len(cells(circles_from([(1, 2, 3)]))) == 2
    tet = [(1, 1, 1), (1, -1, -1), (1, 1, -1), (1, -1, 1)]
    assert len(cells(circles_from(tet))) == 14 == float_cell_count(tet)


@given(seeds, st.integers(1, 7))
@settings(max_examples=30)
def test_arrangement_euler_and_cell_count(seed, m):
    rng = random.Random(seed)
    # small coordinates make concurrent triples common
    normals = set()
    while len(normals) < m:
        n = tuple(rng.randint(-2, 2) for _ in range(3))
        if any(n):
            first = next(a for a in n if a)
            g = math.gcd(*n)
            n = tuple(a // g * (1 if first > 0 else -1) for a in n)
            normals.add(n)
    arr = arrangement(circles_from(list(normals)))
    assert arr.euler() == 2
    assert len(arr.cells) == float_cell_count([c.normal for c in arr.circles], seed=seed)


@given(polytopes(n_max=10))
@settings(max_examples=10)
def test_cells_sample_points_and_disjointness(P):
    arr = arrangement(exceptional_projection_set(P, P))
    assert arr.euler() == 2
    keys = [c.sign_vector for c in arr.cells]
    assert len(set(keys)) == len(keys)
    for c in arr.cells:
        assert all(dot(g.normal, c.sample_interior_point) != 0 for g in arr.circles)
        assert c.contains(c.sample_interior_point, arr.circles)
        assert set(c.bounding_circles) <= set(range(len(arr.circles)))


def test_sample_cell_octant():
    arr = arrangement(circles_from([(1, 0, 0), (0, 1, 0), (0, 0, 1)]))
    octant = next(c for c in arr.cells if c.sign_vector == (1, 1, 1))
    xs = sample_cell(octant, arr.circles, 3, seed=7)
    assert len(xs) == 3 and len(set(xs)) == 3
    assert all(all(a > 0 for a in x) for x in xs)
    assert sample_cell(octant, arr.circles, 3, seed=7) == xs
    with pytest.raises(ValueError):
        sample_cell(octant, arr.circles, 0, seed=7)


def test_sample_cell_honours_rejection():
    arr = arrangement(circles_from([(1, 0, 0), (0, 1, 0), (0, 0, 1)]))
    octant = arr.cells[-1]
    seen = []

    def reject(x):
        seen.append(x)
        return len(seen) % 2 == 1       # veto every other candidate

    xs = sample_cell(octant, arr.circles, 4, seed=1, reject=reject)
    assert len(xs) == 4 and all(x in seen for x in xs)


@given(polytopes(n_max=9), seeds)
@settings(max_examples=8)
def test_samples_stay_inside_and_geodesics_do_not_cross(P, seed):
    arr = arrangement(exceptional_projection_set(P, P))
    rng = random.Random(seed)
    normals = np.array([c.normal for c in arr.circles], dtype=float)
    for cell in rng.sample(list(arr.cells), min(10, len(arr.cells))):
        xs = sample_cell(cell, arr.circles, 3, seed)
        for x in xs:
            assert cell.contains(x, arr.circles)
        a, b = (np.array(x, dtype=float) for x in xs[:2])
        a, b = a / np.linalg.norm(a), b / np.linalg.norm(b)
        want = np.array(cell.sign_vector)
        for s in np.linspace(0, 1, 100):
            p = (1 - s) * a + s * b
            assert (np.sign(normals @ p) == want).all()


def test_projection_degeneracy_examples():
    C = cube01()
    assert not is_degenerate_direction((1, 1, 1), C, C, Mode.PROJECTIONS)
    assert is_degenerate_direction((1, 0, 1), C, C, Mode.PROJECTIONS)
    # the specific pair from the hand computation
    e1, e2 = (1, 0, 0), (0, 1, 0)
    x = (1, 1, 1)
    assert dot(e1, e2) * dot(x, x) - dot(e1, x) * dot(e2, x) == -1


def test_right_angle_section_constructed():
    # section at z = 0 has vertices (-1/2,-1/2), (3/2,-1/2), (-1/2,3/2): right angle at the first
    S = hull([(0, 0, 1), (-1, -1, -1), (3, -1, -1), (-1, 3, -1)])
    assert right_angle_in_section(S, (0, 0, 1)) is not None
    assert is_degenerate_direction((0, 0, 1), S, S, Mode.SECTIONS)


def test_right_angle_found_by_search():
    """Brute-force search over small rational directions for a right-angled
    section of a fixed simplex; every hit is re-checked in floating point."""
    S = scalene_simplex()
    hits = []
    for x in [(a, b, c) for a in range(-4, 5) for b in range(-4, 5) for c in range(1, 5)]:
        if any(dot(v, x) == 0 for v in S.vertices):
            continue
        r = right_angle_in_section(S, x)
        if r is not None:
            hits.append((x, r))
    assert hits
    for x, (p, q, r) in hits:
        pts = [np.array([float(c) for c in n]) / d for n, d in section_points(S, x)]
        u, v = pts[q] - pts[p], pts[r] - pts[p]
        assert abs(u @ v) < 1e-9 * np.linalg.norm(u) * np.linalg.norm(v)


def random_direction(rng):
    while True:
        x = tuple(Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 1000)) for _ in range(3))
        if any(x):
            return x


@pytest.mark.parametrize("mode", [Mode.PROJECTIONS, Mode.SECTIONS])
def test_degenerate_directions_are_rare(mode):
    rng = random.Random(11)
    fixtures = [scalene_simplex(), random_polytope(random.Random(3), 8, 12)]
    for P in fixtures:
        circles = (exceptional_projection_set(P, P) if mode is Mode.PROJECTIONS
                   else exceptional_section_set(P, P))
        hits = 0
        for _ in range(10_000):
            x = random_direction(rng)
            if any(dot(c.normal, x) == 0 for c in circles):
                continue
            hits += is_degenerate_direction(x, P, P, mode)
        assert hits == 0


def test_orthogonal_pair_exact_fallback():
    # float filter must not miss a pair that is orthogonal only in exact arithmetic
    big = 10**20
    P = hull([(0, 0, 0), (big, 0, 0), (0, big, 1), (0, 0, 1)])
    pair = orthogonal_projected_pair(P, (0, 0, 1))
    assert pair is not None
    a, b = pair
    x = (0, 0, 1)
    assert dot(a, b) * dot(x, x) == dot(a, x) * dot(b, x)
