import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import settings, strategies as st

from projcong.generators import random_polytope
from projcong.kernel import hull

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def cube01():
    return hull(product((0, 1), repeat=3))


def cube11():
    return hull(product((-1, 1), repeat=3))


def octahedron():
    pts = []
    for i in range(3):
        for s in (1, -1):
            v = [0, 0, 0]
            v[i] = s
            pts.append(tuple(v))
    return hull(pts)


def unit_simplex():
    return hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])


def scalene_simplex():
    """conv{0, e1, 2e2, 3e3} shifted so the origin is interior."""
    s = Fraction(-1, 4)
    return hull([(s, s, s), (1 + s, s, s), (s, 2 + s, s), (s, s, 3 + s)])


@pytest.fixture
def cube():
    return cube11()


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
vectors = st.tuples(rationals, rationals, rationals)
nonzero_vectors = vectors.filter(lambda v: any(v))
seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def polytopes(draw, n_max=12, origin_interior=True):
    return random_polytope(random.Random(draw(seeds)), 6, n_max, origin_interior=origin_interior)
