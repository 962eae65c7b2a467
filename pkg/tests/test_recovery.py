import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import constructions
from conftest import cube11, polytopes, scalene_simplex, seeds, vectors
from projcong.errors import (DirectionOnLine, IrrationalPolygon, NoConsistentPatch, NotClosed,
                             OriginLine, ParallelNormals, ZeroSegment)
from projcong.generators import random_pythagorean_polygon
from projcong.kernel import add, dot, frame, negate, translate
from projcong.recovery import (ZERO, Distinct, Inconsistent, ParallelEqual, ParallelSwap,
                               ParallelTranslate, ParamLine, PatchRecord, SignMatch, global_patch,
                               line_pair_classify, minkowski_2d, polygon_normals_lengths,
                               random_direction, right_angle_guard, segment_pair_test)
from projcong.shadow import planar_body

E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)


def dirs(n, seed=0):
    rng = random.Random(seed)
    return [random_direction(rng) for _ in range(n)]


def test_segment_translate():
    r = segment_pair_test((0, 0, 0), (1, 0, 0), (0, 1, 2), (1, 1, 2), dirs(5))
    assert isinstance(r, ParallelEqual) and r.direction == E1 and r.length2 == 1 and r.sign == 1


def test_segment_point_reflection():
    r = segment_pair_test((0, 0, 0), (1, 0, 0), (0, 0, 0), (-1, 0, 0), dirs(5))
    assert isinstance(r, ParallelEqual) and r.sign == -1


def test_segment_distinct_witness():
    ds = dirs(50)
    r = segment_pair_test((0, 0, 0), (1, 0, 0), (0, 0, 0), (0, 2, 0), ds)
    assert isinstance(r, Distinct) and r.witness in [tuple(d) for d in ds]
    x = r.witness
    # the witness separates the squared projected lengths
    u, w = E1, (0, 2, 0)
    assert dot(u, u) * dot(x, x) - dot(u, x) ** 2 != dot(w, w) * dot(x, x) - dot(w, x) ** 2


def test_segment_errors():
    with pytest.raises(ZeroSegment):
        segment_pair_test((1, 1, 1), (1, 1, 1), (0, 0, 0), (1, 0, 0), dirs(2))
    with pytest.raises(ValueError):
        segment_pair_test((0, 0, 0), (1, 0, 0), (0, 0, 0), (1, 0, 0), [])


def test_segment_equal_length_not_parallel_found_distinct():
    # equal lengths; a lucky set of directions cannot tell them apart
    r = segment_pair_test((0, 0, 0), (1, 0, 0), (0, 0, 0), (0, 1, 0), [(0, 0, 1)])
    assert isinstance(r, Distinct)


def test_paramline_invariants():
    l = ParamLine.make((2, 0, 0), (5, 1, 0))
    assert l.a == E1 and l.b == (0, 1, 0) and dot(l.a, l.b) == 0
    assert ParamLine.make((-3, 0, 0), (0, 1, 0)) == l
    with pytest.raises(OriginLine):
        ParamLine.make(E1, (3, 0, 0))
    with pytest.raises(DirectionOnLine):
        l.meet(E2)


def test_classify_examples():
    l1, l2 = ParamLine.make(E1, E2), ParamLine.make(E1, (0, 2, 0))
    ds = dirs(6)
    r = line_pair_classify(l1, l2, l1.shifted(E3), l2.shifted(E3), ds)
    assert r == ParallelTranslate(b=E3)
    m1, m2 = ParamLine.make(E1, E2), ParamLine.make(E2, E3)
    assert line_pair_classify(m1, m2, -m1, -m2, ds) == SignMatch(s1=-1, s2=-1, pairing="13-24")
    r = line_pair_classify(m1, m2, m1, -m2, ds)
    assert isinstance(r, Inconsistent)


def test_classify_rejects_orthogonal_direction():
    l1, l2 = ParamLine.make(E1, E2), ParamLine.make(E2, E3)
    with pytest.raises(DirectionOnLine):
        line_pair_classify(l1, l2, l1, l2, [(0, 1, 1)])


def test_mixed_signs_fail_the_distance_identity_in_a_plane():
    # coplanar lines: crossings are collinear with the origin, so |v1 - v2| = |v1 + v2| fails
    l1 = ParamLine.make(E1, E2)
    l2 = ParamLine.make((1, 1, 0), (1, -1, 0))
    assert isinstance(line_pair_classify(l1, l2, l1, -l2, dirs(6)), Inconsistent)


@given(seeds, st.sampled_from(sorted(constructions.CASES)))
@settings(max_examples=80)
def test_classify_recovers_constructions(seed, case):
    rng = random.Random(seed)
    quad, expected = constructions.CASES[case](rng)
    got = line_pair_classify(*quad, constructions.directions_for(rng, quad))
    assert constructions.classify_matches(got, expected)
    if isinstance(got, (ParallelTranslate, ParallelSwap)):
        assert len({l.a for l in quad}) == 1


def test_right_angle_guard():
    lp, lq, lr = (ParamLine.make(E3, p) for p in ((1, 1, 0), (2, 1, 0), (1, 2, 0)))
    assert right_angle_guard(lp, lq, lr, E3)
    assert not right_angle_guard(lp, lq, lr, (1, 2, 7))
    rng = random.Random(4)
    assert not right_angle_guard(*(constructions.line(rng) for _ in range(3)), (3, 5, 7))
    with pytest.raises(DirectionOnLine):
        right_angle_guard(lp, lq, lr, E1)


def test_minkowski_rectangle():
    A = minkowski_2d([(1, 0), (0, 1), (-1, 0), (0, -1)], [1, 2, 1, 2])
    assert sorted(A.vertices2d) == [(0, 0), (0, 1), (2, 0), (2, 1)]
    assert A.vertices2d[0] == (0, 0)


def test_minkowski_triangle_round_trip():
    T = planar_body(frame(E3), [(0, 0), (4, 0), (0, 3)])
    normals, lengths = polygon_normals_lengths(T)
    assert lengths == [4, 5, 3]
    R = minkowski_2d(normals, lengths)
    assert sorted(R.vertices2d) == sorted(T.vertices2d)


def test_minkowski_errors():
    sq = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    with pytest.raises(NotClosed):
        minkowski_2d(sq, [1, 2, 1, 3])
    with pytest.raises(ParallelNormals):
        minkowski_2d([(1, 0), (2, 0), (-1, 1), (0, -1)], [1, 1, 1, 1])
    with pytest.raises(IrrationalPolygon):
        minkowski_2d([(1, 1), (-1, 1), (-1, -1), (1, -1)], [1, 1, 1, 1])


@given(seeds)
@settings(max_examples=60)
def test_minkowski_round_trip(seed):
    pts = random_pythagorean_polygon(random.Random(seed))
    A = planar_body(frame(E3), pts)
    R = minkowski_2d(*polygon_normals_lengths(A))
    o = min(A.vertices2d)
    assert sorted((x - o[0], y - o[1]) for x, y in A.vertices2d) == sorted(R.vertices2d)


def test_global_patch_examples():
    P = scalene_simplex()
    Q = translate(P, (1, 2, 3))
    recs = [PatchRecord(cell=i, sign=1, offset=(1, 2, 3)) for i in range(5)]
    assert global_patch(recs, P, Q, "projections") == (1, (1, 2, 3))
    C = cube11()
    N = negate(P)
    recs = [PatchRecord(cell=i, sign=-1, offset=ZERO) for i in range(3)]
    assert global_patch(recs, P, N, "sections") == (-1, ZERO)
    # both signs verify for the cube; + wins
    recs = [PatchRecord(cell=0, sign=-1, offset=ZERO), PatchRecord(cell=1, sign=-1, offset=ZERO)]
    assert global_patch(recs, C, C, "sections") == (1, ZERO)


def test_global_patch_conflict():
    P = scalene_simplex()
    Q = translate(P, (5, 5, 5))
    recs = [PatchRecord(cell=0, sign=1, offset=(1, 0, 0)), PatchRecord(cell=1, sign=1, offset=(0, 1, 0))]
    with pytest.raises(NoConsistentPatch) as err:
        global_patch(recs, P, Q, "projections")
    assert err.value.conflict == (0, 1)


@given(polytopes(n_max=10), vectors, st.sampled_from([1, -1]), seeds)
@settings(max_examples=20)
def test_global_patch_order_invariant(P, b, s, seed):
    Q = translate(P if s > 0 else negate(P), b)
    rng = random.Random(seed)
    recs = [PatchRecord(cell=i, sign=s, offset=b) for i in range(6)]
    recs += [PatchRecord(cell=6, sign=-s, offset=(1, 1, 1))]
    want = global_patch(recs, P, Q, "projections")
    rng.shuffle(recs)
    assert global_patch(recs, P, Q, "projections") == want
