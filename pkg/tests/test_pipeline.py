import json
import pickle
import random
from fractions import Fraction

import pytest

from conftest import cube11, scalene_simplex
from projcong.congruence import congruence_witnesses
from projcong.directions import Mode, exceptional_projection_set
from projcong.errors import EmptyIntersection, NoConsistentPatch, OriginNotInterior, RetryableFailure
from projcong.generators import random_polytope, random_vector
from projcong.kernel import dot, hull, linear_image, negate, translate
from projcong.pipeline import (Config, Identity, NotCongruent, Reflection, ReflectTranslate,
                               Relation, Translate, cell_seed, decide, report, report_json, verify)
from projcong.shadow import project


def rotated(P):
    c, s = Fraction(3, 5), Fraction(4, 5)
    return linear_image(P, [(c, -s, 0), (s, c, 0), (0, 0, 1)])


def test_scalene_reflect_translate():
    P = scalene_simplex()
    rel = decide(P, translate(negate(P), (1, 2, 3)), Config())
    assert rel.verdict == ReflectTranslate(b=(1, 2, 3))
    assert all(e.sign == -1 and e.offset == (1, 2, 3) for e in rel.evidence)
    assert len(rel.evidence) == rel.cells


def test_cube_sections_identity():
    C = cube11()
    rel = decide(C, C, Config(mode=Mode.SECTIONS))
    assert rel.verdict == Identity()


def test_sections_reflection():
    P = scalene_simplex()
    assert decide(P, negate(P), Config(mode=Mode.SECTIONS)).verdict == Reflection()


def test_sections_need_origin_inside():
    P = translate(scalene_simplex(), (5, 0, 0))
    with pytest.raises(OriginNotInterior):
        decide(P, P, Config(mode=Mode.SECTIONS))


def test_rotated_simplex_not_congruent_with_valid_witness():
    P = scalene_simplex()
    Q = rotated(P)
    rel = decide(P, Q, Config())
    v = rel.verdict
    assert isinstance(v, NotCongruent) and not rel.positive
    circles = exceptional_projection_set(P, Q)
    assert all(dot(c.normal, v.xi) != 0 for c in circles)
    # fresh frames and a fresh congruence call
    assert congruence_witnesses(project(P, v.xi), project(Q, v.xi)) == []


def test_verify_examples():
    P = scalene_simplex()
    assert verify(P, translate(P, (1, 2, 3)), Relation(Translate((1, 2, 3))))
    assert not verify(P, negate(P), Relation(Translate((0, 0, 0))))
    C = cube11()
    assert verify(C, C, Relation(Reflection()))
    with pytest.raises(ValueError):
        verify(P, P, Relation(NotCongruent(xi=(1, 0, 0), cell=0)))


def test_config_validation():
    with pytest.raises(ValueError):
        Config(samples_per_cell=1)
    assert Config(mode="sections").mode is Mode.SECTIONS


def test_cell_seed_stable():
    assert cell_seed(0, 5) == cell_seed(0, 5) != cell_seed(1, 5)


def test_retryable_errors_pickle():
    for err in (EmptyIntersection("x", cell=3), NoConsistentPatch("y", conflict=(1, 2))):
        back = pickle.loads(pickle.dumps(err))
        assert type(back) is type(err) and str(back) == str(err)
        assert getattr(back, "cell", None) == getattr(err, "cell", None)
        assert getattr(back, "conflict", None) == getattr(err, "conflict", None)


def test_report_schema_and_parallel_determinism():
    P = random_polytope(random.Random(8), 7, 9)
    Q = translate(P, (Fraction(1, 3), 2, -5))
    cfg = Config(seed=4)
    a = report_json(decide(P, Q, cfg), cfg)
    b = report_json(decide(P, Q, cfg, jobs=2), cfg)
    assert a == b
    data = json.loads(a)
    assert data["schema_version"] == 1 and data["mode"] == "projections"
    assert data["verdict"] == {"kind": "Translate", "b": ["1/3", "2", "-5"]}
    assert data["config"] == {"samples_per_cell": 8, "seed": 4}
    assert len(data["evidence"]) == data["arrangement"]["cells"]
    assert set(data["evidence"][0]) == {"cell", "witnesses", "surviving", "sign", "offset"}


def test_not_congruent_report():
    P = scalene_simplex()
    rel = decide(P, rotated(P), Config())
    r = report(rel, Config())
    assert r["verdict"]["kind"] == "NotCongruent" and r["evidence"] == []


def perturbed(P, rng):
    vs = list(P.vertices)
    i = rng.randrange(len(vs))
    vs[i] = tuple(c + Fraction(rng.randint(1, 5), 7) for c in vs[i])
    return hull(vs)


def test_soundness_fuzz():
    """Positive verdicts always verify; non-congruent pairs never produce one."""
    rng = random.Random(2024)
    for k in range(200):
        P = random_polytope(rng, 6, 8)
        kind = k % 4
        if kind == 0:
            Q = translate(P, random_vector(rng))
        elif kind == 1:
            Q = translate(negate(P), random_vector(rng))
        elif kind == 2:
            Q = perturbed(P, rng)
        else:
            Q = rotated(P)
        try:
            rel = decide(P, Q, Config(samples_per_cell=3, seed=k))
        except RetryableFailure:
            continue
        if rel.positive:
            assert verify(P, Q, rel)
        else:
            assert kind >= 2
        if kind < 2:
            assert rel.positive
