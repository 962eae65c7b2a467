"""Random constructions with known answers, shared by unit and acceptance tests."""
import random
from fractions import Fraction

from projcong.errors import OriginLine
from projcong.kernel import cross, dot, norm2, sub
from projcong.recovery import (Inconsistent, ParallelSwap, ParallelTranslate, ParamLine, SignMatch,
                               random_direction)


def rvec(rng, lo=-12, hi=12, den=5):
    return tuple(Fraction(rng.randint(lo, hi), rng.randint(1, den)) for _ in range(3))


def rdir(rng):
    while True:
        a = tuple(rng.randint(-6, 6) for _ in range(3))
        if any(a):
            return a


def perp(v, a):
    """Component of v orthogonal to a."""
    k = Fraction(dot(v, a), norm2(a))
    return tuple(x - k * y for x, y in zip(v, a))


def line(rng, a=None):
    while True:
        try:
            return ParamLine.make(a or rdir(rng), rvec(rng))
        except OriginLine:
            continue


def directions_for(rng, lines, n=4):
    out = []
    while len(out) < n:
        x = random_direction(rng)
        if all(dot(x, l.a) != 0 for l in lines):
            out.append(x)
    return out


def _retry(build):
    while True:
        try:
            return build()
        except OriginLine:
            continue


def parallel_translate(rng):
    def build():
        a = rdir(rng)
        l1, l2 = line(rng, a), line(rng, a)
        if l1 == l2:
            raise OriginLine
        t = rvec(rng)
        return (l1, l2, l1.shifted(t), l2.shifted(t)), ParallelTranslate(b=perp(t, l1.a))
    return _retry(build)


def parallel_swap(rng):
    def build():
        a = rdir(rng)
        l1, l2 = line(rng, a), line(rng, a)
        c = rvec(rng)
        l3 = ParamLine.make(a, sub(c, l1.b))
        l4 = ParamLine.make(a, sub(c, l2.b))
        if l1 == l2 or (l3.b, l4.b) == (l1.b, l2.b):
            raise OriginLine
        return (l1, l2, l3, l4), ParallelSwap(c=perp(c, l1.a))
    return _retry(build)


def skew_pair(rng):
    while True:
        l1, l2 = line(rng), line(rng)
        # non-parallel and not coplanar: the pair spans 3-space
        if any(cross(l1.a, l2.a)) and dot(cross(l1.a, l2.a), sub(l2.b, l1.b)) != 0:
            return l1, l2


def sign_match(rng):
    l1, l2 = skew_pair(rng)
    s = rng.choice((1, -1))
    m1, m2 = (l1 if s > 0 else -l1), (l2 if s > 0 else -l2)
    pairing = rng.choice(("13-24", "14-23"))
    quad = (l1, l2, m1, m2) if pairing == "13-24" else (l1, l2, m2, m1)
    return quad, SignMatch(s1=s, s2=s, pairing=pairing)


def mixed_sign(rng):
    l1, l2 = skew_pair(rng)
    s = rng.choice((1, -1))
    m1, m2 = (l1 if s > 0 else -l1), (-l2 if s > 0 else l2)
    quad = (l1, l2, m1, m2) if rng.random() < 0.5 else (l1, l2, m2, m1)
    return quad, Inconsistent


CASES = {"parallel-translate": parallel_translate, "parallel-swap": parallel_swap,
         "sign-match": sign_match, "mixed-sign": mixed_sign}


def classify_matches(got, expected) -> bool:
    if expected is Inconsistent:
        return isinstance(got, Inconsistent)
    return got == expected
