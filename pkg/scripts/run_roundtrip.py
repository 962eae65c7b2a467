"""Random round-trip recovery: build Q from P, decide, compare.

    python scripts/run_roundtrip.py --trials 20 --mode sections
"""
import argparse
import random
import time

from projcong.directions import Mode
from projcong.generators import random_polytope, random_vector
from projcong.kernel import fmt_vec, negate, translate
from projcong.pipeline import (Config, Identity, Reflection, ReflectTranslate, Translate, decide,
                               verdict_json)


def expected(mode, s, b):
    if mode is Mode.SECTIONS:
        return Identity() if s > 0 else Reflection()
    return Translate(b) if s > 0 else ReflectTranslate(b)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.PROJECTIONS.value)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    mode = Mode(args.mode)
    rng = random.Random(args.seed)
    hits, total = 0, 0.0
    for t in range(args.trials):
        P = random_polytope(rng)
        s = rng.choice((1, -1))
        b = random_vector(rng) if mode is Mode.PROJECTIONS else (0, 0, 0)
        Q = translate(P if s > 0 else negate(P), b)
        t0 = time.perf_counter()
        rel = decide(P, Q, Config(mode=mode, seed=t), jobs=args.jobs)
        dt = time.perf_counter() - t0
        total += dt
        ok = rel.verdict == expected(mode, s, b)
        hits += ok
        print(f"{t:3d}  {len(P.vertices):2d} vertices  {rel.cells:4d} cells  {dt:6.2f} s  "
              f"{'ok ' if ok else 'BAD'} {verdict_json(rel.verdict)}  (sign {s:+d}, b {fmt_vec(b)})")
    print(f"{hits}/{args.trials} recovered in {total:.1f} s")


if __name__ == "__main__":
    main()
