"""Check that shadow boundaries (or section edge sets) do not change inside
a direction cell, and report how often neighbouring cells differ.

    python scripts/cell_constancy.py --fixtures 5 --mode sections
"""
import argparse
import random
from itertools import combinations

from projcong.directions import (Mode, arrangement, exceptional_projection_set,
                                 exceptional_section_set, is_degenerate_direction, sample_cell)
from projcong.generators import random_polytope
from projcong.shadow import section_cycle, shadow_boundary


def feature(P, x, mode):
    if mode is Mode.PROJECTIONS:
        sb = shadow_boundary(P, x)
        return frozenset(sb.vertices), frozenset(sb.edges)
    return frozenset(c[0] for c in section_cycle(P, x))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--fixtures", type=int, default=5)
    ap.add_argument("--samples", type=int, default=4)
    ap.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.PROJECTIONS.value)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    mode = Mode(args.mode)
    build = exceptional_projection_set if mode is Mode.PROJECTIONS else exceptional_section_set
    rng = random.Random(args.seed)
    for k in range(args.fixtures):
        P = random_polytope(rng, 6, 10)
        arr = arrangement(build(P))
        seen, broken = {}, 0
        for cell in arr.cells:
            xs = sample_cell(cell, arr.circles, args.samples, cell.id,
                             reject=lambda x: is_degenerate_direction(x, P, P, mode))
            feats = [feature(P, x, mode) for x in xs]
            broken += any(f != g for f, g in combinations(feats, 2))
            seen[cell.sign_vector] = feats[0]
        adjacent = [(a, b) for a, b in combinations(seen, 2) if sum(p != q for p, q in zip(a, b)) == 1]
        differ = sum(seen[a] != seen[b] for a, b in adjacent)
        print(f"fixture {k}: {len(P.vertices)} vertices, {len(arr.circles)} circles, {len(arr.cells)} cells, "
              f"{broken} cells not constant, {differ}/{len(adjacent)} adjacent pairs differ")


if __name__ == "__main__":
    main()
