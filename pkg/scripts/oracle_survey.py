"""Compare model components against flip classes on random hole sets.

    python scripts/oracle_survey.py --trials 200 --max-n 3 --seed 1
"""
from __future__ import annotations

import argparse
import random
from collections import Counter

from pvtopo.cubical import HoleSet, from_holes
from pvtopo.pathspace import OracleCapExceeded, contains_unknown, flip_oracle, homology_of_model, model


def random_holes(rng, n, size, count):
    holes = []
    for _ in range(count):
        k = tuple(rng.randint(0, size - 1) for _ in range(n))
        holes.append((k, tuple(min(size, x + rng.randint(1, 3)) for x in k)))
    return HoleSet(n, holes)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--max-n", type=int, default=3)
    ap.add_argument("--max-size", type=int, default=4)
    ap.add_argument("--max-holes", type=int, default=5)
    ap.add_argument("--cap", type=int, default=10**6)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    tally = Counter()
    for t in range(args.trials):
        n = rng.randint(2, args.max_n)
        size = rng.randint(2, args.max_size)
        h = random_holes(rng, n, size, rng.randint(1, args.max_holes))
        K = from_holes(h, (0,) * n, (size,) * n)
        a, b = K.lo, K.hi
        m = model(K, a, b)
        if contains_unknown(m):
            tally["unknown"] += 1
            continue
        try:
            classes, _ = flip_oracle(K, a, b, args.cap)
        except OracleCapExceeded:
            tally["over cap"] += 1
            continue
        h0 = homology_of_model(m).betti[0]
        if h0 == classes:
            tally["agree"] += 1
        else:
            tally["disagree"] += 1
            print(f"trial {t}: holes {h.holes} model {m} classes {classes}")
    print(dict(sorted(tally.items())))


if __name__ == "__main__":
    main()
