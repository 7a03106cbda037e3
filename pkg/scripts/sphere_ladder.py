"""Path spaces of the hollow cube boundary in dimensions 2..N.

    python scripts/sphere_ladder.py --max-n 7
"""
from __future__ import annotations

import argparse
import time

from pvtopo.cubical import boundary_box
from pvtopo.pathspace import homology_of_model, model


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=6)
    args = ap.parse_args()
    for n in range(2, args.max_n + 1):
        t0 = time.perf_counter()
        m = model(boundary_box(n), (0,) * n, (2,) * n)
        h = homology_of_model(m)
        print(f"n={n}  {h.as_text() if h else m}  ({time.perf_counter() - t0:.3f}s)")


if __name__ == "__main__":
    main()
