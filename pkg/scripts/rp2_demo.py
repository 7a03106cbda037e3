"""Realize the projective plane as an execution space and read back its homology.

    python scripts/rp2_demo.py [--complex data/rp2.json]
"""
from __future__ import annotations

import argparse
import time
from pathlib import Path

from pvtopo.cubical import build_QL, state_space
from pvtopo.io import read_json, simplicial_from_json
from pvtopo.model import capacity_profile
from pvtopo.pathspace import homology_of_model, model

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--complex", default=str(ROOT / "data" / "rp2.json"))
    args = ap.parse_args()

    L, nonfaces = simplicial_from_json(read_json(args.complex))
    t0 = time.perf_counter()
    prog = build_QL(L, nonfaces)
    cap, _ = capacity_profile(prog)
    print(f"program: {prog.n} processes, {len(prog.resources)} resources, capacity {cap}")
    K = state_space(prog)
    print(f"state space cubes by dimension: {K.count_by_dim()}")
    m = model(K, prog.t_bottom, prog.t_top)
    print(f"model: {m}")
    h = homology_of_model(m)
    print(f"homology: {h.as_text() if h else 'not determined'}")
    print(f"elapsed {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
