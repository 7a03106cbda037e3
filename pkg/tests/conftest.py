from __future__ import annotations

import random

from hypothesis import strategies as st

from pvtopo.cubical import HoleSet
from pvtopo.model import PVOperation, PVProcess
from pvtopo.simplicial import SimplicialComplex


def random_holes(rng: random.Random, n: int, size: int, count: int) -> HoleSet:
    """Up to ``count`` open boxes with corners in ``[0, size]``."""
    holes = []
    for _ in range(count):
        k = tuple(rng.randint(0, size - 1) for _ in range(n))
        l = tuple(min(size, x + rng.randint(1, 3)) for x in k)
        holes.append((k, l))
    return HoleSet(n, holes)


def random_complex(rng: random.Random, n: int, max_facets: int = 4) -> SimplicialComplex:
    facets = []
    for _ in range(rng.randint(0, max_facets)):
        facets.append(rng.sample(range(1, n + 1), rng.randint(1, n)))
    return SimplicialComplex.from_facets(n, facets)


def random_process(rng: random.Random, max_ops: int = 8, names=("a", "b", "c")) -> PVProcess:
    ops = []
    for _ in range(rng.randint(0, max_ops)):
        acq = {r: rng.choice([0, 0, 1, 1, 2]) for r in names}
        rel = {r: rng.choice([0, 0, 1, 1, 2]) for r in names}
        ops.append(PVOperation.make(acq, rel))
    return PVProcess(tuple(ops))


@st.composite
def hole_sets(draw, max_n: int = 3, max_size: int = 3, max_holes: int = 4):
    n = draw(st.integers(2, max_n))
    size = draw(st.integers(2, max_size))
    holes = []
    for _ in range(draw(st.integers(0, max_holes))):
        k = tuple(draw(st.integers(0, size - 1)) for _ in range(n))
        l = tuple(draw(st.integers(x + 1, size)) for x in k)
        holes.append((k, l))
    return HoleSet(n, holes), size


@st.composite
def simplicial_complexes(draw, min_n: int = 2, max_n: int = 6):
    n = draw(st.integers(min_n, max_n))
    full = (1 << n) - 1
    facets = draw(st.lists(st.integers(1, full), max_size=5))
    return SimplicialComplex.from_facets(n, facets)


@st.composite
def processes(draw, max_ops: int = 6, names=("a", "b", "c")):
    ops = []
    for _ in range(draw(st.integers(0, max_ops))):
        acq = {r: draw(st.integers(0, 2)) for r in names}
        rel = {r: draw(st.integers(0, 2)) for r in names}
        ops.append(PVOperation.make(acq, rel))
    return PVProcess(tuple(ops))
