from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings

from conftest import hole_sets, random_complex, random_holes, random_process
from pvtopo.cubical import (
    ElementaryCube,
    EuclideanComplex,
    HoleSet,
    boundary_box,
    build_CL,
    build_KL,
    build_QL,
    compile_program,
    crit_conditions,
    cube_in,
    default_window,
    from_holes,
    holes_of,
    state_space,
    ul_holes,
)
from pvtopo.model import (
    PVProgram,
    ResourceSet,
    canonical_progression,
    potential_program,
)
from pvtopo.simplicial import SimplicialComplex, boundary_simplex


def pointwise_state_space(prog: PVProgram, lo, hi) -> set[tuple[int, ...]]:
    """Doubled coordinates of the cubes on which every sampled point is
    within capacity.  Samples are the integer and half-integer points of the
    closed cube, which see every value of the step potentials."""
    caps = prog.resources.capacity
    cells = set()
    for m in product(*[range(2 * a, 2 * b + 1) for a, b in zip(lo, hi)]):
        axes = [[Fraction(x, 2)] if x % 2 == 0 else [Fraction(x - 1, 2), Fraction(x, 2), Fraction(x + 1, 2)] for x in m]
        if all(
            all(v <= caps[r] for r, v in potential_program(prog, pt).items()) for pt in product(*axes)
        ):
            cells.add(m)
    return cells


def doubled_cells(K: EuclideanComplex) -> set[tuple[int, ...]]:
    return {c.doubled for c in K.cubes()}


def test_single_hole_counts():
    # removing the whole open square leaves the boundary circle
    K = from_holes(HoleSet(2, (((0, 0), (2, 2)),)), (0, 0), (2, 2))
    assert K.count_by_dim() == [8, 8, 0]
    K = from_holes(HoleSet(2, (((0, 0), (1, 1)),)), (0, 0), (2, 2))
    assert K.count_by_dim() == [9, 12, 3]
    assert boundary_box(2) == from_holes(HoleSet(2, (((0, 0), (2, 2)),)), (0, 0), (2, 2))


def test_hole_must_fit_window():
    with pytest.raises(ValueError):
        from_holes(HoleSet(2, (((0, 0), (3, 1)),)), (0, 0), (2, 2))
    with pytest.raises(ValueError):
        HoleSet(2, (((0, 0), (0, 1)),))


def test_cube_membership_against_holes():
    h = HoleSet(2, (((0, 0), (2, 2)),))
    assert not cube_in(h, ElementaryCube((1, 1), (1, 1)))
    assert cube_in(h, ElementaryCube((0, 1), (0, 2)))
    assert not cube_in(h, ElementaryCube((0, 1), (1, 1)))


@settings(max_examples=60, deadline=None)
@given(hole_sets())
def test_complement_is_face_closed_and_matches_points(hs):
    h, size = hs
    lo, hi = (0,) * h.n, (size,) * h.n
    K = from_holes(h, lo, hi)
    assert K.is_face_closed()
    for c in K.cubes():
        mid = [Fraction(a + b, 2) for a, b in zip(c.lo, c.hi)]
        assert not h.contains_point(mid)
    for m in product(*[range(2 * a, 2 * b + 1) for a, b in zip(lo, hi)]):
        c = ElementaryCube.from_doubled(m)
        assert (c in K) == cube_in(h, c)


@settings(max_examples=60, deadline=None)
@given(hole_sets())
def test_holes_of_round_trip(hs):
    h, size = hs
    lo, hi = (-1,) * h.n, (size + 1,) * h.n
    K = from_holes(h, lo, hi)
    assert from_holes(holes_of(K), lo, hi) == K


@settings(max_examples=60, deadline=None)
@given(hole_sets())
def test_crit_conditions_agree(hs):
    h, size = hs
    for m in product(*[range(0, 2 * size + 1)] * h.n):
        x = [Fraction(t, 2) for t in m]
        a, b, c = crit_conditions(h, x)
        assert a == b == c


def test_state_space_matches_pointwise_potentials():
    rng = random.Random(11)
    checked = 0
    while checked < 25:
        procs = tuple(canonical_progression(random_process(rng, 4, ("a", "b"))) for _ in range(2))
        if any(len(p) == 0 for p in procs):
            continue
        prog = PVProgram(ResourceSet(("a", "b"), {"a": rng.randint(1, 2), "b": rng.randint(1, 3)}), procs)
        lo, hi = default_window(prog)
        assert doubled_cells(state_space(prog)) == pointwise_state_space(prog, lo, hi)
        checked += 1


def test_state_space_window_must_cover_default():
    prog = compile_program(HoleSet(2, (((0, 0), (1, 1)),)))
    with pytest.raises(ValueError):
        state_space(prog, (0, 0), (1, 1))


def test_compile_round_trip():
    rng = random.Random(5)
    for _ in range(40):
        n = rng.randint(2, 3)
        h = random_holes(rng, n, 4, rng.randint(1, 4))
        prog = compile_program(h)
        lo, hi = default_window(prog)
        a, b = h.bbox()
        assert (lo, hi) == (tuple(x - 1 for x in a), tuple(x + 1 for x in b))
        assert state_space(prog) == from_holes(h, lo, hi)


def test_compile_without_holes_is_full():
    prog = compile_program(HoleSet(3, ()))
    K = state_space(prog)
    assert K == EuclideanComplex.full(K.lo, K.hi)


def test_cl_contains_both_cones():
    L = SimplicialComplex.from_facets(3, [[1, 2]])
    C = build_CL(L)
    assert ElementaryCube((0, 0, 0), (1, 1, 0)) in C  # lower cone over a face of the boundary
    assert ElementaryCube((0, 0, 1), (1, 1, 1)) in C  # upper cone over {1, 2}
    assert ElementaryCube((1, 0, 0), (1, 1, 1)) not in C


@pytest.mark.parametrize("seed", range(8))
def test_kl_from_nonfaces_agrees_with_direct_construction(seed):
    rng = random.Random(seed)
    L = random_complex(rng, rng.randint(2, 5))
    K, U = build_KL(L)
    assert from_holes(U, K.lo, K.hi) == K
    assert K.shell_complete()
    prog = build_QL(L)
    lo, hi = default_window(prog)
    assert state_space(prog) == from_holes(U, lo, hi)
    assert set(prog.resources.capacity.values()) == {L.n - 1}


def test_ul_guard_count():
    U, names = ul_holes(boundary_simplex(4))
    assert len(U) == 1 + 4 * 3
    assert names[0] == "A1" and names[-1] == "g4_3"
