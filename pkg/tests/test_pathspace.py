from __future__ import annotations

import random

import pytest
from hypothesis import given, settings

from conftest import hole_sets, random_complex, random_holes
from pvtopo.cubical import ElementaryCube, EuclideanComplex, HoleSet, boundary_box, build_CL, build_KL, from_holes
from pvtopo.pathspace import (
    Complex,
    Contractible,
    DisjointUnion,
    Empty,
    OracleCapExceeded,
    Product,
    Unknown,
    avoidance_model,
    component_complex,
    complex_model,
    contains_unknown,
    count_paths,
    deadlocks,
    disjoint_union,
    flip_oracle,
    homology_of_model,
    level_split,
    model,
    nerve_model,
    past_link,
    product,
)
from pvtopo.simplicial import HomologyProfile, SimplicialComplex, boundary_simplex, homology


def components(m) -> int:
    h = homology_of_model(m)
    assert h is not None, f"model {m} has no homology"
    return h.betti[0]


def sphere(d: int):
    return Complex(boundary_simplex(d + 2))


# -- model algebra ----------------------------------------------------------


def test_product_rules():
    s = sphere(0)
    assert product(Contractible(), s) == s
    assert product(s, Empty()) == Empty()
    assert isinstance(product(s, Unknown("x")), Unknown)
    assert product(DisjointUnion((Contractible(), s)), Contractible()) == DisjointUnion((Contractible(), s))
    assert product(s, sphere(1)) == Product((s, sphere(1)))


def test_disjoint_union_rules():
    assert disjoint_union(Empty(), Empty()) == Empty()
    assert disjoint_union(Empty(), Contractible()) == Contractible()
    nested = disjoint_union(Contractible(), disjoint_union(Contractible(), sphere(1)))
    assert nested == DisjointUnion((Contractible(), Contractible(), sphere(1)))
    assert homology_of_model(nested) == HomologyProfile((3, 1), ((), ()))


def test_complex_model_simplifies():
    assert complex_model(SimplicialComplex.empty(3)) == Empty()
    assert complex_model(SimplicialComplex.from_facets(3, [[1, 2], [2, 3]])) == Contractible()
    assert complex_model(boundary_simplex(3)) == sphere(1)


def test_unknown_detection():
    assert contains_unknown(Product((sphere(1), Unknown("x"))))
    assert not contains_unknown(DisjointUnion((sphere(1), Contractible())))
    assert homology_of_model(Unknown("x")) is None


# -- past links and nerves ------------------------------------------------------


@pytest.mark.parametrize("seed", range(10))
def test_past_link_of_cl(seed):
    rng = random.Random(seed)
    L = random_complex(rng, rng.randint(2, 6))
    assert past_link(build_CL(L), (1,) * L.n) == L


def test_full_box_is_contractible():
    K = EuclideanComplex.full((0, 0, 0), (2, 3, 1))
    assert nerve_model(K, (0, 0, 0), (2, 3, 1)) == Contractible()
    assert model(K, (0, 0, 0), (2, 3, 1)) == Contractible()


@pytest.mark.parametrize("n", range(2, 6))
def test_sphere_ladder(n):
    m = model(boundary_box(n), (0,) * n, (2,) * n)
    h = homology_of_model(m)
    assert h == homology(boundary_simplex(n))
    assert homology(boundary_simplex(n), reduced=True).trimmed().degree(n - 2) == (1, ())


def test_swiss_flag_has_two_classes():
    K = from_holes(HoleSet(2, (((1, 1), (2, 2)),)), (0, 0), (3, 3))
    m = model(K, (0, 0), (3, 3))
    assert components(m) == 2
    assert flip_oracle(K, (0, 0), (3, 3))[0] == 2


def test_kl_two_points():
    L = boundary_simplex(2)
    K, _ = build_KL(L)
    m = model(K, (0, 0), (2, 2))
    assert components(m) == 4
    assert flip_oracle(K, (0, 0), (2, 2))[0] == 4


def test_unreachable_end_is_empty():
    ends = [ElementaryCube((0, 0), (0, 0)), ElementaryCube((3, 3), (3, 3))]
    K = EuclideanComplex.from_cubes((0, 0), (3, 3), ends)
    assert count_paths(K, (0, 0), (3, 3)) == 0
    assert model(K, (0, 0), (3, 3)) == Empty()
    assert flip_oracle(K, (0, 0), (3, 3)) == (0, [])


def test_bad_endpoints():
    K = from_holes(HoleSet(2, (((0, 0), (2, 2)),)), (0, 0), (2, 2))
    with pytest.raises(ValueError):
        model(K, (1, 1), (2, 2))
    with pytest.raises(ValueError):
        model(K, (2, 2), (0, 0))


# -- discrete oracle ------------------------------------------------------------


def test_oracle_cap():
    K = EuclideanComplex.full((0, 0, 0), (5, 5, 5))
    assert count_paths(K, (0, 0, 0), (5, 5, 5)) == 756756
    with pytest.raises(OracleCapExceeded):
        flip_oracle(K, (0, 0, 0), (5, 5, 5), cap=1000)


def test_oracle_without_squares_separates_everything():
    # the boundary of a square in the plane has no 2-cells, so the two paths
    # stay apart; the full square joins them
    assert flip_oracle(boundary_box(2), (0, 0), (2, 2)) == (2, [(0, 0, 1, 1), (1, 1, 0, 0)])
    assert flip_oracle(EuclideanComplex.full((0, 0), (2, 2)), (0, 0), (2, 2))[0] == 1


@settings(max_examples=80, deadline=None)
@given(hole_sets(max_n=3, max_size=3, max_holes=4))
def test_components_match_oracle(hs):
    h, size = hs
    n = h.n
    K = from_holes(h, (0,) * n, (size,) * n)
    a, b = (0,) * n, (size,) * n
    m = model(K, a, b)
    assert not contains_unknown(m)
    assert components(m) == flip_oracle(K, a, b)[0]


def test_model_and_avoidance_agree_on_random_windows():
    rng = random.Random(2024)
    compared = 0
    for _ in range(120):
        n = rng.randint(2, 3)
        size = rng.randint(3, 4)
        h = random_holes(rng, n, size, rng.randint(1, 4))
        K = from_holes(h, (0,) * n, (size,) * n)
        a = tuple(rng.randint(0, 1) for _ in range(n))
        b = tuple(size - rng.randint(0, 1) for _ in range(n))
        if not (K.has_vertex(a) and K.has_vertex(b)):
            continue
        m = model(K, a, b)
        alt = avoidance_model(K, a, b)
        if alt is None or contains_unknown(m):
            continue
        assert homology_of_model(m) == homology_of_model(alt)
        compared += 1
    assert compared >= 60


# -- level sections ---------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(hole_sets(max_n=3, max_size=3, max_holes=4))
def test_level_split_partitions_paths(hs):
    h, size = hs
    n = h.n
    a, b = (0,) * n, (size,) * n
    K = from_holes(h, a, b)
    total = count_paths(K, a, b)
    for level in range(1, n * size):
        sec = level_split(K, a, b, level)
        owned = sorted({c for c in sec.owner.values()})
        assert owned == list(range(len(sec.components)))
        for C in sec.components:
            assert all(sum(v) == level for v in C.vertices)
        split = sum(count_paths(component_complex(K, a, b, sec, i), a, b) for i in range(len(sec.components)))
        assert split == total


def test_level_split_rejects_end_levels():
    K = boundary_box(2)
    with pytest.raises(ValueError):
        level_split(K, (0, 0), (2, 2), 0)


# -- deadlocks and determinism --------------------------------------------------


def test_deadlock_in_corner():
    K = from_holes(HoleSet(2, (((1, 0), (3, 2)), ((0, 1), (2, 3)))), (0, 0), (3, 3))
    assert deadlocks(K, (0, 0), (3, 3)) == [(1, 1)]
    assert deadlocks(EuclideanComplex.full((0, 0), (2, 2)), (0, 0), (2, 2)) == []


def test_model_is_deterministic():
    rng = random.Random(7)
    h = random_holes(rng, 3, 4, 4)
    K = from_holes(h, (0,) * 3, (4,) * 3)
    first = model(K, (0,) * 3, (4,) * 3).to_json()
    for _ in range(3):
        assert model(K, (0,) * 3, (4,) * 3).to_json() == first
