"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""
from __future__ import annotations

import json
import random
import time
from collections import Counter
from fractions import Fraction
from itertools import product as iproduct
from pathlib import Path

from conftest import random_complex, random_holes, random_process
from pvtopo import cli
from pvtopo.cubical import (
    boundary_box,
    build_CL,
    build_KL,
    build_QL,
    compile_program,
    crit_conditions,
    default_window,
    from_holes,
    state_space,
    ul_holes,
)
from pvtopo.equivalence import elementarize, equivalent_processes, random_rewrite, reduce
from pvtopo.io import complex_from_json, program_from_json, read_json, simplicial_from_json
from pvtopo.pathspace import Complex, contains_unknown, deadlocks, flip_oracle, homology_of_model, model, past_link
from pvtopo.simplicial import boundary_simplex, homology

DATA = Path(__file__).resolve().parents[1] / "data"


def verdict(capsys, name: str, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, detail


def test_c1_projective_plane_pipeline(capsys, tmp_path):
    start = time.perf_counter()
    prog_path = tmp_path / "rp2_program.json"
    code = cli.main(["realize", str(DATA / "rp2.json"), "--program-out", str(prog_path), "--out", str(tmp_path / "r.json")])
    realized = json.loads((tmp_path / "r.json").read_text())
    code2 = cli.main(["analyze", str(prog_path), "--no-oracle", "--out", str(tmp_path / "a.json")])
    report = json.loads((tmp_path / "a.json").read_text())
    elapsed = time.perf_counter() - start

    L, _ = simplicial_from_json(read_json(DATA / "rp2.json"))
    prog = program_from_json(read_json(prog_path))
    caps = set(prog.resources.capacity.values())
    expected_parts = Counter(
        json.dumps(Complex(X).to_json(), sort_keys=True) for X in (L, boundary_simplex(6))
    )
    got_parts = Counter(json.dumps(p, sort_keys=True) for p in report["model"].get("parts", []))
    h = report["homology"]
    checks = {
        "exit codes": (code, code2) == (0, 0),
        "processes": prog.n == 6 and realized["program"]["processes"] == 6,
        "resources": len(prog.resources) == 40,
        "capacities": caps == {5},
        "model": report["model"]["type"] == "DisjointUnion" and got_parts == expected_parts,
        "homology": h is not None
        and h["betti"] == [2, 0, 0, 0, 1]
        and h["torsion"] == [[], [2], [], [], []],
        "time": elapsed < 60,
    }
    bad = [k for k, v in checks.items() if not v]
    verdict(capsys, "1 projective plane pipeline", not bad, f"{elapsed:.1f}s, failed checks: {bad or 'none'}")


def test_c2_sphere_ladder(capsys):
    start = time.perf_counter()
    bad = []
    for n in range(2, 7):
        m = model(boundary_box(n), (0,) * n, (2,) * n)
        red = homology(boundary_simplex(n), reduced=True).trimmed()
        ok = (
            m == Complex(boundary_simplex(n))
            and red.degree(n - 2) == (1, ())
            and sum(red.betti) == 1
            and not any(red.torsion)
        )
        if not ok:
            bad.append(n)
    elapsed = time.perf_counter() - start
    verdict(capsys, "2 sphere ladder n=2..6", not bad and elapsed < 10, f"{elapsed:.2f}s, wrong n: {bad or 'none'}")


def test_c3_past_link_law(capsys):
    rng = random.Random(3)
    bad = 0
    for _ in range(50):
        L = random_complex(rng, rng.randint(2, 7), max_facets=5)
        if past_link(build_CL(L), (1,) * L.n) != L:
            bad += 1
    verdict(capsys, "3 past-link law, 50 complexes", bad == 0, f"{bad} mismatches")


def test_c4_compiler_round_trip(capsys):
    rng = random.Random(4)
    bad = 0
    for _ in range(100):
        n = rng.randint(2, 4)
        h = random_holes(rng, n, rng.randint(2, 4), rng.randint(1, 5))
        lo, hi = default_window(compile_program(h))
        if state_space(compile_program(h)) != from_holes(h, lo, hi):
            bad += 1
    bad_ul = 0
    for _ in range(20):
        L = random_complex(rng, rng.randint(2, 6))
        U, _ = ul_holes(L)
        prog = build_QL(L)
        lo, hi = default_window(prog)
        K, _ = build_KL(L)
        if state_space(prog) != from_holes(U, lo, hi) or state_space(prog).rebox(K.lo, K.hi) != K:
            bad_ul += 1
    verdict(
        capsys,
        "4 compiler round trip",
        bad == 0 and bad_ul == 0,
        f"{bad}/100 hole sets and {bad_ul}/20 U_L differ",
    )


def test_c5_normal_forms(capsys):
    rng = random.Random(5)
    bad = Counter()
    for _ in range(500):
        p = random_process(rng, max_ops=8, names=("a", "b", "c")[: rng.randint(1, 3)])
        r = reduce(p)
        if reduce(r) != r:
            bad["idempotence"] += 1
        e, _ = elementarize(p)
        if not equivalent_processes(p, e):
            bad["elementarize"] += 1
        q, _ = random_rewrite(p, rng.randint(1, 30), rng)
        if reduce(q).ops != r.ops:
            bad["rewrites"] += 1
    verdict(capsys, "5 normal forms, 500 processes", not bad, f"failures: {dict(bad) or 'none'}")


def test_c6_oracle_agreement(capsys):
    rng = random.Random(6)
    cases = []
    for _ in range(30):
        n = rng.randint(2, 3)
        size = rng.randint(2, 4)
        h = random_holes(rng, n, size, rng.randint(1, 4))
        cases.append(("random", from_holes(h, (0,) * n, (size,) * n), None))
    cases.append(("swiss flag", complex_from_json(read_json(DATA / "swiss_flag.json")), 2))
    K, _ = build_KL(boundary_simplex(2))
    cases.append(("K_L two points", K, 4))
    bad = []
    for name, K, expected in cases:
        a, b = K.lo, K.hi
        m = model(K, a, b)
        h = None if contains_unknown(m) else homology_of_model(m)
        classes, _ = flip_oracle(K, a, b, cap=10**6)
        h0 = None if h is None else h.betti[0]
        if h0 != classes or (expected is not None and classes != expected):
            bad.append((name, h0, classes))
    verdict(capsys, "6 oracle agreement, 32 complexes", not bad, f"mismatches: {bad or 'none'}")


def test_c7_deadlock_only_in_lower_program(capsys):
    found = {}
    for name in ("lower", "upper"):
        prog = program_from_json(read_json(DATA / f"mutex_{name}.json"))
        found[name] = deadlocks(state_space(prog), prog.t_bottom, prog.t_top)
    ok = found["lower"] == [(1, 1)] and found["upper"] == []
    verdict(capsys, "7 deadlock only in the lower program", ok, f"lower {found['lower']}, upper {found['upper']}")


def test_c8_crit_conditions(capsys):
    rng = random.Random(8)
    bad = 0
    points = 0
    for _ in range(100):
        n = rng.randint(2, 4)
        size = rng.randint(2, 3)
        h = random_holes(rng, n, size, rng.randint(1, 5))
        for m in iproduct(range(2 * size + 1), repeat=n):
            x = [Fraction(t, 2) for t in m]
            _, b, c = crit_conditions(h, x)
            points += 1
            if b != c:
                bad += 1
    verdict(capsys, "8 cube test equals box test", bad == 0, f"{bad} disagreements over {points} midpoints")
