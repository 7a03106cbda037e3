"""Command line front end: ``pvtopo <command> ...``.

Exit codes: 0 success, 2 bad input, 3 the path-space model contains an
``Unknown`` piece (the report is still written).
"""
from __future__ import annotations

import argparse
import sys
from typing import Any

from . import io
from .cubical import EuclideanComplex, build_QL, compile_program, default_window, holes_of, state_space
from .equivalence import equivalent_programs, reduce_program
from .model import PVProgram, capacity_profile, validate
from .pathspace import (
    Complex,
    complex_model,
    contains_unknown,
    count_paths,
    deadlocks,
    disjoint_union,
    flip_oracle,
    homology_of_model,
    model,
)
from .simplicial import boundary_simplex, homology

SCHEMA = "pvtopo.report/1"
EXIT_OK, EXIT_INPUT, EXIT_UNKNOWN = 0, 2, 3


def parse_box(text: str, n: int | None = None) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """``-1..3`` (same bound on every axis, needs ``n``) or ``0,0..3,3``."""
    try:
        lo_s, hi_s = text.split("..")
        lo = tuple(int(x) for x in lo_s.split(","))
        hi = tuple(int(x) for x in hi_s.split(","))
    except ValueError:
        raise io.InputError(f"cannot read box {text!r}; use lo..hi or l1,l2..h1,h2") from None
    if len(lo) == 1 and len(hi) == 1 and n is not None:
        lo, hi = lo * n, hi * n
    if len(lo) != len(hi) or (n is not None and len(lo) != n):
        raise io.InputError(f"box {text!r} does not have dimension {n}")
    return lo, hi


def _vec(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise io.InputError(f"cannot read point {text!r}") from None


# -- reports -------------------------------------------------------------------


def program_stats(prog: PVProgram) -> dict:
    mx, per = capacity_profile(prog)
    return {
        "processes": prog.n,
        "resources": len(prog.resources),
        "capacity_max": mx,
        "capacities": sorted(set(per.values())),
    }


def _homology_json(h):
    return None if h is None else {**h.to_json(), "text": h.as_text()}


def _oracle_section(K, a, b, m, cap: int, warnings: list[str]) -> dict:
    total = count_paths(K, a, b)
    if total > cap:
        warnings.append(f"oracle skipped: {total} edge paths exceed cap {cap}")
        return {"status": "skipped", "paths": total}
    classes, _ = flip_oracle(K, a, b, cap)
    h = homology_of_model(m) if not contains_unknown(m) else None
    h0 = None if h is None else h.degree(0)[0]
    return {
        "status": "ran",
        "paths": total,
        "classes": classes,
        "model_h0": h0,
        "agree": None if h0 is None else h0 == classes,
    }


def analyze_program(prog: PVProgram, box=None, cap: int = 10**6, oracle: bool = True) -> tuple[dict, int]:
    warnings: list[str] = []
    reports = [validate(p) for p in prog.processes]
    lo, hi = box if box is not None else default_window(prog)
    K = state_space(prog, lo, hi)
    a, b = prog.t_bottom, prog.t_top
    report: dict[str, Any] = {
        "schema": SCHEMA,
        "command": "analyze",
        "program": program_stats(prog),
        "validity": {
            "valid": all(r.valid for r in reports),
            "elementary_valid": all(r.elementary_valid for r in reports),
            "violations": [
                {"process": j, "resource": v.resource, "t": str(v.t), "value": v.value, "condition": v.condition}
                for j, r in enumerate(reports)
                for v in r.violations
            ],
        },
        "state_space": {"box": [list(lo), list(hi)], "cubes_by_dim": K.count_by_dim()},
        "window": {"from": list(a), "to": list(b)},
    }
    inside = all(l <= x <= y <= h for l, x, y, h in zip(lo, a, b, hi))
    if not inside or not K.has_vertex(a) or not K.has_vertex(b):
        warnings.append("start or end state is not in the state space; no executions")
        report.update(deadlocks=[], model={"type": "Empty"}, model_text="∅", homology=None)
        report["warnings"] = warnings
        return report, EXIT_OK
    m = model(K, a, b)
    report["deadlocks"] = [list(v) for v in deadlocks(K, a, b)]
    report["model"] = m.to_json()
    report["model_text"] = str(m)
    unknown = contains_unknown(m)
    h = None if unknown else homology_of_model(m)
    report["homology"] = _homology_json(h)
    if unknown:
        warnings.append("model contains Unknown pieces; analysis incomplete")
    elif h is None:
        warnings.append("homology not determined by the model (product of non-contractible factors)")
    if oracle:
        report["oracle"] = _oracle_section(K, a, b, m, cap, warnings)
    report["warnings"] = warnings
    return report, EXIT_UNKNOWN if unknown else EXIT_OK


def realize_report(L, nonfaces) -> tuple[dict, PVProgram]:
    prog = build_QL(L, nonfaces)
    n = L.n
    predicted = disjoint_union(complex_model(L), Complex(boundary_simplex(n)))
    h = homology(L) + homology(boundary_simplex(n))
    warnings = []
    if not L.simplices:
        warnings.append("empty complex: only the sphere component remains")
    return {
        "schema": SCHEMA,
        "command": "realize",
        "complex": io.simplicial_to_json(L),
        "program": program_stats(prog),
        "predicted": {
            "components": [
                {"type": "complex", "facets": L.facet_lists()},
                {"type": "sphere", "dimension": n - 2},
            ],
            "model": predicted.to_json(),
            "homology": _homology_json(h),
        },
        "warnings": warnings,
    }, prog


# -- text rendering --------------------------------------------------------------


def _text(doc: Any, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(doc, dict):
        for k in sorted(doc):
            v = doc[k]
            if isinstance(v, dict) or (isinstance(v, list) and any(isinstance(x, dict) for x in v)):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(doc, list):
        for v in doc:
            lines.append(f"{pad}-")
            lines.append(_text(v, indent + 1))
    else:
        lines.append(f"{pad}{doc}")
    return "\n".join(lines)


def _emit(doc: Any, args) -> None:
    if isinstance(doc, str):
        out = doc
    elif args.format == "text":
        out = _text(doc) + "\n"
    else:
        out = io.dumps(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


# -- SVG ----------------------------------------------------------------------


def plot_svg(K: EuclideanComplex, unit: int = 40) -> str:
    if K.n != 2:
        raise io.InputError(f"plot needs a planar complex, got n={K.n}")
    (x0, y0), (x1, y1) = K.lo, K.hi
    m = unit // 2
    w, h = (x1 - x0) * unit + 2 * m, (y1 - y0) * unit + 2 * m

    def X(x):
        return m + (x - x0) * unit

    def Y(y):
        return h - m - (y - y0) * unit

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">']
    for k, l in holes_of(K, overhang=True).holes:
        kx, ky = max(k[0], x0), max(k[1], y0)
        lx, ly = min(l[0], x1), min(l[1], y1)
        parts.append(
            f'<rect x="{X(kx)}" y="{Y(ly)}" width="{(lx - kx) * unit}" height="{(ly - ky) * unit}" '
            'fill="#bbbbbb" stroke="none"/>'
        )
    for c in K.cubes():
        if c.dim == 1:
            parts.append(
                f'<line x1="{X(c.lo[0])}" y1="{Y(c.lo[1])}" x2="{X(c.hi[0])}" y2="{Y(c.hi[1])}" '
                'stroke="black" stroke-width="1"/>'
            )
    for v in K.vertices():
        parts.append(f'<circle cx="{X(v[0])}" cy="{Y(v[1])}" r="2" fill="black"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# -- commands --------------------------------------------------------------------


def cmd_realize(args) -> int:
    L, nonfaces = io.simplicial_from_json(io.read_json(args.file))
    report, prog = realize_report(L, nonfaces)
    if args.program_out:
        with open(args.program_out, "w") as fh:
            fh.write(io.dumps(io.program_to_json(prog)))
    else:
        report["program_json"] = io.program_to_json(prog)
    _emit(report, args)
    return EXIT_OK


def cmd_analyze(args) -> int:
    prog = io.program_from_json(io.read_json(args.file))
    box = parse_box(args.box, prog.n) if args.box else None
    report, code = analyze_program(prog, box, args.cap, not args.no_oracle)
    _emit(report, args)
    return code


def cmd_statespace(args) -> int:
    prog = io.program_from_json(io.read_json(args.file))
    lo, hi = parse_box(args.box, prog.n) if args.box else default_window(prog)
    _emit(io.complex_to_json(state_space(prog, lo, hi)), args)
    return EXIT_OK


def cmd_compile(args) -> int:
    K = io.complex_from_json(io.read_json(args.file))
    if not K.shell_complete():
        raise io.InputError("complement reaches the window boundary; enlarge the box")
    h = holes_of(K)
    if K.n < 2:
        raise io.InputError("compiling needs at least two processes")
    _emit(io.program_to_json(compile_program(h)), args)
    return EXIT_OK


def cmd_reduce(args) -> int:
    prog = io.program_from_json(io.read_json(args.file))
    _emit(io.program_to_json(reduce_program(prog)), args)
    return EXIT_OK


def cmd_equiv(args) -> int:
    p = io.program_from_json(io.read_json(args.first))
    q = io.program_from_json(io.read_json(args.second))
    try:
        same = equivalent_programs(p, q)
    except ValueError as e:
        raise io.InputError(str(e)) from e
    if args.format == "text":
        _emit("true\n" if same else "false\n", args)
    else:
        _emit({"equivalent": same}, args)
    return EXIT_OK


def cmd_oracle(args) -> int:
    K = io.complex_from_json(io.read_json(args.file))
    a = _vec(args.source) if args.source else K.lo
    b = _vec(args.target) if args.target else K.hi
    try:
        classes, reps = flip_oracle(K, a, b, args.cap)
    except ValueError as e:
        raise io.InputError(f"{e}; try a smaller window or raise --cap") from e
    _emit({"from": list(a), "to": list(b), "classes": classes, "representatives": [list(r) for r in reps]}, args)
    return EXIT_OK


def cmd_plot(args) -> int:
    K = io.complex_from_json(io.read_json(args.file))
    _emit(plot_svg(K), args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pvtopo", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--out", help="write output here instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("realize", parents=[common], help="program whose executions realize a simplicial complex")
    p.add_argument("file")
    p.add_argument("--program-out", help="write the program JSON here (else it is embedded in the report)")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("analyze", parents=[common], help="validity, state space, deadlocks and path-space model")
    p.add_argument("file")
    p.add_argument("--box", help="state-space window, e.g. -1..3 or 0,0..3,3")
    p.add_argument("--cap", type=int, default=10**6, help="largest path count the oracle enumerates")
    p.add_argument("--no-oracle", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("statespace", parents=[common], help="state space of a program as a complex")
    p.add_argument("file")
    p.add_argument("--box")
    p.set_defaults(func=cmd_statespace)

    p = sub.add_parser("compile", parents=[common], help="program whose state space is the given complex")
    p.add_argument("file")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("reduce", parents=[common], help="normal forms of every process")
    p.add_argument("file")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("equiv", parents=[common], help="execution equivalence of two programs")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("oracle", parents=[common], help="count edge-path classes by brute force")
    p.add_argument("file")
    p.add_argument("--cap", type=int, default=10**6)
    p.add_argument("--from", dest="source", help="start vertex, default the lower box corner")
    p.add_argument("--to", dest="target", help="end vertex, default the upper box corner")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("plot", parents=[common], help="SVG picture of a planar complex")
    p.add_argument("file")
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as e:  # InputError and malformed dimensions or capacities
        print(f"pvtopo: error: {e}", file=sys.stderr)
        return EXIT_INPUT


run = main

if __name__ == "__main__":
    sys.exit(main())
