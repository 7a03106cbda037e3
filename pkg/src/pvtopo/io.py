"""JSON formats for programs, complexes and simplicial complexes.

Loaders raise ``InputError`` (with line/column when the JSON itself is bad) so
the command line can map every input problem to one exit code.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .cubical import ElementaryCube, EuclideanComplex, HoleSet, from_holes, holes_of
from .model import PVOperation, PVProcess, PVProgram, ResourceSet
from .simplicial import SimplicialComplex, from_minimal_nonfaces


class InputError(ValueError):
    pass


def read_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from e


def _flat(x) -> bool:
    return not isinstance(x, (dict, list)) or (isinstance(x, list) and all(map(_flat, x)) and len(x) < 20)


def _pretty(doc, indent: int) -> str:
    if _flat(doc) and not isinstance(doc, dict):
        return json.dumps(doc, ensure_ascii=False)
    pad = "  " * (indent + 1)
    if isinstance(doc, dict):
        if not doc:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_pretty(doc[k], indent + 1)}" for k in sorted(doc)]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    items = [pad + _pretty(v, indent + 1) for v in doc]
    return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"


def dumps(doc: Any) -> str:
    """Stable JSON: sorted keys, short lists of scalars kept on one line."""
    return _pretty(doc, 0) + "\n"


def _need(doc, key, kind, where):
    if not isinstance(doc, dict) or key not in doc:
        raise InputError(f"{where}: missing key {key!r}")
    val = doc[key]
    if not isinstance(val, kind):
        raise InputError(f"{where}: {key!r} has the wrong type")
    return val


def _int_vec(x, where) -> tuple[int, ...]:
    if not isinstance(x, list) or not all(isinstance(t, int) and not isinstance(t, bool) for t in x):
        raise InputError(f"{where}: expected a list of integers, got {x!r}")
    return tuple(x)


# -- programs ------------------------------------------------------------------


def _op_from(d, where) -> PVOperation:
    if not isinstance(d, dict):
        raise InputError(f"{where}: operation must be an object")
    extra = set(d) - {"P", "V", "Pmulti", "Vmulti"}
    if extra:
        raise InputError(f"{where}: unknown keys {sorted(extra)}")
    acq: dict[str, int] = {}
    rel: dict[str, int] = {}
    for key, acc in (("P", acq), ("V", rel)):
        for r in d.get(key, []):
            if not isinstance(r, str):
                raise InputError(f"{where}: resource names must be strings")
            acc[r] = acc.get(r, 0) + 1
        for r, k in d.get(key + "multi", {}).items():
            if not isinstance(k, int) or k < 0:
                raise InputError(f"{where}: multiplicity of {r!r} must be a nonnegative integer")
            acc[r] = acc.get(r, 0) + k
    return PVOperation.make(acq, rel)


def program_from_json(doc) -> PVProgram:
    res = _need(doc, "resources", list, "program")
    names = []
    caps = {}
    for i, r in enumerate(res):
        name = _need(r, "name", str, f"resource {i}")
        cap = _need(r, "capacity", int, f"resource {i}")
        names.append(name)
        caps[name] = cap
    procs = _need(doc, "processes", list, "program")
    progs = doc.get("progressions")
    if progs is not None and (not isinstance(progs, list) or len(progs) != len(procs)):
        raise InputError("program: need one progression per process")
    try:
        resources = ResourceSet(tuple(names), caps)
        processes = []
        for j, ops in enumerate(procs):
            if not isinstance(ops, list):
                raise InputError(f"process {j}: expected a list of operations")
            q = tuple(_op_from(o, f"process {j} op {i}") for i, o in enumerate(ops))
            t = _int_vec(progs[j], f"progression {j}") if progs is not None else tuple(range(len(q)))
            processes.append(PVProcess(q, t))
        return PVProgram(resources, tuple(processes))
    except InputError:
        raise
    except ValueError as e:
        raise InputError(f"program: {e}") from e


def _op_to(q: PVOperation) -> dict:
    d: dict[str, Any] = {}
    for key, pairs in (("P", q.acquire), ("V", q.release)):
        if pairs:
            d[key] = [r for r, k in pairs if k == 1]
            multi = {r: k for r, k in pairs if k > 1}
            if multi:
                d[key + "multi"] = multi
    return d


def program_to_json(prog: PVProgram) -> dict:
    doc: dict[str, Any] = {
        "resources": [{"name": r, "capacity": prog.resources.capacity[r]} for r in prog.resources.names],
        "processes": [[_op_to(q) for q in p.ops] for p in prog.processes],
    }
    if all(p.progression is not None for p in prog.processes):
        doc["progressions"] = [list(p.progression) for p in prog.processes]
    return doc


# -- Euclidean complexes -------------------------------------------------------


def complex_from_json(doc) -> EuclideanComplex:
    if not isinstance(doc, dict):
        raise InputError("complex: expected an object")
    try:
        if "holes" in doc:
            n = _need(doc, "n", int, "complex")
            box = _need(doc, "box", list, "complex")
            if len(box) != 2:
                raise InputError("complex: box must be [lo, hi]")
            lo, hi = _int_vec(box[0], "box"), _int_vec(box[1], "box")
            holes = [(_int_vec(k, "hole"), _int_vec(l, "hole")) for k, l in doc["holes"]]
            if len(lo) != n or len(hi) != n:
                raise InputError(f"complex: box dimension differs from n={n}")
            return from_holes(HoleSet(n, holes), lo, hi)
        if "cubes" in doc:
            cubes = [ElementaryCube(_int_vec(lo, "cube"), _int_vec(hi, "cube")) for lo, hi in doc["cubes"]]
            if not cubes:
                raise InputError("complex: no cubes")
            if "box" in doc:
                lo, hi = _int_vec(doc["box"][0], "box"), _int_vec(doc["box"][1], "box")
            else:
                lo = tuple(min(c.lo[i] for c in cubes) for i in range(cubes[0].n))
                hi = tuple(max(c.hi[i] for c in cubes) for i in range(cubes[0].n))
            return EuclideanComplex.from_cubes(lo, hi, cubes)
    except InputError:
        raise
    except (ValueError, TypeError) as e:
        raise InputError(f"complex: {e}") from e
    raise InputError("complex: need either 'holes' or 'cubes'")


def complex_to_json(K: EuclideanComplex) -> dict:
    box = [list(K.lo), list(K.hi)]
    if K.shell_complete():
        h = holes_of(K)
        return {"n": K.n, "box": box, "holes": [[list(k), list(l)] for k, l in h.holes]}
    return {"n": K.n, "box": box, "cubes": [[list(c.lo), list(c.hi)] for c in K.cubes()]}


# -- simplicial complexes --------------------------------------------------------


def simplicial_from_json(doc) -> tuple[SimplicialComplex, list[tuple[int, ...]] | None]:
    """The complex and, when given that way, its list of non-faces."""
    n = _need(doc, "n", int, "simplicial complex")
    try:
        if "nonfaces" in doc:
            nf = [tuple(_int_vec(s, "non-face")) for s in doc["nonfaces"]]
            return from_minimal_nonfaces(n, nf), nf
        if "facets" in doc:
            fs = [_int_vec(s, "facet") for s in doc["facets"]]
            return SimplicialComplex.from_facets(n, fs), None
    except InputError:
        raise
    except ValueError as e:
        raise InputError(f"simplicial complex: {e}") from e
    raise InputError("simplicial complex: need either 'nonfaces' or 'facets'")


def simplicial_to_json(L: SimplicialComplex) -> dict:
    return {"n": L.n, "facets": L.facet_lists()}

