"""Execution equivalence of processes and programs.

Three rewrite rules generate the equivalence:

* ``E``: drop (or insert) an empty operation;
* ``V``: an elementary release merges into the operation after it;
* ``P``: an elementary acquisition merges into the operation before it.

Every process has a unique reduced form, obtained by splitting it into
elementary operations and then merging each maximal run of releases with the
run of acquisitions that follows it.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

from .model import EMPTY, P, PVOperation, PVProcess, PVProgram, V

Rule = Literal["E", "V", "P"]
Direction = Literal["merge", "split"]


@dataclass(frozen=True)
class RewriteStep:
    """One application of a rule at ``position`` (0-based).

    * ``E merge`` removes the empty op at ``position``; ``E split`` inserts one.
    * ``V merge`` folds the release at ``position`` into ``position + 1``;
      ``V split`` pulls ``V resource`` out in front of the op at ``position``.
    * ``P merge`` folds the acquisition at ``position + 1`` into ``position``;
      ``P split`` pulls ``P resource`` out behind the op at ``position``.
    """

    rule: Rule
    position: int
    direction: Direction
    resource: str | None = None


RewriteTrace = tuple[RewriteStep, ...]


def apply_step(ops: Sequence[PVOperation], step: RewriteStep) -> tuple[PVOperation, ...]:
    ops = list(ops)
    k = step.position
    r = step.resource
    if step.rule == "E":
        if step.direction == "merge":
            if not (0 <= k < len(ops)) or not ops[k].is_empty:
                raise ValueError(f"no empty operation at {k}")
            del ops[k]
        else:
            if not (0 <= k <= len(ops)):
                raise ValueError(f"cannot insert at {k}")
            ops.insert(k, EMPTY)
    elif step.rule == "V":
        if step.direction == "merge":
            if not (0 <= k < len(ops) - 1) or ops[k] != V(r):
                raise ValueError(f"op {k} is not V{r} followed by an operation")
            ops[k : k + 2] = [ops[k] + ops[k + 1]]
        else:
            if not (0 <= k < len(ops)) or ops[k].V(r) < 1:
                raise ValueError(f"op {k} does not release {r}")
            ops[k : k + 1] = [V(r), ops[k] - V(r)]
    elif step.rule == "P":
        if step.direction == "merge":
            if not (0 <= k < len(ops) - 1) or ops[k + 1] != P(r):
                raise ValueError(f"op {k + 1} is not P{r} preceded by an operation")
            ops[k : k + 2] = [ops[k] + ops[k + 1]]
        else:
            if not (0 <= k < len(ops)) or ops[k].P(r) < 1:
                raise ValueError(f"op {k} does not acquire {r}")
            ops[k : k + 1] = [ops[k] - P(r), P(r)]
    else:
        raise ValueError(f"unknown rule {step.rule!r}")
    return tuple(ops)


def replay(ops: Sequence[PVOperation], trace: Iterable[RewriteStep]) -> tuple[PVOperation, ...]:
    out = tuple(ops)
    for step in trace:
        out = apply_step(out, step)
    return out


def _order(ops: Sequence[PVOperation], resource_order: Sequence[str] | None) -> list[str]:
    used = set()
    for q in ops:
        used |= q.resources()
    if resource_order is None:
        return sorted(used)
    missing = used - set(resource_order)
    if missing:
        raise ValueError(f"resources {sorted(missing)} missing from resource order")
    return [r for r in resource_order if r in used]


def elementarize(
    p: PVProcess, resource_order: Sequence[str] | None = None
) -> tuple[PVProcess, RewriteTrace]:
    """Split every operation into its releases, then its acquisitions.

    Within each group resources follow ``resource_order`` (lexicographic by
    default) and repeat according to multiplicity.  Progressions are dropped.
    """
    order = _order(p.ops, resource_order)
    ops = tuple(p.ops)
    trace: list[RewriteStep] = []

    def do(step):
        nonlocal ops
        ops = apply_step(ops, step)
        trace.append(step)

    pos = 0
    for q in p.ops:
        # peel releases off the front: V r1 .. V rs, rest
        for r in order:
            for _ in range(q.V(r)):
                do(RewriteStep("V", pos, "split", r))
                pos += 1
        # peel acquisitions off the back, last resource first
        for r in reversed(order):
            for _ in range(q.P(r)):
                do(RewriteStep("P", pos, "split", r))
        # what is left at pos is empty
        do(RewriteStep("E", pos, "merge"))
        pos += sum(k for _, k in q.acquire)
    return PVProcess(ops), tuple(trace)


def _blocks(ops: Sequence[PVOperation]) -> list[tuple[int, int, int]]:
    """Group an elementary sequence into (start, n_releases, n_acquisitions)."""
    out: list[tuple[int, int, int]] = []
    i = 0
    while i < len(ops):
        start = i
        while i < len(ops) and ops[i].release:
            i += 1
        nv = i - start
        while i < len(ops) and ops[i].acquire:
            i += 1
        out.append((start, nv, i - start - nv))
    return out


def reduce_traced(
    p: PVProcess, resource_order: Sequence[str] | None = None
) -> tuple[PVProcess, RewriteTrace]:
    elem, trace = elementarize(p, resource_order)
    ops = elem.ops
    steps = list(trace)
    # blocks are merged left to right; after merging, block b sits at index b
    for b, (_, nv, np_) in enumerate(_blocks(elem.ops)):
        anchor = b + nv if np_ else b + nv - 1
        for _ in range(np_ - 1):
            step = RewriteStep("P", anchor, "merge", ops[anchor + 1].acquire[0][0])
            ops = apply_step(ops, step)
            steps.append(step)
        for i in range(anchor - 1, b - 1, -1):
            step = RewriteStep("V", i, "merge", ops[i].release[0][0])
            ops = apply_step(ops, step)
            steps.append(step)
    return PVProcess(ops), tuple(steps)


def reduce(p: PVProcess, resource_order: Sequence[str] | None = None) -> PVProcess:
    return reduce_traced(p, resource_order)[0]


def is_reduced(p: PVProcess) -> bool:
    """Every op but the last acquires, every op but the first releases.

    This is the shape the block merge produces; no rule can shorten it.
    """
    l = len(p.ops)
    if any(q.is_empty for q in p.ops):
        return False
    return all(p.ops[i].acquire for i in range(l - 1)) and all(p.ops[i].release for i in range(1, l))


def equivalent_processes(p: PVProcess, q: PVProcess) -> bool:
    return reduce(p).ops == reduce(q).ops


def _encode(p: PVProcess) -> tuple:
    return tuple((q.release, q.acquire) for q in reduce(p).ops)


def equivalent_programs(a: PVProgram, b: PVProgram) -> bool:
    if a.resources != b.resources:
        raise ValueError("programs use different resource sets")
    return sorted(map(_encode, a.processes)) == sorted(map(_encode, b.processes))


def random_rewrite(p: PVProcess, steps: int, rng: random.Random) -> tuple[PVProcess, RewriteTrace]:
    """Apply ``steps`` randomly chosen applicable rewrites, in either direction."""
    ops = tuple(p.ops)
    trace: list[RewriteStep] = []
    for _ in range(steps):
        moves: list[RewriteStep] = [RewriteStep("E", k, "split") for k in range(len(ops) + 1)]
        for k, q in enumerate(ops):
            if q.is_empty:
                moves.append(RewriteStep("E", k, "merge"))
            for r, _ in q.release:
                moves.append(RewriteStep("V", k, "split", r))
            for r, _ in q.acquire:
                moves.append(RewriteStep("P", k, "split", r))
            if k + 1 < len(ops):
                if q.is_elementary and q.release:
                    moves.append(RewriteStep("V", k, "merge", q.release[0][0]))
                nxt = ops[k + 1]
                if nxt.is_elementary and nxt.acquire:
                    moves.append(RewriteStep("P", k, "merge", nxt.acquire[0][0]))
        step = rng.choice(moves)
        ops = apply_step(ops, step)
        trace.append(step)
    return PVProcess(ops), tuple(trace)


def reduce_program(prog: PVProgram) -> PVProgram:
    order = prog.resources.names
    return PVProgram(prog.resources, tuple(reduce(p, order) for p in prog.processes))


def elementarize_program(prog: PVProgram) -> PVProgram:
    order = prog.resources.names
    return PVProgram(prog.resources, tuple(elementarize(p, order)[0] for p in prog.processes))
