"""PV-programs: operations, processes, programs and their potential functions.

A process is a sequence of operations, each of which first releases and then
acquires resources.  Attaching integer timestamps (a progression) to the
operations turns every resource count into a step function of the process'
progress; summing over processes gives the program potential whose sublevel
set is the state space.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Number = Union[int, Fraction]


def _counts(items: Mapping[str, int] | Iterable[str] | None) -> tuple[tuple[str, int], ...]:
    if items is None:
        return ()
    acc: dict[str, int] = {}
    if isinstance(items, Mapping):
        for name, k in items.items():
            if k < 0:
                raise ValueError(f"negative multiplicity for {name!r}")
            acc[name] = acc.get(name, 0) + int(k)
    else:
        if isinstance(items, str):
            items = [items]
        for name in items:
            acc[name] = acc.get(name, 0) + 1
    return tuple(sorted((r, k) for r, k in acc.items() if k > 0))


@dataclass(frozen=True)
class ResourceSet:
    names: tuple[str, ...]
    capacity: Mapping[str, int] = field(hash=False)

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("resource names must be unique")
        if set(self.capacity) != set(self.names):
            raise ValueError("capacity must be given for exactly the named resources")
        for r, mu in self.capacity.items():
            if mu < 1:
                raise ValueError(f"capacity of {r!r} must be >= 1, got {mu}")
        object.__setattr__(self, "capacity", dict(self.capacity))

    @classmethod
    def uniform(cls, names: Iterable[str], mu: int) -> "ResourceSet":
        names = tuple(names)
        return cls(names, {r: mu for r in names})

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, r):
        return r in self.capacity

    def key(self) -> tuple[tuple[str, int], ...]:
        return tuple((r, self.capacity[r]) for r in self.names)


@dataclass(frozen=True)
class PVOperation:
    """A single operation ``V X P Y``: release ``X``, then acquire ``Y``.

    Both sides are stored as sorted ``(resource, multiplicity)`` pairs with
    zero entries dropped, so equality is equality of the two functions.
    """

    acquire: tuple[tuple[str, int], ...] = ()
    release: tuple[tuple[str, int], ...] = ()

    @classmethod
    def make(cls, P=None, V=None) -> "PVOperation":
        return cls(_counts(P), _counts(V))

    def P(self, r: str) -> int:
        return dict(self.acquire).get(r, 0)

    def V(self, r: str) -> int:
        return dict(self.release).get(r, 0)

    @property
    def is_empty(self) -> bool:
        return not self.acquire and not self.release

    @property
    def is_elementary(self) -> bool:
        units = [k for _, k in self.acquire] + [k for _, k in self.release]
        return units == [1]

    def resources(self) -> set[str]:
        return {r for r, _ in self.acquire} | {r for r, _ in self.release}

    def __add__(self, other: "PVOperation") -> "PVOperation":
        p = dict(self.acquire)
        v = dict(self.release)
        for r, k in other.acquire:
            p[r] = p.get(r, 0) + k
        for r, k in other.release:
            v[r] = v.get(r, 0) + k
        return PVOperation.make(p, v)

    def __sub__(self, other: "PVOperation") -> "PVOperation":
        p = dict(self.acquire)
        v = dict(self.release)
        for r, k in other.acquire:
            p[r] = p.get(r, 0) - k
        for r, k in other.release:
            v[r] = v.get(r, 0) - k
        return PVOperation.make(p, v)

    def __str__(self):
        def side(tag, pairs):
            return "".join(f"{tag}{r}" if k == 1 else f"{tag}{r}^{k}" for r, k in pairs)

        s = side("V", self.release) + side("P", self.acquire)
        return s or "∅"


EMPTY = PVOperation()


def P(r: str) -> PVOperation:
    """Elementary acquisition of ``r``."""
    return PVOperation(((r, 1),), ())


def V(r: str) -> PVOperation:
    """Elementary release of ``r``."""
    return PVOperation((), ((r, 1),))


@dataclass(frozen=True)
class PVProcess:
    ops: tuple[PVOperation, ...]
    progression: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        if self.progression is not None:
            prog = tuple(int(t) for t in self.progression)
            if len(prog) != len(self.ops):
                raise ValueError("progression length must match number of operations")
            if any(b <= a for a, b in zip(prog, prog[1:])):
                raise ValueError("progression must be strictly increasing")
            object.__setattr__(self, "progression", prog)

    def __len__(self):
        return len(self.ops)

    def timed(self) -> list[tuple[int, PVOperation]]:
        if self.progression is None:
            raise ValueError("process has no progression")
        return list(zip(self.progression, self.ops))

    def resources(self) -> set[str]:
        out: set[str] = set()
        for q in self.ops:
            out |= q.resources()
        return out

    @property
    def is_elementary(self) -> bool:
        return all(q.is_elementary for q in self.ops)

    def __str__(self):
        if self.progression is None:
            return "(" + ", ".join(map(str, self.ops)) + ")"
        return "(" + ", ".join(f"{q}[{t}]" for q, t in zip(self.ops, self.progression)) + ")"


@dataclass(frozen=True)
class PVProgram:
    resources: ResourceSet
    processes: tuple[PVProcess, ...]

    def __post_init__(self):
        object.__setattr__(self, "processes", tuple(self.processes))
        if not self.processes:
            raise ValueError("a program needs at least one process")
        for j, p in enumerate(self.processes):
            unknown = p.resources() - set(self.resources.names)
            if unknown:
                raise ValueError(f"process {j} uses undeclared resources {sorted(unknown)}")

    @property
    def n(self) -> int:
        return len(self.processes)

    def _corner(self, which: int) -> tuple[int, ...]:
        if any(p.progression is None for p in self.processes):
            raise ValueError("all processes need progressions")
        if any(len(p) == 0 for p in self.processes):
            raise ValueError("corner undefined for empty processes")
        return tuple(p.progression[which] for p in self.processes)

    @property
    def t_bottom(self) -> tuple[int, ...]:
        return self._corner(0)

    @property
    def t_top(self) -> tuple[int, ...]:
        return self._corner(-1)

    def with_canonical_progressions(self) -> "PVProgram":
        return PVProgram(self.resources, tuple(canonical_progression(p) for p in self.processes))


def canonical_progression(p: PVProcess) -> PVProcess:
    return PVProcess(p.ops, tuple(range(len(p.ops))))


def potential_process(p: PVProcess, r: str, t: Number) -> int:
    """Holds of ``r`` by ``p`` at progress ``t``.

    Acquisitions count strictly after their timestamp, releases from their
    timestamp on.
    """
    t = Fraction(t)
    total = 0
    for ti, q in p.timed():
        if ti < t:
            total += q.P(r)
        if ti <= t:
            total -= q.V(r)
    return total


def potential_program(prog: PVProgram, x: Sequence[Number]) -> dict[str, int]:
    if len(x) != prog.n:
        raise ValueError(f"expected a point of dimension {prog.n}, got {len(x)}")
    return {
        r: sum(potential_process(p, r, xj) for p, xj in zip(prog.processes, x))
        for r in prog.resources.names
    }


def sample_points(p: PVProcess) -> list[Fraction]:
    """Breakpoints and the midpoints after them, plus one point before the first.

    Potentials are constant between consecutive breakpoints, so these points
    see every value a potential takes.
    """
    if not p.ops:
        return [Fraction(0)]
    ts = [Fraction(t) for t in p.progression]
    pts = [ts[0] - Fraction(1, 2)]
    for t in ts:
        pts += [t, t + Fraction(1, 2)]
    return pts


@dataclass(frozen=True)
class Violation:
    resource: str
    t: Fraction
    value: int
    condition: str  # "negative" | "not released" | "not 0/1"


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    elementary: bool
    elementary_valid: bool
    violations: tuple[Violation, ...] = ()


def validate(p: PVProcess) -> ValidityReport:
    if p.progression is None:
        p = canonical_progression(p)
    viols: list[Violation] = []
    pts = sample_points(p)
    for r in sorted(p.resources()):
        for t in pts:
            a = potential_process(p, r, t)
            if a < 0:
                viols.append(Violation(r, t, a, "negative"))
        # past the last breakpoint the potential is its limit
        t_end = pts[-1]
        a_end = potential_process(p, r, t_end)
        if a_end != 0:
            viols.append(Violation(r, t_end, a_end, "not released"))
    valid = not viols
    elementary = p.is_elementary
    extra: list[Violation] = []
    for r in sorted(p.resources()):
        for t in pts:
            a = potential_process(p, r, t)
            if a not in (0, 1):
                extra.append(Violation(r, t, a, "not 0/1"))
    return ValidityReport(
        valid=valid,
        elementary=elementary,
        elementary_valid=valid and elementary and not extra,
        violations=tuple(viols + extra),
    )


def validate_program(prog: PVProgram) -> list[ValidityReport]:
    return [validate(p) for p in prog.processes]


def capacity_profile(prog: PVProgram) -> tuple[int, dict[str, int]]:
    """Largest capacity and the per-resource capacities.

    The program's execution-space components are PV(max)-spaces.
    """
    per = {r: prog.resources.capacity[r] for r in prog.resources.names}
    return max(per.values(), default=0), per
