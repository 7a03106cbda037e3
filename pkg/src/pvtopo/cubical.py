"""Euclidean (cubical) complexes in a bounded integer window.

A complex is stored as a boolean array over the *doubled* grid: the
elementary cube ``[lo, hi]`` is the entry at ``lo + hi``.  Even coordinates
are degenerate directions, odd ones are unit intervals.  The window
``[box_lo, box_hi]`` therefore maps to indices ``0 .. 2 * (box_hi - box_lo)``.

Holes are open integer boxes ``(k, l)``; a complex with bounded complement is
the window minus a finite union of holes.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil, floor
from typing import Iterable, Iterator, Sequence

import numpy as np

from .model import PVOperation, PVProcess, PVProgram, ResourceSet, potential_process
from .simplicial import SimplicialComplex, boundary_simplex

Vec = tuple[int, ...]


def _vec(v) -> Vec:
    return tuple(int(x) for x in v)


@dataclass(frozen=True, order=True)
class ElementaryCube:
    lo: Vec
    hi: Vec

    def __post_init__(self):
        object.__setattr__(self, "lo", _vec(self.lo))
        object.__setattr__(self, "hi", _vec(self.hi))
        if len(self.lo) != len(self.hi):
            raise ValueError("cube corners of different dimension")
        if any(h - l not in (0, 1) for l, h in zip(self.lo, self.hi)):
            raise ValueError(f"[{self.lo}, {self.hi}] is not an elementary cube")

    @classmethod
    def from_doubled(cls, m: Sequence[int]) -> "ElementaryCube":
        return cls(tuple(x // 2 for x in m), tuple(-(-x // 2) for x in m))

    @property
    def n(self) -> int:
        return len(self.lo)

    @property
    def dim(self) -> int:
        return sum(h - l for l, h in zip(self.lo, self.hi))

    @property
    def doubled(self) -> Vec:
        return tuple(l + h for l, h in zip(self.lo, self.hi))


@dataclass(frozen=True)
class HoleSet:
    n: int
    holes: tuple[tuple[Vec, Vec], ...]

    def __post_init__(self):
        seen = []
        for k, l in self.holes:
            k, l = _vec(k), _vec(l)
            if len(k) != self.n or len(l) != self.n:
                raise ValueError("hole of wrong dimension")
            if not all(a < b for a, b in zip(k, l)):
                raise ValueError(f"hole ({k}, {l}) is empty")
            if (k, l) not in seen:
                seen.append((k, l))
        object.__setattr__(self, "holes", tuple(seen))

    def __len__(self):
        return len(self.holes)

    def bbox(self) -> tuple[Vec, Vec] | None:
        if not self.holes:
            return None
        lo = tuple(min(k[i] for k, _ in self.holes) for i in range(self.n))
        hi = tuple(max(l[i] for _, l in self.holes) for i in range(self.n))
        return lo, hi

    def contains_point(self, x: Sequence) -> bool:
        """Whether ``x`` lies in some open hole."""
        return any(all(a < xi < b for a, xi, b in zip(k, x, l)) for k, l in self.holes)


class EuclideanComplex:
    """Face-closed set of elementary cubes inside ``[lo, hi]``."""

    __slots__ = ("lo", "hi", "cells")

    def __init__(self, lo: Sequence[int], hi: Sequence[int], cells: np.ndarray):
        self.lo = _vec(lo)
        self.hi = _vec(hi)
        if len(self.lo) != len(self.hi) or any(a > b for a, b in zip(self.lo, self.hi)):
            raise ValueError(f"bad window [{self.lo}, {self.hi}]")
        shape = tuple(2 * (b - a) + 1 for a, b in zip(self.lo, self.hi))
        cells = np.asarray(cells, dtype=bool)
        if cells.shape != shape:
            raise ValueError(f"cell array has shape {cells.shape}, window needs {shape}")
        self.cells = cells

    # construction -------------------------------------------------------
    @classmethod
    def empty(cls, lo, hi) -> "EuclideanComplex":
        lo, hi = _vec(lo), _vec(hi)
        return cls(lo, hi, np.zeros(tuple(2 * (b - a) + 1 for a, b in zip(lo, hi)), bool))

    @classmethod
    def full(cls, lo, hi) -> "EuclideanComplex":
        k = cls.empty(lo, hi)
        k.cells[...] = True
        return k

    @classmethod
    def from_cubes(cls, lo, hi, cubes: Iterable[ElementaryCube]) -> "EuclideanComplex":
        """Face closure of ``cubes``; every cube must lie in the window."""
        k = cls.empty(lo, hi)
        for c in cubes:
            k.cells[k._index(c.doubled, strict=True)] = True
        k.cells = close_faces(k.cells)
        return k

    # geometry -------------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.lo)

    @property
    def box(self) -> tuple[Vec, Vec]:
        return self.lo, self.hi

    def _index(self, m: Sequence[int], strict: bool = False):
        idx = tuple(x - 2 * a for x, a in zip(m, self.lo))
        if any(i < 0 or i >= s for i, s in zip(idx, self.cells.shape)):
            if strict:
                raise ValueError(f"cube with doubled center {tuple(m)} outside window")
            return None
        return idx

    def has_doubled(self, m: Sequence[int]) -> bool:
        idx = self._index(m)
        return idx is not None and bool(self.cells[idx])

    def __contains__(self, c) -> bool:
        if isinstance(c, ElementaryCube):
            if c.n != self.n:
                raise ValueError("dimension mismatch")
            return self.has_doubled(c.doubled)
        return self.has_vertex(c)

    def has_vertex(self, v: Sequence[int]) -> bool:
        return self.has_doubled([2 * x for x in v])

    def cubes(self) -> Iterator[ElementaryCube]:
        for idx in np.argwhere(self.cells):
            yield ElementaryCube.from_doubled([int(i) + 2 * a for i, a in zip(idx, self.lo)])

    def vertices(self) -> list[Vec]:
        even = self.cells[tuple(slice(0, None, 2) for _ in range(self.n))]
        return [tuple(int(i) + a for i, a in zip(idx, self.lo)) for idx in np.argwhere(even)]

    def dims(self) -> np.ndarray:
        """Dimension of the cube at each array position."""
        d = np.zeros(self.cells.shape, dtype=np.int8)
        for ax, s in enumerate(self.cells.shape):
            shape = [1] * self.n
            shape[ax] = s
            d = d + (np.arange(s) % 2).reshape(shape)
        return d

    def count_by_dim(self) -> list[int]:
        counts = np.bincount(self.dims()[self.cells], minlength=self.n + 1)
        return [int(c) for c in counts]

    def __len__(self):
        return int(self.cells.sum())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, EuclideanComplex)
            and self.box == other.box
            and np.array_equal(self.cells, other.cells)
        )

    def __hash__(self):
        return hash((self.box, self.cells.tobytes()))

    def _same_box(self, other: "EuclideanComplex"):
        if self.box != other.box:
            raise ValueError("complexes live in different windows; rebox first")

    def __or__(self, other: "EuclideanComplex") -> "EuclideanComplex":
        self._same_box(other)
        return EuclideanComplex(self.lo, self.hi, self.cells | other.cells)

    def __and__(self, other: "EuclideanComplex") -> "EuclideanComplex":
        self._same_box(other)
        return EuclideanComplex(self.lo, self.hi, self.cells & other.cells)

    def rebox(self, lo, hi) -> "EuclideanComplex":
        """The cubes of ``self`` lying in the window ``[lo, hi]``."""
        out = EuclideanComplex.empty(lo, hi)
        src, dst = [], []
        for a, b, a2, b2 in zip(self.lo, self.hi, out.lo, out.hi):
            s = max(a, a2)
            e = min(b, b2)
            if s > e:
                return out
            src.append(slice(2 * (s - a), 2 * (e - a) + 1))
            dst.append(slice(2 * (s - a2), 2 * (e - a2) + 1))
        out.cells[tuple(dst)] = self.cells[tuple(src)]
        return out

    def is_face_closed(self) -> bool:
        return np.array_equal(close_faces(self.cells), self.cells)

    def shell_complete(self) -> bool:
        """Every cube on the window boundary is present."""
        for ax in range(self.n):
            for end in (0, -1):
                sl = [slice(None)] * self.n
                sl[ax] = end
                if not self.cells[tuple(sl)].all():
                    return False
        return True

    def __repr__(self):
        return f"EuclideanComplex(box={self.box}, cubes={len(self)})"


def close_faces(cells: np.ndarray) -> np.ndarray:
    """Add every face of every present cube (doubled-grid convention)."""
    out = cells.copy()
    for ax, s in enumerate(out.shape):
        if s < 3:
            continue
        src = [slice(None)] * out.ndim
        src[ax] = slice(1, s, 2)
        odd = out[tuple(src)]
        for shift in (0, 2):
            dst = [slice(None)] * out.ndim
            dst[ax] = slice(shift, s - 2 + shift + 1, 2)
            out[tuple(dst)] |= odd
    return out


# -- membership criteria ----------------------------------------------------


def cube_in(K: EuclideanComplex | HoleSet, c: ElementaryCube) -> bool:
    if c.n != K.n:
        raise ValueError(f"cube of dimension {c.n} tested against complex in R^{K.n}")
    if isinstance(K, HoleSet):
        # c misses (k, l) iff some coordinate leaves the open interval
        return all(
            any(h <= a or lo >= b for lo, h, a, b in zip(c.lo, c.hi, k, l)) for k, l in K.holes
        )
    return c in K


def crit_conditions(h: HoleSet, x: Sequence[Fraction]) -> tuple[bool, bool, bool]:
    """Three equivalent descriptions of ``x`` belonging to the complement of ``h``.

    Returns ``(x in K, [floor x, ceil x] in K, (ceil(x-1), floor(x+1)) meets K)``
    where ``K`` is the complement of the holes; for a Euclidean complex the
    three agree.  The last test probes every cell centre of the open box.
    """
    x = [Fraction(t) for t in x]
    a = not h.contains_point(x)
    b = cube_in(h, ElementaryCube(tuple(floor(t) for t in x), tuple(ceil(t) for t in x)))
    k = [ceil(t - 1) for t in x]
    l = [floor(t + 1) for t in x]
    probes = product(*[[Fraction(m, 2) for m in range(2 * ki + 1, 2 * li)] for ki, li in zip(k, l)])
    c = any(not h.contains_point(y) for y in probes)
    return a, b, c


# -- holes <-> complexes ------------------------------------------------------


def _hole_mask(K: EuclideanComplex, k: Vec, l: Vec) -> tuple[slice, ...] | None:
    """Array slice of the cells whose relative interior meets the open box."""
    sl = []
    for a, b, s, e in zip(k, l, K.lo, K.hi):
        start = max(2 * a + 1 - 2 * s, 0)
        stop = min(2 * b - 1 - 2 * s, 2 * (e - s))
        if start > stop:
            return None
        sl.append(slice(start, stop + 1))
    return tuple(sl)


def from_holes(h: HoleSet, lo, hi) -> EuclideanComplex:
    lo, hi = _vec(lo), _vec(hi)
    if len(lo) != h.n:
        raise ValueError("window dimension differs from hole dimension")
    for k, l in h.holes:
        if any(a < s for a, s in zip(k, lo)) or any(b > e for b, e in zip(l, hi)):
            raise ValueError(f"hole ({k}, {l}) sticks out of window [{lo}, {hi}]")
    K = EuclideanComplex.full(lo, hi)
    for k, l in h.holes:
        K.cells[_hole_mask(K, k, l)] = False
    return K


def holes_of(K: EuclideanComplex, overhang: bool = False) -> HoleSet:
    """A hole set whose complement, inside the window, is ``K``.

    Every missing cell with centre ``x`` yields the open box
    ``(ceil(x - 1), floor(x + 1))``, which avoids ``K``; boxes are then grown
    greedily axis by axis while they stay outside ``K`` and dominated ones are
    dropped.  The result is a valid description, not a canonical one.

    With ``overhang`` the boxes of missing boundary cells may stick out of the
    window by one unit; only their trace on the window matters then.
    """
    if not overhang and not K.shell_complete():
        raise ValueError("complement reaches the window boundary; enlarge the window")
    missing = ~K.cells

    def clear(k, l):
        sl = _hole_mask(K, k, l)
        return sl is not None and not K.cells[sl].any()

    covered = np.zeros_like(missing)
    boxes: list[tuple[Vec, Vec]] = []
    order = sorted(
        (tuple(int(i) + 2 * a for i, a in zip(idx, K.lo)) for idx in np.argwhere(missing)),
        key=lambda m: (sum(x % 2 for x in m), m),
    )
    for m in order:
        if covered[K._index(m)]:
            continue
        k = [(x - 1) // 2 for x in m]
        l = [-(-(x + 1) // 2) for x in m]
        for ax in range(K.n):
            while l[ax] < K.hi[ax] and clear(k, l[:ax] + [l[ax] + 1] + l[ax + 1 :]):
                l[ax] += 1
            while k[ax] > K.lo[ax] and clear(k[:ax] + [k[ax] - 1] + k[ax + 1 :], l):
                k[ax] -= 1
        boxes.append((tuple(k), tuple(l)))
        covered[_hole_mask(K, k, l)] = True
    keep = [
        b
        for i, b in enumerate(boxes)
        if not any(
            j != i
            and all(x <= y for x, y in zip(o[0], b[0]))
            and all(x >= y for x, y in zip(o[1], b[1]))
            and (o != b or j < i)
            for j, o in enumerate(boxes)
        )
    ]
    return HoleSet(K.n, tuple(sorted(keep)))


# -- programs <-> complexes ------------------------------------------------


def _potential_table(p: PVProcess, r: str, lo: int, hi: int) -> np.ndarray:
    """Max of the potential over each doubled-grid interval of ``[lo, hi]``."""
    out = np.empty(2 * (hi - lo) + 1, dtype=np.int64)
    for i in range(out.size):
        m = 2 * lo + i
        if m % 2 == 0:
            out[i] = potential_process(p, r, m // 2)
        else:
            v = (m - 1) // 2
            out[i] = max(potential_process(p, r, t) for t in (v, Fraction(2 * v + 1, 2), v + 1))
    return out


def default_window(prog: PVProgram) -> tuple[Vec, Vec]:
    return tuple(t - 1 for t in prog.t_bottom), tuple(t + 1 for t in prog.t_top)


def state_space(prog: PVProgram, lo=None, hi=None) -> EuclideanComplex:
    """Cubes on which every resource stays within capacity.

    The program potential is a sum of one-variable step functions, so its
    maximum over a cube is the sum of per-coordinate maxima.
    """
    if any(p.progression is None for p in prog.processes):
        raise ValueError("state space needs progressions on every process")
    if any(len(p) == 0 for p in prog.processes):
        raise ValueError("state space undefined for empty processes")
    dlo, dhi = default_window(prog)
    lo = dlo if lo is None else _vec(lo)
    hi = dhi if hi is None else _vec(hi)
    if len(lo) != prog.n or len(hi) != prog.n:
        raise ValueError("window dimension differs from number of processes")
    if any(a > b for a, b in zip(lo, dlo)) or any(a < b for a, b in zip(hi, dhi)):
        raise ValueError(f"window must contain [{dlo}, {dhi}]")
    K = EuclideanComplex.full(lo, hi)
    ok = K.cells
    for r in prog.resources.names:
        users = [j for j, p in enumerate(prog.processes) if r in p.resources()]
        if not users:
            continue
        total = np.zeros((1,) * prog.n, dtype=np.int64)
        for j in users:
            tab = _potential_table(prog.processes[j], r, lo[j], hi[j])
            shape = [1] * prog.n
            shape[j] = tab.size
            total = total + tab.reshape(shape)
        ok &= total <= prog.resources.capacity[r]
    return K


def compile_program(h: HoleSet, names: Sequence[str] | None = None) -> PVProgram:
    """A program with one resource of capacity n-1 per hole whose state space
    is the complement of the holes.

    Process ``j`` runs through the times ``a_j .. b_j`` spanned by the holes;
    at time ``i`` it acquires every hole starting at ``i`` in coordinate ``j``
    and releases every hole ending there.
    """
    n = h.n
    if n < 2:
        raise ValueError("need n >= 2 (capacity n-1 must be positive)")
    if names is None:
        names = [f"r{i}" for i in range(len(h.holes))]
    names = list(names)
    if len(names) != len(h.holes):
        raise ValueError("one name per hole")
    res = ResourceSet.uniform(names, n - 1)
    if not h.holes:
        return PVProgram(res, tuple(PVProcess((PVOperation(),), (0,)) for _ in range(n)))
    a, b = h.bbox()
    procs = []
    for j in range(n):
        ops = []
        for i in range(a[j], b[j] + 1):
            acq = [nm for nm, (k, _) in zip(names, h.holes) if k[j] == i]
            rel = [nm for nm, (_, l) in zip(names, h.holes) if l[j] == i]
            ops.append(PVOperation.make(acq, rel))
        procs.append(PVProcess(tuple(ops), tuple(range(a[j], b[j] + 1))))
    return PVProgram(res, tuple(procs))


# -- cones and the K_L construction ------------------------------------------


def full_box(lo, hi) -> EuclideanComplex:
    return EuclideanComplex.full(lo, hi)


def shell(lo, hi) -> EuclideanComplex:
    """Cubes of ``[lo, hi]`` with some coordinate pinned to a window face."""
    K = EuclideanComplex.empty(lo, hi)
    for ax in range(K.n):
        for end in (0, -1):
            sl = [slice(None)] * K.n
            sl[ax] = end
            K.cells[tuple(sl)] = True
    return K


def boundary_box(n: int) -> EuclideanComplex:
    if n < 2:
        raise ValueError("need n >= 2")
    return shell((0,) * n, (2,) * n)


def _bits(j: int, n: int) -> Vec:
    return tuple((j >> i) & 1 for i in range(n))


def cone(apex, M: SimplicialComplex, direction: str = "future", lo=None, hi=None) -> EuclideanComplex:
    """Union of ``[apex, apex + j]`` (future) or ``[apex - j, apex]`` (past)
    over the simplices ``j`` of ``M``, together with the apex."""
    apex = _vec(apex)
    n = len(apex)
    if M.n != n:
        raise ValueError("apex dimension differs from vertex count")
    sign = {"future": 1, "past": -1}[direction]
    if lo is None:
        lo = apex if sign > 0 else tuple(x - 1 for x in apex)
        hi = tuple(x + 1 for x in apex) if sign > 0 else apex
    K = EuclideanComplex.empty(lo, hi)
    K.cells[K._index([2 * x for x in apex], strict=True)] = True
    for s in M.simplices:
        j = _bits(s, n)
        K.cells[K._index([2 * x + sign * y for x, y in zip(apex, j)], strict=True)] = True
    K.cells = close_faces(K.cells)
    return K


def build_CL(L: SimplicialComplex, lo=None, hi=None) -> EuclideanComplex:
    n = L.n
    if n < 2:
        raise ValueError("need n >= 2")
    lo = (0,) * n if lo is None else lo
    hi = (1,) * n if hi is None else hi
    return cone((0,) * n, boundary_simplex(n), "future", lo, hi) | cone((1,) * n, L, "past", lo, hi)


def ul_holes(L: SimplicialComplex, nonfaces: Sequence[Iterable[int]] | None = None):
    """The open boxes whose complement is ``K_L``, with resource names.

    Guard boxes ``(c^{i,j}, d^{i,j})`` cut away everything of ``(0, 2)`` that
    is neither below nor above the diagonal point ``1``; one box
    ``(0, k^r)`` per non-face ``A_r`` carves ``L``'s missing simplices out of
    the lower cube.
    """
    n = L.n
    if nonfaces is None:
        nonfaces = L.minimal_nonfaces()
    nonfaces = [tuple(sorted(a)) for a in nonfaces]
    holes, names = [], []
    for r, A in enumerate(nonfaces, start=1):
        if not A:
            raise ValueError("non-faces must be nonempty")
        holes.append(((0,) * n, tuple(1 if m in A else 2 for m in range(1, n + 1))))
        names.append(f"A{r}")
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            c = tuple(1 if m == i else 0 for m in range(1, n + 1))
            d = tuple(1 if m == j else 2 for m in range(1, n + 1))
            holes.append((c, d))
            names.append(f"g{i}_{j}")
    return HoleSet(n, tuple(holes)), names


def build_KL(L: SimplicialComplex, nonfaces=None) -> tuple[EuclideanComplex, HoleSet]:
    """``C_L`` plus the upper cube ``[1, 2]`` plus the shell of ``[0, 2]``,
    checked cube by cube against the complement of the hole description."""
    n = L.n
    if n < 2:
        raise ValueError("need n >= 2")
    lo, hi = (0,) * n, (2,) * n
    direct = build_CL(L, lo, hi) | full_box((1,) * n, hi).rebox(lo, hi) | shell(lo, hi)
    U, _ = ul_holes(L, nonfaces)
    via_holes = from_holes(U, lo, hi)
    if direct != via_holes:
        raise ValueError("non-face description does not match the complex")
    return direct, U


def build_QL(L: SimplicialComplex, nonfaces=None) -> PVProgram:
    U, names = ul_holes(L, nonfaces)
    build_KL(L, nonfaces)  # consistency check
    return compile_program(U, names)
