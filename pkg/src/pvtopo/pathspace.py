"""Models of directed path spaces of Euclidean complexes.

``nerve_model`` walks the grid vertices of ``[a, b]`` in order of coordinate
sum.  The space of dipaths from ``a`` to a vertex ``v`` is a homotopy colimit
over the simplices ``j`` of the past link at ``v`` of the path spaces ending
at ``v - j``.  Dropping the ``j`` whose path space is empty leaves the
*effective* past link; when every remaining piece is contractible the colimit
is the realisation of that link.  Anything else is reported as ``Unknown``.

``model`` retries an ``Unknown`` by cutting along a level hyperplane
``|x| = l``.  A dipath meets the hyperplane in exactly one point, so the path
space splits over the connected components of the section.  A component that
is a single grid vertex ``w`` pins every path through ``w`` and gives a product
of two smaller problems; any other component ``C`` is handled on the
subcomplex obtained by deleting every cube whose section lies in another
component.

When both fail, small instances go to ``avoidance_model``.  Write the complex
as the window minus open boxes ``(k, l)``.  A dipath misses such a box exactly
when, for some axis ``j``, it never enters the region ``x_j < l_j`` and
``x_i > k_i`` for all ``i != j``: the box stretched down along ``j`` and up
along every other axis.
Choosing a nonempty set of axes per box and deleting the stretched boxes
leaves a space whose dipaths are contractible or absent; the feasible choices
form a poset and its nerve models the whole path space.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Iterable, Sequence

import numpy as np

from .cubical import EuclideanComplex, Vec, _hole_mask, holes_of
from .simplicial import HomologyProfile, SimplicialComplex, homology, is_cone, shrink


# -- models -----------------------------------------------------------------


class PathSpaceModel:
    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Empty(PathSpaceModel):
    def to_json(self):
        return {"type": "Empty"}

    def __str__(self):
        return "∅"


@dataclass(frozen=True)
class Contractible(PathSpaceModel):
    def to_json(self):
        return {"type": "Contractible"}

    def __str__(self):
        return "*"


@dataclass(frozen=True)
class Complex(PathSpaceModel):
    L: SimplicialComplex

    def to_json(self):
        return {"type": "Complex", "n": self.L.n, "facets": self.L.facet_lists()}

    def __str__(self):
        return f"|L(n={self.L.n}, facets={self.L.facet_lists()})|"


@dataclass(frozen=True)
class Product(PathSpaceModel):
    factors: tuple[PathSpaceModel, ...]

    def to_json(self):
        return {"type": "Product", "factors": [f.to_json() for f in self.factors]}

    def __str__(self):
        return " × ".join(map(str, self.factors))


@dataclass(frozen=True)
class DisjointUnion(PathSpaceModel):
    parts: tuple[PathSpaceModel, ...]

    def to_json(self):
        return {"type": "DisjointUnion", "parts": [p.to_json() for p in self.parts]}

    def __str__(self):
        return "(" + " ⊔ ".join(map(str, self.parts)) + ")"


@dataclass(frozen=True)
class Unknown(PathSpaceModel):
    reason: str
    vertex: Vec | None = None

    def to_json(self):
        return {"type": "Unknown", "reason": self.reason, "vertex": list(self.vertex or ())}

    def __str__(self):
        return f"Unknown({self.reason})"


def complex_model(L: SimplicialComplex) -> PathSpaceModel:
    if not L.simplices:
        return Empty()
    if is_cone(L) is not None:
        return Contractible()
    return Complex(L)


def product(*factors: PathSpaceModel) -> PathSpaceModel:
    flat: list[PathSpaceModel] = []
    for f in factors:
        flat.extend(f.factors if isinstance(f, Product) else [f])
    if any(isinstance(f, Empty) for f in flat):
        return Empty()
    for f in flat:
        if isinstance(f, Unknown):
            return f
    flat = [f for f in flat if not isinstance(f, Contractible)]
    for i, f in enumerate(flat):
        if isinstance(f, DisjointUnion):
            # products distribute over disjoint unions
            rest = flat[:i] + flat[i + 1 :]
            return disjoint_union(*(product(p, *rest) for p in f.parts))
    if not flat:
        return Contractible()
    if len(flat) == 1:
        return flat[0]
    return Product(tuple(flat))


def disjoint_union(*parts: PathSpaceModel) -> PathSpaceModel:
    flat: list[PathSpaceModel] = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, DisjointUnion) else [p])
    flat = [p for p in flat if not isinstance(p, Empty)]
    if not flat:
        return Empty()
    if len(flat) == 1:
        return flat[0]
    return DisjointUnion(tuple(flat))


def contains_unknown(m: PathSpaceModel) -> bool:
    if isinstance(m, Unknown):
        return True
    if isinstance(m, Product):
        return any(map(contains_unknown, m.factors))
    if isinstance(m, DisjointUnion):
        return any(map(contains_unknown, m.parts))
    return False


def homology_of_model(m: PathSpaceModel) -> HomologyProfile | None:
    """Unreduced homology, or ``None`` when the model does not determine it."""
    if isinstance(m, Empty):
        return HomologyProfile.zero()
    if isinstance(m, Contractible):
        return HomologyProfile.point()
    if isinstance(m, Complex):
        return homology(m.L)
    if isinstance(m, DisjointUnion):
        total = HomologyProfile.zero()
        for p in m.parts:
            h = homology_of_model(p)
            if h is None:
                return None
            total = total + h
        return total
    if isinstance(m, Product):
        nontrivial = [f for f in m.factors if not isinstance(f, Contractible)]
        if len(nontrivial) == 1:
            return homology_of_model(nontrivial[0])
        return None
    return None


# -- grid helpers -----------------------------------------------------------


def _bits(j: int, n: int) -> Vec:
    return tuple((j >> i) & 1 for i in range(n))


def _grid(a: Vec, b: Vec) -> list[Vec]:
    pts = list(iproduct(*[range(x, y + 1) for x, y in zip(a, b)]))
    pts.sort(key=lambda v: (sum(v), v))
    return pts


def _crop(K: EuclideanComplex, a, b) -> EuclideanComplex:
    a, b = tuple(a), tuple(b)
    if any(x > y for x, y in zip(a, b)):
        raise ValueError(f"need a <= b, got {a} and {b}")
    if not K.has_vertex(a) or not K.has_vertex(b):
        raise ValueError("endpoints must be vertices of the complex")
    if K.box == (a, b):
        return K
    return K.rebox(a, b)


def _edge(K: EuclideanComplex, v: Vec, i: int, sign: int = 1) -> bool:
    m = [2 * x for x in v]
    m[i] += sign
    return K.has_doubled(m)


def forward_reachable(K: EuclideanComplex, a: Vec) -> set[Vec]:
    """Vertices reachable from ``a`` along increasing edges of ``K``."""
    a = tuple(a)
    seen = {a}
    for v in _grid(a, K.hi):
        if v in seen or not K.has_vertex(v):
            continue
        for i in range(K.n):
            if v[i] > a[i]:
                w = v[:i] + (v[i] - 1,) + v[i + 1 :]
                if w in seen and _edge(K, v, i, -1):
                    seen.add(v)
                    break
    return seen


def backward_reachable(K: EuclideanComplex, b: Vec) -> set[Vec]:
    b = tuple(b)
    seen = {b}
    for v in reversed(_grid(K.lo, b)):
        if v in seen or not K.has_vertex(v):
            continue
        for i in range(K.n):
            if v[i] < b[i]:
                w = v[:i] + (v[i] + 1,) + v[i + 1 :]
                if w in seen and _edge(K, v, i, 1):
                    seen.add(v)
                    break
    return seen


# -- past links and the nerve recursion ----------------------------------------


def past_link(K: EuclideanComplex, k: Sequence[int]) -> SimplicialComplex:
    k = tuple(k)
    if not K.has_vertex(k):
        raise ValueError(f"{k} is not a vertex of the complex")
    n = K.n
    simplices = set()
    for j in range(1, 1 << n):
        bits = _bits(j, n)
        if K.has_doubled([2 * x - y for x, y in zip(k, bits)]):
            simplices.add(j)
    return SimplicialComplex(n, frozenset(simplices))


def nerve_model(K: EuclideanComplex, a: Sequence[int], b: Sequence[int]) -> PathSpaceModel:
    a, b = tuple(a), tuple(b)
    Kab = _crop(K, a, b)
    n = K.n
    dirs = [(j, _bits(j, n)) for j in range(1, 1 << n)]
    models: dict[Vec, PathSpaceModel] = {a: Contractible()}
    for v in _grid(a, b):
        if v == a or not Kab.has_vertex(v):
            continue
        link = set()
        blocker = None
        for j, bits in dirs:
            w = tuple(x - y for x, y in zip(v, bits))
            if any(x < y for x, y in zip(w, a)):
                continue
            if not Kab.has_doubled([2 * x - y for x, y in zip(v, bits)]):
                continue
            mw = models[w]
            if isinstance(mw, Empty):
                continue
            link.add(j)
            if blocker is None and not isinstance(mw, Contractible):
                blocker = (w, mw)
        if blocker is not None:
            w, mw = blocker
            if isinstance(mw, Unknown):
                models[v] = mw
            else:
                models[v] = Unknown(f"predecessor {w} of {v} has non-contractible model {mw}", v)
            continue
        L = SimplicialComplex(n, frozenset(link))
        assert L.is_downward_closed(), "effective past link not downward closed"
        models[v] = complex_model(L)
    return models[b]


# -- level sections -----------------------------------------------------------


class UnionFind:
    def __init__(self, items: Iterable):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx

    def groups(self) -> list[list]:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return sorted((sorted(g) for g in out.values()), key=lambda g: g[0])


@dataclass(frozen=True)
class SectionComponent:
    vertices: tuple[Vec, ...]
    cells: frozenset[Vec]  # doubled centres of positive-dimensional crossing cubes

    @property
    def singleton(self) -> bool:
        return len(self.vertices) == 1


@dataclass(frozen=True)
class LevelSection:
    level: int
    components: tuple[SectionComponent, ...]
    owner: dict  # doubled centre of every cube meeting the level -> component index

    def component_of(self, v: Vec) -> int:
        return self.owner[tuple(2 * x for x in v)]


def _cells_meeting(K: EuclideanComplex, level: int) -> list[tuple[Vec, Vec, Vec]]:
    """(doubled centre, lo, hi) of every cube meeting the hyperplane."""
    idx = np.argwhere(K.cells)
    if idx.size == 0:
        return []
    m = idx + 2 * np.asarray(K.lo)
    lo = m // 2
    hi = -((-m) // 2)
    slo = lo.sum(axis=1)
    shi = hi.sum(axis=1)
    keep = (slo <= level) & (level <= shi)
    return [
        (tuple(int(x) for x in mm), tuple(int(x) for x in l), tuple(int(x) for x in h))
        for mm, l, h in zip(m[keep], lo[keep], hi[keep])
    ]


def level_split(K: EuclideanComplex, a: Sequence[int], b: Sequence[int], level: int) -> LevelSection:
    a, b = tuple(a), tuple(b)
    if not sum(a) < level < sum(b):
        raise ValueError(f"level {level} not strictly between {sum(a)} and {sum(b)}")
    Kab = _crop(K, a, b)
    n = K.n
    meeting = _cells_meeting(Kab, level)
    verts = [lo for m, lo, hi in meeting if lo == hi]
    uf = UnionFind(verts)
    vset = set(verts)
    for v in verts:
        for i in range(n):
            if v[i] <= a[i]:
                continue
            for k in range(n):
                if k == i or v[k] >= b[k]:
                    continue
                sq = [2 * x for x in v]
                sq[i] -= 1
                sq[k] += 1
                if Kab.has_doubled(sq):
                    w = v[:i] + (v[i] - 1,) + v[i + 1 :]
                    w = w[:k] + (w[k] + 1,) + w[k + 1 :]
                    if w in vset:
                        uf.union(v, w)
    groups = uf.groups()
    comp_of = {v: ci for ci, g in enumerate(groups) for v in g}
    owner: dict[Vec, int] = {}
    cells: list[set] = [set() for _ in groups]
    for m, lo, hi in meeting:
        # walk up from lo along the cube's free directions to the level
        v = list(lo)
        need = level - sum(lo)
        for i in range(n):
            if need and hi[i] > lo[i]:
                v[i] += 1
                need -= 1
        ci = comp_of[tuple(v)]
        owner[m] = ci
        if lo != hi:
            cells[ci].add(m)
    comps = tuple(SectionComponent(tuple(g), frozenset(c)) for g, c in zip(groups, cells))
    return LevelSection(level, comps, owner)


def component_complex(
    K: EuclideanComplex, a: Sequence[int], b: Sequence[int], section: LevelSection, index: int
) -> EuclideanComplex:
    """``K`` on ``[a, b]`` without the cubes whose section belongs elsewhere.

    A dipath crossing the level inside component ``index`` only ever passes
    through cubes whose section is empty or lies in that component, so the
    result carries exactly those paths.
    """
    Kab = _crop(K, a, b)
    out = EuclideanComplex(Kab.lo, Kab.hi, Kab.cells.copy())
    for m, ci in section.owner.items():
        if ci != index:
            out.cells[out._index(m)] = False
    if not out.is_face_closed():
        raise AssertionError("component complex is not face closed")
    return out


def _section_sound(KC: EuclideanComplex, section: LevelSection, index: int) -> bool:
    return all(section.owner.get(m) == index for m, _, _ in _cells_meeting(KC, section.level))


def model(
    K: EuclideanComplex,
    a: Sequence[int],
    b: Sequence[int],
    max_depth: int = 6,
    _depth: int = 0,
    _cache: dict | None = None,
) -> PathSpaceModel:
    """Homotopy model of the dipaths from ``a`` to ``b`` in ``K``."""
    a, b = tuple(a), tuple(b)
    Kab = _crop(K, a, b)
    cache = {} if _cache is None else _cache
    key = (Kab.box, Kab.cells.tobytes())
    if key in cache:
        return cache[key]
    result = nerve_model(Kab, a, b)
    if isinstance(result, Unknown) and _depth < max_depth:
        result = _split_model(Kab, a, b, result, max_depth, _depth, cache)
    if contains_unknown(result):
        fallback = avoidance_model(Kab, a, b)
        if fallback is not None:
            result = fallback
    cache[key] = result
    return result


def _split_model(Kab, a, b, first_failure, max_depth, depth, cache) -> PathSpaceModel:
    live = forward_reachable(Kab, a) & backward_reachable(Kab, b)
    plans = []
    for level in range(sum(a) + 1, sum(b)):
        sec = level_split(Kab, a, b, level)
        relevant = [i for i, C in enumerate(sec.components) if any(v in live for v in C.vertices)]
        singles = sum(sec.components[i].singleton for i in relevant)
        if len(relevant) <= 1 and singles == 0:
            continue
        plans.append((-singles, level, sec, relevant))
    plans.sort(key=lambda p: (p[0], p[1]))
    failure = first_failure
    for _, level, sec, relevant in plans:
        pieces = []
        for i in relevant:
            C = sec.components[i]
            if C.singleton:
                w = C.vertices[0]
                piece = product(
                    model(Kab, a, w, max_depth, depth + 1, cache),
                    model(Kab, w, b, max_depth, depth + 1, cache),
                )
            else:
                KC = component_complex(Kab, a, b, sec, i)
                if not _section_sound(KC, sec, i):
                    piece = Unknown(f"unsound component split at level {level}", C.vertices[0])
                else:
                    piece = model(KC, a, b, max_depth, depth + 1, cache)
            if contains_unknown(piece):
                failure = piece if isinstance(piece, Unknown) else failure
                break
            pieces.append(piece)
        else:
            return disjoint_union(*pieces)
    return failure


# -- avoidance patterns --------------------------------------------------------


def _reaches(cells_ok: np.ndarray, K: EuclideanComplex, a: Vec, b: Vec) -> bool:
    """Is ``b`` reachable from ``a`` along edges whose cells are all kept?"""
    n = K.n
    sub = cells_ok[tuple(slice(2 * (x - l), 2 * (y - l) + 1) for x, y, l in zip(a, b, K.lo))]
    even = slice(None, None, 2)
    verts = sub[(even,) * n]
    edges = [sub[tuple(slice(1, None, 2) if k == i else even for k in range(n))] for i in range(n)]
    seen = np.zeros_like(verts)
    seen[(0,) * n] = verts[(0,) * n]
    for _ in range(sum(y - x for x, y in zip(a, b))):
        new = seen.copy()
        for i in range(n):
            head = tuple(slice(1, None) if k == i else slice(None) for k in range(n))
            tail = tuple(slice(None, -1) if k == i else slice(None) for k in range(n))
            new[head] |= seen[tail] & edges[i]
        if np.array_equal(new, seen):
            break
        seen = new
    return bool(seen[(-1,) * n])


def avoidance_model(
    K: EuclideanComplex, a: Sequence[int], b: Sequence[int], limit: int = 50_000
) -> PathSpaceModel | None:
    """Exact model from avoidance patterns; ``None`` when the search is too big.

    ``limit`` bounds both the patterns visited and the simplices of the nerve.
    """
    a, b = tuple(a), tuple(b)
    Kab = _crop(K, a, b)
    n = K.n
    if not _reaches(Kab.cells, Kab, a, b):
        return Empty()
    holes = holes_of(Kab, overhang=True).holes
    # Per box: axes whose stretch removes nothing new are always taken, axes
    # whose stretch alone blocks every path never are.  Maximal patterns, and
    # hence the nerve below, do not change.
    stretched = []
    rows = []
    for k, l in holes:
        gone_by_axis = []
        free = useful = 0
        for j in range(n):
            kj = k[:j] + (Kab.lo[j] - 1,) + k[j + 1 :]
            lj = tuple(x + 1 for x in Kab.hi[:j]) + (l[j],) + tuple(x + 1 for x in Kab.hi[j + 1 :])
            gone = np.zeros_like(Kab.cells)
            sl = _hole_mask(Kab, kj, lj)
            if sl is not None:
                gone[sl] = True
            gone &= Kab.cells
            gone_by_axis.append(gone)
            if not gone.any():
                free |= 1 << j
            elif _reaches(Kab.cells & ~gone, Kab, a, b):
                useful |= 1 << j
        choices = [free | s for s in range(useful + 1) if s & useful == s and (free | s)]
        stretched.append(gone_by_axis)
        rows.append(choices)
    feasible: list[tuple[int, ...]] = []
    visited = 0

    def extend(i, cells, chosen):
        nonlocal visited
        visited += 1
        if visited > limit:
            raise OverflowError
        if i == len(holes):
            feasible.append(tuple(chosen))
            return
        for s in rows[i]:
            keep = cells.copy()
            for j in range(n):
                if s >> j & 1:
                    keep &= ~stretched[i][j]
            if _reaches(keep, Kab, a, b):
                extend(i + 1, keep, chosen + [s])

    try:
        extend(0, Kab.cells, [])
    except OverflowError:
        return None
    fs = set(feasible)

    # feasibility is closed downwards, so one extra axis is enough to test
    maximal = [
        x
        for x in feasible
        if not any(
            x[:i] + (x[i] | 1 << j,) + x[i + 1 :] in fs
            for i in range(len(x))
            for j in range(n)
            if not x[i] >> j & 1
        )
    ]
    maximal.sort()
    if len(maximal) > 60:
        return None
    # simplices: sets of maximal patterns whose rowwise meet stays nonzero
    simplices: set[int] = set()

    def grow(start, sigma, meet):
        for t in range(start, len(maximal)):
            m = tuple(p & q for p, q in zip(meet, maximal[t]))
            if all(m):
                s2 = sigma | (1 << t)
                simplices.add(s2)
                if len(simplices) > limit:
                    raise OverflowError
                grow(t + 1, s2, m)

    try:
        grow(0, 0, tuple((1 << n) - 1 for _ in holes))
    except OverflowError:
        return None
    return complex_model(shrink(SimplicialComplex(len(maximal), frozenset(simplices))))


# -- discrete checks ------------------------------------------------------------


def count_paths(K: EuclideanComplex, a: Sequence[int], b: Sequence[int]) -> int:
    """Number of increasing edge paths from ``a`` to ``b`` in ``K``."""
    a, b = tuple(a), tuple(b)
    Kab = _crop(K, a, b)
    count: dict[Vec, int] = {}
    for v in _grid(a, b):
        if not Kab.has_vertex(v):
            continue
        if v == a:
            count[v] = 1
            continue
        total = 0
        for i in range(K.n):
            if v[i] > a[i] and _edge(Kab, v, i, -1):
                total += count.get(v[:i] + (v[i] - 1,) + v[i + 1 :], 0)
        count[v] = total
    return count.get(b, 0)


class OracleCapExceeded(ValueError):
    pass


def flip_oracle(
    K: EuclideanComplex, a: Sequence[int], b: Sequence[int], cap: int = 10**6
) -> tuple[int, list[tuple[int, ...]]]:
    """Classes of increasing edge paths under square flips.

    Paths are sequences of axis indices.  Two paths are adjacent when they
    differ by swapping consecutive steps ``i, j`` across a square of ``K``.
    Returns the number of classes and the smallest path of each class.
    """
    a, b = tuple(a), tuple(b)
    Kab = _crop(K, a, b)
    total = count_paths(Kab, a, b)
    if total > cap:
        raise OracleCapExceeded(f"{total} paths exceed cap {cap}")
    n = K.n
    paths: list[tuple[int, ...]] = []
    stack = [(a, ())]
    while stack:
        v, acc = stack.pop()
        if v == b:
            paths.append(acc)
            continue
        for i in range(n - 1, -1, -1):
            if v[i] < b[i] and _edge(Kab, v, i, 1):
                stack.append((v[:i] + (v[i] + 1,) + v[i + 1 :], acc + (i,)))
    index = {p: k for k, p in enumerate(paths)}
    uf = UnionFind(range(len(paths)))
    for k, p in enumerate(paths):
        v = list(a)
        for pos in range(len(p) - 1):
            i, j = p[pos], p[pos + 1]
            if i != j:
                sq = [2 * x for x in v]
                sq[i] += 1
                sq[j] += 1
                if Kab.has_doubled(sq):
                    q = p[:pos] + (j, i) + p[pos + 2 :]
                    uf.union(k, index[q])
            v[i] += 1
    reps = [min(paths[k] for k in g) for g in uf.groups()]
    return len(reps), sorted(reps)


def deadlocks(K: EuclideanComplex, a: Sequence[int], b: Sequence[int]) -> list[Vec]:
    """Reachable vertices other than ``b`` with no way forward inside ``[a, b]``."""
    a, b = tuple(a), tuple(b)
    Kab = _crop(K, a, b)
    out = []
    for v in sorted(forward_reachable(Kab, a)):
        if v == b:
            continue
        if not any(v[i] < b[i] and _edge(Kab, v, i, 1) for i in range(K.n)):
            out.append(v)
    return out
