"""Finite simplicial complexes on vertices ``1..n`` and their integer homology.

Simplices are bit masks: vertex ``m`` is bit ``m - 1``.  A complex stores its
full, downward-closed set of nonempty simplices.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence


def mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        if v < 1:
            raise ValueError(f"vertices are numbered from 1, got {v}")
        m |= 1 << (v - 1)
    return m


def members(m: int) -> tuple[int, ...]:
    out = []
    v = 1
    while m:
        if m & 1:
            out.append(v)
        m >>= 1
        v += 1
    return tuple(out)


def submasks(m: int):
    """Nonempty submasks of ``m``."""
    s = m
    while s:
        yield s
        s = (s - 1) & m


@dataclass(frozen=True)
class SimplicialComplex:
    n: int
    simplices: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "simplices", frozenset(self.simplices))
        full = (1 << self.n) - 1
        for s in self.simplices:
            if s <= 0 or s & ~full:
                raise ValueError(f"simplex {members(s)} not a nonempty subset of 1..{self.n}")

    # constructors -----------------------------------------------------
    @classmethod
    def from_facets(cls, n: int, facets: Iterable[Iterable[int]]) -> "SimplicialComplex":
        out: set[int] = set()
        for f in facets:
            fm = f if isinstance(f, int) else mask(f)
            if fm in out:
                continue
            out.update(submasks(fm))
        return cls(n, frozenset(out))

    @classmethod
    def full_simplex(cls, n: int) -> "SimplicialComplex":
        return cls.from_facets(n, [(1 << n) - 1])

    @classmethod
    def empty(cls, n: int) -> "SimplicialComplex":
        return cls(n, frozenset())

    # queries ------------------------------------------------------------
    def __contains__(self, s) -> bool:
        return (s if isinstance(s, int) else mask(s)) in self.simplices

    def __len__(self):
        return len(self.simplices)

    @property
    def dim(self) -> int:
        return max((s.bit_count() for s in self.simplices), default=0) - 1

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(v for v in range(1, self.n + 1) if (1 << (v - 1)) in self.simplices)

    @cached_property
    def facets(self) -> tuple[int, ...]:
        fs = [
            s
            for s in self.simplices
            if not any((s | (1 << i)) in self.simplices for i in range(self.n) if not s >> i & 1)
        ]
        return tuple(sorted(fs, key=lambda s: (s.bit_count(), members(s))))

    def facet_lists(self) -> list[list[int]]:
        return [list(members(f)) for f in self.facets]

    def by_dim(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.dim + 1)]
        for s in self.simplices:
            out[s.bit_count() - 1].append(s)
        for layer in out:
            layer.sort(key=members)
        return out

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self.by_dim())

    def is_downward_closed(self) -> bool:
        return all(
            (s & ~(1 << i)) == 0 or (s & ~(1 << i)) in self.simplices
            for s in self.simplices
            for i in range(self.n)
            if s >> i & 1
        )

    def minimal_nonfaces(self) -> list[tuple[int, ...]]:
        """Inclusion-minimal vertex sets that are not simplices."""
        cands = {1 << i for i in range(self.n)}
        for s in self.simplices:
            for i in range(self.n):
                if not s >> i & 1:
                    cands.add(s | (1 << i))
        out = []
        for c in cands:
            if c in self.simplices:
                continue
            if all((c & ~(1 << i)) == 0 or (c & ~(1 << i)) in self.simplices for i in range(self.n) if c >> i & 1):
                out.append(c)
        return sorted((members(c) for c in out), key=lambda t: (len(t), t))

    def __str__(self):
        return f"SimplicialComplex(n={self.n}, facets={self.facet_lists()})"


def from_minimal_nonfaces(n: int, nonfaces: Sequence[Iterable[int]]) -> SimplicialComplex:
    """Complex whose simplices are the vertex sets containing no listed set."""
    ms = []
    for a in nonfaces:
        am = mask(a)
        if am == 0:
            raise ValueError("non-faces must be nonempty")
        if am >> n:
            raise ValueError(f"non-face {sorted(a)} uses vertices beyond {n}")
        if am.bit_count() == 1:
            warnings.warn(f"singleton non-face {members(am)} removes a vertex", stacklevel=2)
        ms.append(am)
    out: set[int] = set()

    # faces grow by adding vertices in increasing order; a forbidden superset
    # can never become allowed again, so the search prunes exactly
    def grow(s: int, start: int):
        for v in range(start, n):
            t = s | (1 << v)
            if any(a & t == a for a in ms):
                continue
            out.add(t)
            grow(t, v + 1)

    grow(0, 0)
    return SimplicialComplex(n, frozenset(out))


def boundary_simplex(n: int) -> SimplicialComplex:
    """All nonempty proper subsets of ``1..n``."""
    if n < 2:
        raise ValueError("boundary of a simplex needs n >= 2")
    full = (1 << n) - 1
    return SimplicialComplex.from_facets(n, [full & ~(1 << i) for i in range(n)])


def is_cone(L: SimplicialComplex) -> int | None:
    """Smallest vertex lying in every facet, if any."""
    if not L.simplices:
        return None
    common = (1 << L.n) - 1
    for f in L.facets:
        common &= f
    if not common:
        return None
    return members(common)[0]


def facet_nerve(L: SimplicialComplex) -> SimplicialComplex:
    """Nerve of the cover by facets; homotopy equivalent to ``L``.

    Vertex ``i`` is the ``i``-th facet in ``L.facets`` order.
    """
    facets = L.facets
    out: set[int] = set()

    def grow(start, sigma, meet):
        for t in range(start, len(facets)):
            m = meet & facets[t]
            if m:
                s = sigma | (1 << t)
                out.add(s)
                grow(t + 1, s, m)

    grow(0, 0, (1 << L.n) - 1)
    return SimplicialComplex(len(facets), frozenset(out))


def shrink(L: SimplicialComplex) -> SimplicialComplex:
    """Pass to facet nerves while that lowers the vertex count."""
    while L.simplices and len(L.facets) < len(L.vertices):
        L = facet_nerve(L)
    return L


def order_complex(L: SimplicialComplex) -> SimplicialComplex:
    """Barycentric subdivision: chains of simplices ordered by inclusion."""
    simplices = sorted(L.simplices, key=lambda s: (s.bit_count(), members(s)))
    index = {s: i for i, s in enumerate(simplices)}
    up: dict[int, list[int]] = {s: [] for s in simplices}
    for s in simplices:
        for i in range(L.n):
            t = s | (1 << i)
            if t != s and t in index:
                up[s].append(t)
    facets = []

    def chains(s, acc):
        if not up[s]:
            facets.append(acc)
            return
        for t in up[s]:
            chains(t, acc | (1 << index[t]))

    for v in simplices:
        if v.bit_count() == 1:
            chains(v, 1 << index[v])
    return SimplicialComplex.from_facets(len(simplices), facets)


# -- homology -------------------------------------------------------------


def boundary_matrix(L: SimplicialComplex, d: int) -> list[list[int]]:
    """Matrix of the boundary map from d-chains to (d-1)-chains.

    Rows index (d-1)-simplices, columns d-simplices, both in label order; the
    face omitting the i-th smallest vertex carries sign (-1)^i.
    """
    layers = L.by_dim()
    if d <= 0 or d >= len(layers):
        return []
    rows = {s: i for i, s in enumerate(layers[d - 1])}
    mat = [[0] * len(layers[d]) for _ in rows]
    for c, s in enumerate(layers[d]):
        vs = members(s)
        for i, v in enumerate(vs):
            mat[rows[s & ~(1 << (v - 1))]][c] = -1 if i % 2 else 1
    return mat


def smith_diagonal(mat: list[list[int]]) -> list[int]:
    """Nonzero invariant factors of an integer matrix, ascending.

    Works on a copy with Python integers; the diagonal is normalised so each
    entry divides the next.
    """
    a = [row[:] for row in mat]
    m = len(a)
    n = len(a[0]) if m else 0
    diag: list[int] = []
    t = 0
    while t < m and t < n:
        # smallest nonzero entry in the remaining block as pivot
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        ri, rt = a[i], a[t]
                        for k in range(t, n):
                            if rt[k]:
                                ri[k] -= q * rt[k]
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for row in a[t:]:
                            if row[t]:
                                row[j] -= q * row[t]
                    if a[t][j]:
                        dirty = True
            if not dirty:
                break
            # move the smallest remaining entry of row/column t into the pivot
            cands = [(abs(a[i][t]), i, t) for i in range(t + 1, m) if a[i][t]]
            cands += [(abs(a[t][j]), t, j) for j in range(t + 1, n) if a[t][j]]
            _, i, j = min(cands)
            if j == t:
                a[t], a[i] = a[i], a[t]
            else:
                for row in a:
                    row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return _invariant_factors(diag)


def _invariant_factors(diag: list[int]) -> list[int]:
    d = sorted(x for x in diag if x)
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                g = gcd(d[i], d[j])
                if g != d[i]:
                    d[i], d[j] = g, d[i] * d[j] // g
                    changed = True
        d.sort()
    return d


@dataclass(frozen=True)
class HomologyProfile:
    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.betti) != len(self.torsion):
            raise ValueError("betti and torsion must cover the same degrees")

    @classmethod
    def point(cls) -> "HomologyProfile":
        return cls((1,), ((),))

    @classmethod
    def zero(cls) -> "HomologyProfile":
        return cls((0,), ((),))

    def degree(self, d: int) -> tuple[int, tuple[int, ...]]:
        if d < len(self.betti):
            return self.betti[d], self.torsion[d]
        return 0, ()

    def trimmed(self) -> "HomologyProfile":
        k = len(self.betti)
        while k > 1 and self.betti[k - 1] == 0 and not self.torsion[k - 1]:
            k -= 1
        return HomologyProfile(self.betti[:k], self.torsion[:k])

    def __add__(self, other: "HomologyProfile") -> "HomologyProfile":
        k = max(len(self.betti), len(other.betti))
        b = []
        t = []
        for d in range(k):
            b1, t1 = self.degree(d)
            b2, t2 = other.degree(d)
            b.append(b1 + b2)
            t.append(tuple(x for x in _invariant_factors(list(t1) + list(t2)) if x > 1))
        return HomologyProfile(tuple(b), tuple(t)).trimmed()

    def euler(self) -> int:
        return sum((-1) ** d * b for d, b in enumerate(self.betti))

    def as_text(self) -> str:
        parts = []
        for d, (b, tor) in enumerate(zip(self.betti, self.torsion)):
            terms = []
            if b:
                terms.append("Z" if b == 1 else f"Z^{b}")
            terms += [f"Z/{q}" for q in tor]
            parts.append(f"H{d} = " + (" + ".join(terms) if terms else "0"))
        return ", ".join(parts)

    def to_json(self) -> dict:
        return {"betti": list(self.betti), "torsion": [list(t) for t in self.torsion]}


def homology(L: SimplicialComplex, reduced: bool = False) -> HomologyProfile:
    """Integer homology of ``L`` via Smith normal form of boundary matrices.

    With ``reduced`` the augmentation is subtracted in degree 0.  The empty
    complex has zero homology in every nonnegative degree either way.
    """
    layers = L.by_dim()
    top = len(layers)
    if top == 0:
        return HomologyProfile.zero()
    ranks = [0] * (top + 1)  # ranks[d] = rank of boundary from degree d
    tors: list[tuple[int, ...]] = [()] * (top + 1)
    for d in range(1, top):
        inv = smith_diagonal(boundary_matrix(L, d))
        ranks[d] = len(inv)
        tors[d - 1] = tuple(x for x in inv if x > 1)
    betti = [len(layers[d]) - ranks[d] - ranks[d + 1] for d in range(top)]
    if reduced:
        betti[0] -= 1
    prof = HomologyProfile(tuple(betti), tuple(tors[:top]))
    chi = sum((-1) ** d * len(layer) for d, layer in enumerate(layers)) - (1 if reduced else 0)
    assert prof.euler() == chi, "Euler characteristic mismatch"
    return prof.trimmed()
