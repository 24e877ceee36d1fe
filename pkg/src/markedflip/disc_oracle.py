"""Brute-force model of polygon triangulations (the type A associahedron).

Triangulations are sets of diagonals ``(i, j)`` with ``i < j``.  Nothing
here depends on the half-edge engine, so results can be compared against it.
"""
from __future__ import annotations

from collections import deque
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

MAX_C = 12


def _norm(d):
    i, j = d
    return (i, j) if i < j else (j, i)


def is_diagonal(c: int, d) -> bool:
    i, j = _norm(d)
    return 0 <= i < j < c and (j - i) not in (1, c - 1)


def crosses(d1, d2) -> bool:
    """True iff the endpoints strictly interleave around the polygon."""
    a, b = _norm(d1)
    x, y = _norm(d2)
    if len({a, b, x, y}) < 4:
        return False
    return (a < x < b) != (a < y < b)


def catalan(m: int) -> int:
    return comb(2 * m, m) // (m + 1)


class PolygonTriangulation(frozenset):
    """Frozen set of diagonals, with the polygon size in ``c``."""

    def __new__(cls, c: int, diagonals):
        obj = super().__new__(cls, (_norm(d) for d in diagonals))
        obj.c = c
        return obj

    def check(self):
        if len(self) != self.c - 3:
            raise ValueError(f"expected {self.c - 3} diagonals, got {len(self)}")
        for d in self:
            if not is_diagonal(self.c, d):
                raise ValueError(f"{d} is not a diagonal")
        for d1, d2 in combinations(self, 2):
            if crosses(d1, d2):
                raise ValueError(f"{d1} and {d2} cross")
        return self

    def edges(self) -> set:
        return set(self) | {_norm((i, (i + 1) % self.c)) for i in range(self.c)}

    def __repr__(self):
        return f"PolygonTriangulation({self.c}, {sorted(self)})"


def enumerate_all(c: int) -> set[PolygonTriangulation]:
    """All triangulations of the c-gon, by splitting off the triangle on side (0, c-1)."""
    if not 4 <= c <= MAX_C:
        raise ValueError(f"c must lie in 4..{MAX_C}")

    @lru_cache(maxsize=None)
    def tri(lo, hi):
        # triangulations of the sub-polygon lo, lo+1, ..., hi as tuples of diagonals
        if hi - lo < 2:
            return [()]
        out = []
        for k in range(lo + 1, hi):
            extra = []
            if k - lo > 1:
                extra.append((lo, k))
            if hi - k > 1:
                extra.append((k, hi))
            for left in tri(lo, k):
                for right in tri(k, hi):
                    out.append(left + right + tuple(extra))
        return out

    result = set()
    for diags in tri(0, c - 1):
        # (0, c-1) is a polygon side, never a diagonal
        result.add(PolygonTriangulation(c, diags))
    return result


def enumerate_brute(c: int) -> set[PolygonTriangulation]:
    """All (c-3)-subsets of pairwise non-crossing diagonals; slow, for small c."""
    diags = [(i, j) for i in range(c) for j in range(i + 2, c) if is_diagonal(c, (i, j))]
    out = set()
    for sub in combinations(diags, c - 3):
        if all(not crosses(a, b) for a, b in combinations(sub, 2)):
            out.add(PolygonTriangulation(c, sub))
    return out


def _apexes(t: PolygonTriangulation, d):
    edges = t.edges()
    i, j = d
    return [k for k in range(t.c) if k not in d and _norm((i, k)) in edges and _norm((k, j)) in edges]


def flip(t: PolygonTriangulation, d) -> PolygonTriangulation:
    d = _norm(d)
    if d not in t:
        raise ValueError(f"{d} is not a diagonal of the triangulation")
    ks = _apexes(t, d)
    if len(ks) != 2:
        raise AssertionError(f"diagonal {d} has {len(ks)} adjacent triangles")
    return PolygonTriangulation(t.c, (t - {d}) | {_norm(ks)})


def neighbors(t: PolygonTriangulation) -> list[PolygonTriangulation]:
    return [flip(t, d) for d in sorted(t)]


def first_crossed(t: PolygonTriangulation, s: int, e: int):
    """The diagonal of ``t`` crossed first when walking the chord from ``s`` to ``e``.

    The chord leaves ``s`` inside the triangle ``(s, i, j)`` whose other
    vertices straddle ``e``; its opposite side is crossed first.
    """
    c = t.c
    edges = t.edges()
    nbrs = sorted(((v - s) % c, v) for v in range(c) if v != s and _norm((s, v)) in edges)
    target = (e - s) % c
    for (ri, i), (rj, j) in zip(nbrs, nbrs[1:]):
        if ri < target < rj:
            return _norm((i, j))
    return None


def stt_project(t: PolygonTriangulation, gamma) -> PolygonTriangulation:
    """Drag every diagonal crossing ``gamma`` onto its start vertex, by ordered flips."""
    s, e = gamma
    if not is_diagonal(t.c, gamma):
        raise ValueError(f"{gamma} is not a diagonal")
    while _norm(gamma) not in t:
        d = first_crossed(t, s, e)
        t = flip(t, d)
    return t


def crossing_count(t: PolygonTriangulation, gamma) -> int:
    return sum(crosses(d, gamma) for d in t)


class FlipGraph:
    """The full flip graph of the c-gon with all-pairs BFS distances."""

    def __init__(self, c: int):
        self.c = c
        self.nodes = sorted(enumerate_all(c), key=sorted)
        self.index = {t: i for i, t in enumerate(self.nodes)}
        self.adj = [[self.index[u] for u in neighbors(t)] for t in self.nodes]
        self._dist = None

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def bfs(self, src: int, allowed=None) -> list[int]:
        dist = [-1] * len(self.nodes)
        dist[src] = 0
        queue = deque([src])
        while queue:
            v = queue.popleft()
            for u in self.adj[v]:
                if dist[u] < 0 and (allowed is None or allowed(u)):
                    dist[u] = dist[v] + 1
                    queue.append(u)
        return dist

    @property
    def dist(self) -> list[list[int]]:
        if self._dist is None:
            self._dist = [self.bfs(i) for i in range(len(self.nodes))]
        return self._dist

    def masks(self) -> np.ndarray:
        diag_index = {}
        out = np.zeros(len(self.nodes), dtype=np.int64)
        for i, t in enumerate(self.nodes):
            for d in t:
                out[i] |= 1 << diag_index.setdefault(d, len(diag_index))
        return out

    def nlf_failures(self, limit: int | None = None) -> list[tuple[int, int, int]]:
        """Pairs ``(v, w, u)`` where interval vertex ``u`` misses a diagonal common to ``v`` and ``w``."""
        D = np.array(self.dist)
        mask = self.masks()
        bad = []
        for v in range(len(self.nodes)):
            common = mask[v] & mask                                  # per w
            interval = D[v][None, :] + D == D[v][:, None]           # [w, u]
            missing = (mask[None, :] & common[:, None]) != common[:, None]
            hits = np.argwhere(interval & missing)
            for w, u in hits:
                if w > v and (not bad or bad[-1][:2] != (v, int(w))):
                    bad.append((v, int(w), int(u)))
                    if limit is not None and len(bad) >= limit:
                        return bad
        return bad
