r"""Triangulations of unpunctured marked surfaces as half-edge maps.

Conventions
-----------
Every arc has an integer id ``k``.  An internal arc owns the two half-edges
``2k`` and ``2k + 1``; a boundary arc owns only ``2k``.  Triangles are triples
of half-edges listed counterclockwise, and half-edge ``h`` in a triangle runs
from the marked point ``tail[h]`` to the tail of the next half-edge.  Twin
half-edges run in opposite directions, so every gluing reverses orientation.

A *corner* of a triangle is named by the half-edge leaving it, i.e. the
corner at the tail of ``h`` inside the triangle of ``h``.

The flip quadrilateral is labelled as follows, with ``a = 2k`` the even
half-edge of the flipped arc::

              R                      T1 = (a, b, c)   a: P->Q
            /   \                    T2 = (a', d, e)  a': Q->P
         c /  T1 \ b                 corners, counterclockwise: P, S, Q, R
          /       \                  sides, counterclockwise:   d, e, b, c
         P --a--> Q
          \       /                  old diagonal P-Q, new diagonal R-S
         d \  T2 / e
            \   /
              S
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence


class SurfaceError(ValueError):
    """Raised for invalid gluings, surfaces, or flip requests."""


@dataclass(frozen=True)
class MarkedSurface:
    genus: int
    boundary_marked_counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(self.boundary_marked_counts)
        object.__setattr__(self, "boundary_marked_counts", counts)
        if self.genus < 0:
            raise SurfaceError("genus must be nonnegative")
        if not counts:
            raise SurfaceError("an unpunctured marked surface needs at least one boundary component")
        if any(m < 1 for m in counts):
            raise SurfaceError("every boundary component needs at least one marked point")
        if self.n < 0:
            raise SurfaceError(f"invalid surface: internal arc count {self.n} < 0")
        if self.n == 0:
            raise SurfaceError("degenerate surface: no internal arcs, the flip graph is a point")

    @property
    def b(self) -> int:
        return len(self.boundary_marked_counts)

    @property
    def c(self) -> int:
        return sum(self.boundary_marked_counts)

    @property
    def n(self) -> int:
        return 6 * self.genus + 3 * self.b + self.c - 6

    def __str__(self):
        return f"S(g={self.genus}, marked={list(self.boundary_marked_counts)})"


def _rotate_min(tri: Sequence[int]) -> tuple[int, int, int]:
    i = min(range(3), key=lambda j: tri[j])
    return (tri[i], tri[(i + 1) % 3], tri[(i + 2) % 3])


class Triangulation:
    """Immutable half-edge triangulation.

    ``triangles`` is a tuple of counterclockwise half-edge triples and ``tail``
    maps every half-edge to the marked point it starts from.  Use
    :func:`new_from_gluing` or a generator to build validated instances.
    """

    __slots__ = ("triangles", "tail", "_tri", "_next", "_prev", "__dict__")

    def __init__(self, triangles: Iterable[Sequence[int]], tail: Mapping[int, int]):
        self.triangles = tuple(_rotate_min(t) for t in triangles)
        self.tail = dict(tail)
        self._tri: dict[int, int] = {}
        self._next: dict[int, int] = {}
        self._prev: dict[int, int] = {}
        for i, (x, y, z) in enumerate(self.triangles):
            for h, nh in ((x, y), (y, z), (z, x)):
                if h in self._tri:
                    raise SurfaceError(f"half-edge {h} used twice")
                self._tri[h] = i
                self._next[h] = nh
                self._prev[nh] = h
        if set(self.tail) != set(self._tri):
            raise SurfaceError("tail map does not match the half-edges")

    # -- local structure -------------------------------------------------
    def halfedges(self) -> list[int]:
        return sorted(self._tri)

    def has_halfedge(self, h: int) -> bool:
        return h in self._tri

    def triangle_of(self, h: int) -> int:
        return self._tri[h]

    def next(self, h: int) -> int:
        return self._next[h]

    def prev(self, h: int) -> int:
        return self._prev[h]

    def twin(self, h: int) -> int | None:
        g = h ^ 1
        return g if g in self._tri else None

    def head(self, h: int) -> int:
        return self.tail[self._next[h]]

    @staticmethod
    def arc(h: int) -> int:
        return h >> 1

    @cached_property
    def internal_arcs(self) -> tuple[int, ...]:
        return tuple(sorted(h >> 1 for h in self._tri if h % 2 == 1 and h - 1 in self._tri))

    @cached_property
    def boundary_arcs(self) -> tuple[int, ...]:
        return tuple(sorted(h >> 1 for h in self._tri if self.twin(h) is None))

    @cached_property
    def arc_ids(self) -> tuple[int, ...]:
        return tuple(sorted({h >> 1 for h in self._tri}))

    @cached_property
    def marked_points(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.tail.values())))

    def is_internal(self, arc: int) -> bool:
        return 2 * arc in self._tri and 2 * arc + 1 in self._tri

    def endpoints(self, arc: int) -> tuple[int, int]:
        """Marked points (tail, head) of the even half-edge of ``arc``."""
        h = 2 * arc
        if h not in self._tri:
            raise SurfaceError(f"unknown arc {arc}")
        return self.tail[h], self.head(h)

    @cached_property
    def surface(self) -> MarkedSurface:
        rep = validate(self)
        if not rep.ok:
            raise SurfaceError("; ".join(rep.reasons))
        return MarkedSurface(rep.genus, rep.boundary_marked_counts)

    @property
    def n(self) -> int:
        return len(self.internal_arcs)

    # -- value semantics -------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Triangulation):
            return NotImplemented
        return self.triangles == other.triangles and self.tail == other.tail

    def __hash__(self):
        return hash((self.triangles, tuple(sorted(self.tail.items()))))

    def __repr__(self):
        return f"Triangulation(triangles={list(self.triangles)}, tail={self.tail})"

    def to_table(self) -> dict:
        """JSON gluing table; labels are ``b<k>`` for boundary and ``e<k>`` for internal arcs."""
        def label(h):
            return f"e{h >> 1}" if self.twin(h) is not None else f"b{h >> 1}"
        return {
            "triangles": [[label(h) for h in tri] for tri in self.triangles],
            "vertices": [[self.tail[h] for h in tri] for tri in self.triangles],
        }


# ---------------------------------------------------------------------------
# validation

@dataclass
class ValidationReport:
    ok: bool
    genus: int | None
    b: int
    c: int
    n: int
    boundary_marked_counts: tuple[int, ...]
    euler_ok: bool
    self_glued: bool
    reasons: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok, "genus": self.genus, "b": self.b, "c": self.c, "n": self.n,
            "boundary_marked_counts": list(self.boundary_marked_counts),
            "euler_ok": self.euler_ok, "self_glued": self.self_glued, "reasons": list(self.reasons),
        }


def _vertex_walks(t: Triangulation):
    """Corners grouped around marked points, starting from each boundary half-edge.

    Rotating from corner ``h`` to ``twin(prev(h))`` sweeps the link of the
    tail of ``h``; a boundary point's link is a path that ends where
    ``prev(h)`` is a boundary side.
    """
    walks = []
    seen = set()
    for h0 in t.halfedges():
        if t.twin(h0) is not None:
            continue
        walk = [h0]
        h = h0
        while True:
            g = t.twin(t.prev(h))
            if g is None or g in walk:
                break
            h = g
            walk.append(h)
        walks.append(walk)
        seen.update(walk)
    return walks, seen


def validate(t: Triangulation) -> ValidationReport:
    reasons = []
    halfedges = t.halfedges()
    internal = t.internal_arcs
    boundary = t.boundary_arcs
    n_tri = len(t.triangles)

    self_glued = any(t.triangle_of(2 * k) == t.triangle_of(2 * k + 1) for k in internal)
    if self_glued:
        reasons.append("self-glued triangle")
    odd_only = [h for h in halfedges if h % 2 == 1 and h - 1 not in t._tri]
    if odd_only:
        reasons.append(f"boundary arcs must use even half-edges: {odd_only}")

    walks, covered = _vertex_walks(t)
    c = len(walks)
    if len(covered) != len(halfedges):
        reasons.append("interior vertex (puncture) or non-manifold vertex")
    for walk in walks:
        pts = {t.tail[h] for h in walk}
        if len(pts) != 1:
            reasons.append(f"inconsistent marked-point labels around a vertex: {sorted(pts)}")
    labels = [t.tail[w[0]] for w in walks]
    if len(set(labels)) != len(labels):
        reasons.append("two boundary vertices share a marked-point label")

    counts = _boundary_cycles(t, walks)
    b = len(counts)

    # connectivity of the dual graph
    if n_tri:
        comp = {0}
        stack = [0]
        while stack:
            i = stack.pop()
            for h in t.triangles[i]:
                g = t.twin(h)
                if g is not None:
                    j = t.triangle_of(g)
                    if j not in comp:
                        comp.add(j)
                        stack.append(j)
        if len(comp) != n_tri:
            reasons.append("disconnected map")
    else:
        reasons.append("empty map")

    chi = c - (len(internal) + len(boundary)) + n_tri
    genus = None
    euler_ok = False
    if (2 - b - chi) % 2 == 0 and 2 - b - chi >= 0:
        genus = (2 - b - chi) // 2
        euler_ok = len(boundary) == c
    if not euler_ok:
        reasons.append(f"Euler characteristic check failed (chi={chi}, b={b}, c={c})")
    n = len(internal)
    if genus is not None and b >= 1 and n != 6 * genus + 3 * b + c - 6:
        reasons.append("internal arc count disagrees with 6g + 3b + c - 6")
    if n <= 0:
        reasons.append("degenerate surface: no internal arcs")
    return ValidationReport(
        ok=not reasons, genus=genus, b=b, c=c, n=n,
        boundary_marked_counts=tuple(sorted(counts)), euler_ok=euler_ok,
        self_glued=self_glued, reasons=reasons,
    )


# ---------------------------------------------------------------------------
# construction from gluing tables

def new_from_gluing(triangle_table: Sequence[Sequence[str]], *, twisted: Iterable[str] = (),
                    vertices: Sequence[Sequence[int]] | None = None,
                    strict: bool = True) -> Triangulation:
    """Build a triangulation from a table of side labels.

    Each row lists the sides of one triangle counterclockwise; a label used
    twice glues two sides, matching the start of one to the end of the other.
    Labels in ``twisted`` are glued start-to-start instead; triangles are
    re-oriented to absorb such gluings, and a gluing with no consistent
    orientation is rejected as non-orientable.

    ``vertices`` optionally names the marked point at the start of each side.
    Without it, marked points are numbered along the boundary in order of the
    first boundary label.
    """
    rows = [list(map(str, row)) for row in triangle_table]
    if any(len(row) != 3 for row in rows):
        raise SurfaceError("every triangle needs exactly three sides")
    twisted = set(map(str, twisted))

    occurrences: dict[str, list[tuple[int, int]]] = {}
    for i, row in enumerate(rows):
        for j, lab in enumerate(row):
            occurrences.setdefault(lab, []).append((i, j))
    for lab, occ in occurrences.items():
        if len(occ) > 2:
            raise SurfaceError(f"label {lab!r} appears {len(occ)} times")
        if len(occ) == 2 and occ[0][0] == occ[1][0] and strict:
            raise SurfaceError(f"self-glued triangle along {lab!r}")
    for lab in twisted:
        if len(occurrences.get(lab, ())) != 2:
            raise SurfaceError(f"twisted label {lab!r} must be glued")

    # orientation: sign[i] = -1 means row i is listed clockwise
    sign = [0] * len(rows)
    for root in range(len(rows)):
        if sign[root]:
            continue
        sign[root] = 1
        stack = [root]
        while stack:
            i = stack.pop()
            for lab in rows[i]:
                occ = occurrences[lab]
                if len(occ) != 2:
                    continue
                for k, _ in occ:
                    if k == i:
                        continue
                    want = -sign[i] if lab in twisted else sign[i]
                    if sign[k] == 0:
                        sign[k] = want
                        stack.append(k)
                    elif sign[k] != want:
                        raise SurfaceError("non-orientable gluing")
        # a twisted self-gluing cannot be absorbed
    for lab in twisted:
        (i, _), (k, _) = occurrences[lab]
        if i == k:
            raise SurfaceError("non-orientable gluing")

    if vertices is not None:
        vertices = [list(v) for v in vertices]
        if len(vertices) != len(rows) or any(len(v) != 3 for v in vertices):
            raise SurfaceError("vertices must give three marked points per triangle")

    # reverse clockwise rows: sides (s0,s1,s2) from v0->v1, v1->v2, v2->v0 become
    # (s2, s1, s0) read from v0: s2 as v0->v2, s1 as v2->v1, s0 as v1->v0
    oriented = []
    oriented_vertices = []
    for i, row in enumerate(rows):
        if sign[i] == 1:
            oriented.append(row)
            if vertices is not None:
                oriented_vertices.append(vertices[i])
        else:
            oriented.append([row[2], row[1], row[0]])
            if vertices is not None:
                v0, v1, v2 = vertices[i]
                oriented_vertices.append([v0, v2, v1])

    glued = [lab for lab, occ in occurrences.items() if len(occ) == 2]
    bound = [lab for lab, occ in occurrences.items() if len(occ) == 1]
    arc_id = {lab: k for k, lab in enumerate(bound + glued)}
    used: dict[str, int] = {}
    tris = []
    for row in oriented:
        tri = []
        for lab in row:
            h = 2 * arc_id[lab] + used.get(lab, 0)
            used[lab] = used.get(lab, 0) + 1
            tri.append(h)
        tris.append(tri)

    if vertices is not None:
        tail = {}
        for tri, vs in zip(tris, oriented_vertices):
            for h, v in zip(tri, vs):
                tail[h] = int(v)
        t = Triangulation(tris, tail)
    else:
        placeholder = Triangulation(tris, {h: -1 for tri in tris for h in tri})
        t = Triangulation(tris, _label_marked_points(placeholder))

    if strict:
        rep = validate(t)
        if not rep.ok:
            raise SurfaceError("; ".join(rep.reasons))
        if vertices is not None:
            for tri in t.triangles:
                for h in tri:
                    g = t.twin(h)
                    if g is not None and (t.tail[g] != t.head(h) or t.head(g) != t.tail[h]):
                        raise SurfaceError("vertex labels disagree with the gluing")
    return t


def _boundary_successor(walks):
    """Map each corner to the boundary half-edge starting its walk."""
    out = {}
    for w in walks:
        for h in w:
            out[h] = w[0]
    return out


def _boundary_cycles(t: Triangulation, walks) -> list[int]:
    # the boundary half-edge after h leaves head(h), i.e. starts the walk through corner next(h)
    out = _boundary_successor(walks)
    counts = []
    visited = set()
    for h0 in sorted(w[0] for w in walks):
        if h0 in visited:
            continue
        h, size = h0, 0
        while h not in visited:
            visited.add(h)
            size += 1
            h = out.get(t.next(h), h0)
        counts.append(size)
    return counts


def _label_marked_points(t: Triangulation) -> dict[int, int]:
    walks, _ = _vertex_walks(t)
    out = _boundary_successor(walks)
    # number points along each boundary cycle, starting from its smallest half-edge
    label = {}
    nxt = 0
    for h0 in sorted(w[0] for w in walks):
        if h0 in label:
            continue
        h = h0
        while h not in label:
            label[h] = nxt
            nxt += 1
            h = out.get(t.next(h), h0)
    tail = {}
    for w in walks:
        for h in w:
            tail[h] = label[w[0]]
    # corners not reached by any walk (punctures) get fresh labels
    for h in t.halfedges():
        if h not in tail:
            tail[h] = nxt
            nxt += 1
    return tail


# ---------------------------------------------------------------------------
# generators

def generator_disc(c: int) -> Triangulation:
    """Fan triangulation of the c-gon at vertex 0, vertices 0..c-1 counterclockwise."""
    if c < 4:
        raise SurfaceError(f"disc needs at least 4 marked points, got {c} (n = {c - 3})")
    return disc_triangulation(c, [(0, j) for j in range(2, c - 1)])


def disc_triangulation(c: int, diagonals: Iterable[tuple[int, int]]) -> Triangulation:
    """Triangulation of the c-gon from a full set of non-crossing diagonals."""
    if c < 4:
        raise SurfaceError(f"disc needs at least 4 marked points, got {c}")
    diags = set()
    for u, v in diagonals:
        u, v = sorted((int(u) % c, int(v) % c))
        if (v - u) % c in (0, 1, c - 1):
            raise SurfaceError(f"({u},{v}) is not a diagonal of the {c}-gon")
        diags.add((u, v))
    if len(diags) != c - 3:
        raise SurfaceError(f"a triangulation of the {c}-gon has {c - 3} diagonals, got {len(diags)}")
    edges = diags | {tuple(sorted((i, (i + 1) % c))) for i in range(c)}

    def label(u, v):
        u, v = sorted((u, v))
        if (u, v) in diags:
            return f"d{u}_{v}"
        return f"b{v}" if u == 0 and v == c - 1 else f"b{u}"

    rows, verts = [], []
    for i in range(c):
        for j in range(i + 1, c):
            if (i, j) not in edges:
                continue
            for k in range(j + 1, c):
                if (j, k) in edges and (i, k) in edges:
                    rows.append([label(i, j), label(j, k), label(k, i)])
                    verts.append([i, j, k])
    if len(rows) != c - 2:
        raise SurfaceError("diagonals do not form a triangulation (crossing diagonals?)")
    return new_from_gluing(rows, vertices=verts)


def generator_annulus(p: int, q: int) -> Triangulation:
    """Zig-zag triangulation of the annulus with p outer and q inner marked points.

    Outer points are 0..p-1, inner points p..p+q-1.  Cutting along the bridge
    from outer 0 to inner 0 leaves a strip; bridges advance alternately along
    the outer and the inner boundary (outer first) until one side is used up,
    then along the other, returning to the first bridge.
    """
    if p < 1 or q < 1:
        raise SurfaceError("every boundary component needs at least one marked point")
    steps = []
    i = j = 0
    while i < p or j < q:
        if i < p and (i <= j or j >= q):
            steps.append("O")
            i += 1
        else:
            steps.append("I")
            j += 1
    rows, verts = [], []
    oi = ij = 0
    total = p + q

    def bridge(s):
        return f"r{s % total}"

    for s, kind in enumerate(steps):
        o, inn = oi % p, p + ij % q
        if kind == "O":
            o2 = (oi + 1) % p
            rows.append([f"o{oi}", bridge(s + 1), bridge(s)])
            verts.append([o, o2, inn])
            oi += 1
        else:
            in2 = p + (ij + 1) % q
            rows.append([bridge(s + 1), f"i{ij}", bridge(s)])
            verts.append([o, in2, inn])
            ij += 1
    return new_from_gluing(rows, vertices=verts)


def generator_torus_one_boundary() -> Triangulation:
    """Torus with one boundary component and one marked point (n = 4)."""
    rows = [["a", "b", "c"], ["a", "b", "d"], ["c", "d", "z"]]
    return new_from_gluing(rows)


# ---------------------------------------------------------------------------
# flips

@dataclass(frozen=True)
class Quad:
    """The quadrilateral around a flipped arc, by half-edges (see module docstring)."""

    flipped_arc: int
    a: int
    a_twin: int
    b: int
    c: int
    d: int
    e: int
    P: int
    Q: int
    R: int
    S: int

    @property
    def sides(self) -> tuple[int, int, int, int]:
        """Sides counterclockwise from P: d, e, b, c."""
        return (self.d, self.e, self.b, self.c)

    @property
    def corners(self) -> tuple[int, int, int, int]:
        return (self.P, self.S, self.Q, self.R)

    # tau_3, tau_4 border the triangle of the even half-edge; tau_2, tau_5 the other
    @property
    def tau(self) -> dict[int, int]:
        return {1: self.a, 2: self.d, 3: self.b, 4: self.c, 5: self.e}

    @classmethod
    def of(cls, t: Triangulation, arc: int) -> "Quad":
        a, a2 = 2 * arc, 2 * arc + 1
        if not t.has_halfedge(a):
            raise SurfaceError(f"unknown arc {arc}")
        if not t.has_halfedge(a2):
            raise SurfaceError(f"arc {arc} is a boundary arc and cannot be flipped")
        if t.triangle_of(a) == t.triangle_of(a2):
            raise SurfaceError(f"arc {arc} borders a self-glued triangle")
        b, c = t.next(a), t.prev(a)
        d, e = t.next(a2), t.prev(a2)
        return cls(arc, a, a2, b, c, d, e,
                   P=t.tail[a], Q=t.tail[b], R=t.tail[c], S=t.tail[e])


@dataclass(frozen=True, eq=False)
class FlipRecord:
    """One flip: ``before`` --(old_arc -> new_arc)--> ``after``.

    ``reverse`` is False when the even half-edge of the new arc runs R->S.
    """

    quad: Quad
    old_arc: int
    new_arc: int
    reverse: bool
    direction: str
    before: Triangulation
    after: Triangulation

    @property
    def x_even(self) -> int:
        return 2 * self.new_arc

    @property
    def x1(self) -> int:
        """New half-edge in the triangle with sides c, d (runs S->R)."""
        return 2 * self.new_arc + (0 if self.reverse else 1)

    @property
    def x2(self) -> int:
        """New half-edge in the triangle with sides e, b (runs R->S)."""
        return 2 * self.new_arc + (1 if self.reverse else 0)

    @cached_property
    def inverse(self) -> "FlipRecord":
        quad = Quad.of(self.after, self.new_arc)
        return FlipRecord(quad, self.new_arc, self.old_arc, not self.reverse,
                          "inverse" if self.direction == "forward" else "forward",
                          self.after, self.before)

    def __repr__(self):
        return f"FlipRecord({self.old_arc}->{self.new_arc}, {self.direction})"


def _flip_quad(t: Triangulation, quad: Quad, new_arc: int, reverse: bool) -> Triangulation:
    x_even, x_odd = 2 * new_arc, 2 * new_arc + 1
    x2, x1 = (x_odd, x_even) if reverse else (x_even, x_odd)
    slot1, slot2 = t.triangle_of(quad.a), t.triangle_of(quad.a_twin)
    tri_x2 = (x2, quad.e, quad.b)  # R->S, S->Q, Q->R
    tri_x1 = (x1, quad.c, quad.d)  # S->R, R->P, P->S
    even_tri, odd_tri = (tri_x1, tri_x2) if reverse else (tri_x2, tri_x1)
    triangles = list(t.triangles)
    triangles[slot1] = even_tri
    triangles[slot2] = odd_tri
    tail = dict(t.tail)
    del tail[quad.a], tail[quad.a_twin]
    tail[x2] = quad.R
    tail[x1] = quad.S
    return Triangulation(triangles, tail)


def flip(t: Triangulation, arc: int) -> tuple[Triangulation, FlipRecord]:
    """Flip an internal arc; the new arc gets the fresh id ``max(arc ids) + 1``."""
    quad = Quad.of(t, arc)
    new_arc = max(t.arc_ids) + 1
    after = _flip_quad(t, quad, new_arc, False)
    return after, FlipRecord(quad, arc, new_arc, False, "forward", t, after)


def apply_record(t: Triangulation, rec: FlipRecord) -> Triangulation:
    """Replay a record on ``t`` (which must equal ``rec.before``)."""
    if t != rec.before:
        raise SurfaceError("flip record does not match the triangulation")
    quad = Quad.of(t, rec.old_arc)
    if quad != rec.quad:
        raise SurfaceError("flip record quadrilateral does not match")
    return _flip_quad(t, quad, rec.new_arc, rec.reverse)


def arc_set(t: Triangulation) -> frozenset:
    """Internal arcs as frozensets of endpoint pairs (meaningful on discs only)."""
    return frozenset(frozenset(t.endpoints(k)) for k in t.internal_arcs)
