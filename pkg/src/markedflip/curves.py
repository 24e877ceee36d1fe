"""Curves between marked points as reduced crossing traces.

A transverse curve is stored as the corner it starts from, the half-edges
through which it enters successive triangles, and the corner it ends at
(corners are named as in :mod:`markedflip.surface`).  A curve that crosses
no arc is homotopic to a side and is stored as :class:`Coincident`.

Minimal position uses two moves, both supported in discs free of marked
points: removing a bigon (crossing an arc and immediately crossing back) and
swinging an end of the curve around its own endpoint when the first or last
crossed side is incident to that endpoint.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence, Union

from .surface import FlipRecord, SurfaceError, Triangulation


class CurveError(ValueError):
    pass


@dataclass(frozen=True)
class Coincident:
    """The curve runs along arc ``halfedge >> 1``; along the even half-edge unless ``reverse``."""

    halfedge: int
    reverse: bool = False

    def __post_init__(self):
        if self.halfedge % 2:
            object.__setattr__(self, "halfedge", self.halfedge - 1)
            object.__setattr__(self, "reverse", not self.reverse)

    @property
    def arc(self) -> int:
        return self.halfedge >> 1

    @property
    def crossings(self) -> tuple[int, ...]:
        return ()


@dataclass(frozen=True)
class Transverse:
    start: int
    crossings: tuple[int, ...]
    end: int

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(self.crossings))


CurveTrace = Union[Coincident, Transverse]


@dataclass(frozen=True, order=True)
class ArcCode:
    """Homotopy class of an arc, as its reduced trace relative to the base triangulation.

    ``arc`` is the base arc id when the class is an arc of the base, else -1
    and ``crossings`` holds the lexicographically smaller of the two
    traversal directions.
    """

    arc: int
    crossings: tuple[int, ...] = ()

    def __str__(self):
        if self.arc >= 0:
            return f"a{self.arc}"
        return "x" + ".".join(map(str, self.crossings))

    @classmethod
    def parse(cls, text: str) -> "ArcCode":
        if text.startswith("a"):
            return cls(int(text[1:]))
        if text.startswith("x"):
            return cls(-1, tuple(int(v) for v in text[1:].split(".")))
        raise CurveError(f"bad arc code {text!r}")

    def trace(self, t0: Triangulation, reverse: bool = False) -> CurveTrace:
        """Oriented trace in the base triangulation; ``reverse`` picks the other direction."""
        if self.arc >= 0:
            return Coincident(2 * self.arc, reverse)
        tr = _transverse_from_crossings(t0, self.crossings)
        return reverse_trace(tr) if reverse else tr


def _transverse_from_crossings(t: Triangulation, crossings: Sequence[int]) -> Transverse:
    first, last = crossings[0], crossings[-1]
    g = first ^ 1
    # start opposite the side crossed first, end opposite the side entered last
    return Transverse(t.prev(g), tuple(crossings), t.prev(last))


def reverse_trace(tr: CurveTrace) -> CurveTrace:
    if isinstance(tr, Coincident):
        return Coincident(tr.halfedge, not tr.reverse)
    return Transverse(tr.end, tuple(h ^ 1 for h in reversed(tr.crossings)), tr.start)


def check_trace(tr: CurveTrace, t: Triangulation) -> None:
    """Raise :class:`CurveError` unless ``tr`` is a consistent trace relative to ``t``."""
    if isinstance(tr, Coincident):
        if not t.has_halfedge(tr.halfedge):
            raise CurveError(f"unknown arc {tr.arc}")
        return
    if not t.has_halfedge(tr.start) or not t.has_halfedge(tr.end):
        raise CurveError("unknown corner")
    tri = t.triangle_of(tr.start)
    for h in tr.crossings:
        if not t.has_halfedge(h) or t.twin(h) is None:
            raise CurveError(f"crossing {h} is not an internal half-edge")
        if t.triangle_of(h ^ 1) != tri:
            raise CurveError(f"crossing {h} does not leave the current triangle")
        tri = t.triangle_of(h)
    if t.triangle_of(tr.end) != tri:
        raise CurveError("end corner is not in the last triangle")


def reduce(tr: CurveTrace, t: Triangulation) -> CurveTrace:
    """Put a trace in minimal position relative to ``t``."""
    if isinstance(tr, Coincident):
        check_trace(tr, t)
        return tr
    check_trace(tr, t)
    start, end = tr.start, tr.end
    out: list[int] = []
    for h in tr.crossings:
        if out and out[-1] == h ^ 1:
            out.pop()
        else:
            out.append(h)
    # swing the ends; removing an end crossing never creates a new bigon
    changed = True
    lo, hi = 0, len(out)
    while changed:
        changed = False
        if lo < hi:
            h = out[lo]
            g = h ^ 1
            if g == start:
                start, lo, changed = t.next(h), lo + 1, True
            elif g == t.prev(start):
                start, lo, changed = h, lo + 1, True
        if lo < hi:
            h = out[hi - 1]
            if h == end:
                end, hi, changed = t.next(h ^ 1), hi - 1, True
            elif h == t.prev(end):
                end, hi, changed = h ^ 1, hi - 1, True
    out = out[lo:hi]
    if out:
        return Transverse(start, tuple(out), end)
    if start == end:
        raise CurveError("curve is null-homotopic")
    if end == t.next(start):
        return Coincident(start)
    if end == t.prev(start):
        return Coincident(t.prev(start), True)
    raise CurveError("start and end corners lie in different triangles")


def is_reduced(tr: CurveTrace, t: Triangulation) -> bool:
    if isinstance(tr, Coincident):
        return True
    cr = tr.crossings
    if not cr:
        return False
    if any(cr[i + 1] == cr[i] ^ 1 for i in range(len(cr) - 1)):
        return False
    return cr[0] ^ 1 == t.next(tr.start) and cr[-1] == t.next(tr.end)


def intersection_numbers(tr: CurveTrace, t: Triangulation) -> tuple[dict[int, int], int]:
    """Per internal arc crossing counts and their total."""
    counts = dict.fromkeys(t.internal_arcs, 0)
    for h in tr.crossings:
        counts[h >> 1] += 1
    return counts, sum(counts.values())


def first_crossed_arc(tr: CurveTrace) -> int:
    if isinstance(tr, Coincident) or not tr.crossings:
        raise CurveError("the curve is an arc of the triangulation; nothing is crossed")
    return tr.crossings[0] >> 1


# ---------------------------------------------------------------------------
# transport through a flip

# positions on the boundary of the flip quadrilateral, counterclockwise:
# P=0, d=1, S=2, e=3, Q=4, b=5, R=6, c=7.  The new diagonal joins S and R.
_P, _S, _Q, _R = 0, 2, 4, 6
_REGION1 = {7, 0, 1}   # c, P, d: the new triangle holding x1
_REGION2 = {3, 4, 5}   # e, Q, b: the new triangle holding x2


def transport(tr: CurveTrace, rec: FlipRecord) -> CurveTrace:
    """Rewrite a reduced trace relative to ``rec.before`` as one relative to ``rec.after``."""
    q = rec.quad
    k = rec.old_arc
    after = rec.after
    x1, x2 = rec.x1, rec.x2
    if isinstance(tr, Coincident):
        if tr.arc == k:
            if not tr.reverse:   # P -> Q
                return Transverse(q.d, (x2,), q.b)
            return Transverse(q.b, (x1,), q.d)
        if not after.has_halfedge(tr.halfedge):
            raise CurveError("flip record does not match the curve")
        return tr

    before = rec.before
    check_trace(tr, before)
    t1, t2 = before.triangle_of(q.a), before.triangle_of(q.a_twin)
    side_pos = {q.d: 1, q.e: 3, q.b: 5, q.c: 7}
    corner_pos = {q.a: _P, q.d: _P, q.e: _S, q.a_twin: _Q, q.b: _Q, q.c: _R}

    cr = tr.crossings
    m = len(cr)
    start, end = tr.start, tr.end

    def seg_tri(i):
        return before.triangle_of(start if i == 0 else cr[i - 1])

    def corner_after(pos, other):
        if pos == _P:
            return q.d
        if pos == _Q:
            return q.b
        if pos == _R:
            return q.c if other in _REGION1 else x2
        return x1 if other in _REGION1 else q.e   # S

    out: list[int] = []
    i = 0
    while i <= m:
        if seg_tri(i) not in (t1, t2):
            if i < m:
                out.append(cr[i])
            i += 1
            continue
        j = i
        while j < m and cr[j] >> 1 == k:
            j += 1
        entry = corner_pos[start] if i == 0 else side_pos[cr[i - 1]]
        exit_ = corner_pos[end] if j == m else side_pos[cr[j] ^ 1]
        if i == 0 and j == m and {entry, exit_} == {_S, _R}:
            return Coincident(x2, False) if entry == _R else Coincident(x2, True)
        if entry in _REGION1 and exit_ in _REGION2:
            out.append(x2)
        elif entry in _REGION2 and exit_ in _REGION1:
            out.append(x1)
        if i == 0:
            start = corner_after(entry, exit_)
        if j == m:
            end = corner_after(exit_, entry)
        else:
            out.append(cr[j])
        i = j + 1
    return reduce(Transverse(start, tuple(out), end), after)


def transport_path(tr: CurveTrace, records: Sequence[FlipRecord]) -> CurveTrace:
    for rec in records:
        tr = transport(tr, rec)
    return tr


def pull_back(tr: CurveTrace, records: Sequence[FlipRecord]) -> CurveTrace:
    """Transport a trace from the end of ``records`` back to its start."""
    for rec in reversed(records):
        tr = transport(tr, rec.inverse)
    return tr


def code_of_trace(tr: CurveTrace) -> ArcCode:
    """Normalize a reduced trace relative to the base triangulation."""
    if isinstance(tr, Coincident):
        return ArcCode(tr.arc)
    fwd = tuple(tr.crossings)
    bwd = tuple(h ^ 1 for h in reversed(fwd))
    return ArcCode(-1, min(fwd, bwd))


def canonical_code(curve: int | CurveTrace, flip_path: Sequence[FlipRecord],
                   t: Triangulation | None = None) -> ArcCode:
    """ArcCode of an arc id or trace living at the end of ``flip_path``.

    ``t`` is the triangulation at the end of the path; it defaults to the
    path's last ``after`` and is required for an empty path.
    """
    if flip_path:
        end = flip_path[-1].after
        for a, b in zip(flip_path, flip_path[1:]):
            if a.after is not b.before and a.after != b.before:
                raise CurveError("flip path is not contiguous")
        if t is not None and t != end:
            raise CurveError("flip path does not end at the given triangulation")
    elif t is None:
        raise CurveError("empty flip path needs the base triangulation")
    else:
        end = t
    if isinstance(curve, int):
        if not end.has_halfedge(2 * curve):
            raise CurveError(f"unknown arc {curve}")
        curve = Coincident(2 * curve)
    return code_of_trace(pull_back(reduce(curve, end), flip_path))


# ---------------------------------------------------------------------------
# disc shorthand

def disc_curve(t: Triangulation, u: int, v: int) -> CurveTrace:
    """Reduced trace of the curve from marked point ``u`` to ``v`` on a disc.

    Any path in a disc between two boundary points is homotopic to the
    chord, so the dual-tree path between triangles at ``u`` and ``v`` is
    reduced to obtain it.
    """
    if u == v:
        raise CurveError("a curve needs two distinct endpoints on a disc")
    corner_u = next((h for h in t.halfedges() if t.tail[h] == u), None)
    corner_v = next((h for h in t.halfedges() if t.tail[h] == v), None)
    if corner_u is None or corner_v is None:
        raise CurveError(f"unknown marked point {u if corner_u is None else v}")
    src, dst = t.triangle_of(corner_u), t.triangle_of(corner_v)
    parent: dict[int, tuple[int, int] | None] = {src: None}
    stack = [src]
    while stack:
        i = stack.pop()
        for h in t.triangles[i]:
            g = t.twin(h)
            if g is None:
                continue
            j = t.triangle_of(g)
            if j not in parent:
                parent[j] = (i, g)
                stack.append(j)
    if dst not in parent:
        raise SurfaceError("disconnected triangulation")
    crossings = []
    j = dst
    while parent[j] is not None:
        i, g = parent[j]
        crossings.append(g)
        j = i
    crossings.reverse()
    return reduce(Transverse(corner_u, tuple(crossings), corner_v), t)


def trace_to_dict(tr: CurveTrace) -> dict:
    if isinstance(tr, Coincident):
        return {"arc": tr.arc, "reverse": tr.reverse}
    return {"start": tr.start, "crossings": list(tr.crossings), "end": tr.end}


def trace_from_dict(data: dict) -> CurveTrace:
    if "arc" in data:
        return Coincident(2 * int(data["arc"]), bool(data.get("reverse", False)))
    try:
        return Transverse(int(data["start"]), tuple(int(h) for h in data["crossings"]), int(data["end"]))
    except KeyError as exc:
        raise CurveError(f"curve JSON is missing {exc}") from None
