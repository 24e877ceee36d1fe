"""The exchange graph as an implicit graph: keys, neighbors, BFS, and the face check."""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .curves import ArcCode, canonical_code, code_of_trace, pull_back, Coincident
from .surface import FlipRecord, Triangulation, flip

DEFAULT_BUDGET = 10**6
BUDGET_ENV = "MARKEDFLIP_BUDGET"


def default_budget() -> int:
    return int(os.environ.get(BUDGET_ENV, DEFAULT_BUDGET))


class BudgetExceeded(RuntimeError):
    pass


class NotInFace(ValueError):
    pass


def key_str(key: Iterable[ArcCode]) -> str:
    return ";".join(str(c) for c in sorted(key))


class GraphNode:
    """A triangulation with its canonical key and a flip path from the base."""

    __slots__ = ("index", "key", "triangulation", "path", "codes", "mask")

    def __init__(self, index, key, triangulation, path, codes, mask):
        self.index = index
        self.key: frozenset[ArcCode] = key
        self.triangulation: Triangulation = triangulation
        self.path: tuple[FlipRecord, ...] = path
        self.codes: dict[int, ArcCode] = codes
        self.mask = mask

    def __eq__(self, other):
        return isinstance(other, GraphNode) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"GraphNode({self.index}, {key_str(self.key)})"


@dataclass
class DistanceCertificate:
    distance: int
    meeting_key: str
    forward_radius: int
    backward_radius: int
    explored: int


@dataclass
class NlfReport:
    v: str
    w: str
    distance: int | None
    common_arcs: list[str]
    interval_size: int | None
    ok: bool | None
    witness: str | None = None
    status: str = "ok"            # ok | fail | inconclusive
    face_distance: int | None = None
    detail: str | None = None

    def to_dict(self) -> dict:
        return {
            "v": self.v, "w": self.w, "status": self.status, "ok": self.ok,
            "distance": self.distance, "face_distance": self.face_distance,
            "common_arcs": self.common_arcs, "interval_size": self.interval_size,
            "witness": self.witness, "detail": self.detail,
        }


class ExchangeGraph:
    """Lazily explored flip graph of the surface triangulated by ``base``.

    Nodes are registered on first discovery, and keep that flip path.
    ``budget`` caps the number of registered nodes.
    """

    def __init__(self, base: Triangulation, budget: int | None = None):
        self.base = base
        self.budget = default_budget() if budget is None else budget
        self.n = base.n
        self.nodes: list[GraphNode] = []
        self.by_key: dict[frozenset, GraphNode] = {}
        self._adj: dict[int, list[tuple[ArcCode, int]]] = {}
        self._bits: dict[ArcCode, int] = {}
        codes = {k: ArcCode(k) for k in base.internal_arcs}
        self.root = self._register(frozenset(codes.values()), base, (), codes)

    # -- registry ------------------------------------------------------------
    def bit(self, code: ArcCode) -> int:
        b = self._bits.get(code)
        if b is None:
            b = self._bits[code] = 1 << len(self._bits)
        return b

    def mask_of(self, codes: Iterable[ArcCode]) -> int:
        m = 0
        for c in codes:
            m |= self.bit(c)
        return m

    def _register(self, key, t, path, codes) -> GraphNode:
        node = self.by_key.get(key)
        if node is not None:
            return node
        if len(self.nodes) >= self.budget:
            raise BudgetExceeded(f"node budget {self.budget} exhausted")
        node = GraphNode(len(self.nodes), key, t, path, codes, self.mask_of(key))
        self.nodes.append(node)
        self.by_key[key] = node
        return node

    def __len__(self):
        return len(self.nodes)

    def code_along(self, path: Sequence[FlipRecord], arc: int) -> ArcCode:
        return code_of_trace(pull_back(Coincident(2 * arc), path))

    def extend(self, node: GraphNode, records: Sequence[FlipRecord]) -> GraphNode:
        """Node reached from ``node`` by raw flip records starting at its triangulation."""
        codes = dict(node.codes)
        path = node.path
        for rec in records:
            path = path + (rec,)
            del codes[rec.old_arc]
            codes[rec.new_arc] = self.code_along(path, rec.new_arc)
        t = records[-1].after if records else node.triangulation
        return self._register(frozenset(codes.values()), t, path, codes)

    def locate(self, key: frozenset) -> GraphNode | None:
        return self.by_key.get(key)

    # -- adjacency -----------------------------------------------------------
    def neighbor_list(self, node: GraphNode) -> list[tuple[ArcCode, GraphNode]]:
        """``(code of the flipped arc, neighbor)`` pairs, sorted by code."""
        adj = self._adj.get(node.index)
        if adj is None:
            adj = []
            t = node.triangulation
            for arc in t.internal_arcs:
                _, rec = flip(t, arc)
                nb = self.extend(node, [rec])
                adj.append((node.codes[arc], nb.index))
            adj.sort()
            self._adj[node.index] = adj
        return [(c, self.nodes[i]) for c, i in adj]

    def neighbors(self, node: GraphNode) -> list[GraphNode]:
        return [nb for _, nb in self.neighbor_list(node)]

    def _adjacent(self, index: int, face_mask: int = 0):
        node = self.nodes[index]
        if index not in self._adj:
            self.neighbor_list(node)
        for code, j in self._adj[index]:
            if face_mask and self._bits[code] & face_mask:
                continue
            yield j

    # -- search --------------------------------------------------------------
    def ball(self, start: GraphNode, radius: int) -> list[list[GraphNode]]:
        """BFS layers around ``start`` up to ``radius``; layer i holds nodes at distance i."""
        if radius < 0:
            raise ValueError("radius must be nonnegative")
        dist = self.bfs(start, radius)
        layers: list[list[GraphNode]] = [[] for _ in range(max(dist.values()) + 1)]
        for i, d in dist.items():
            layers[d].append(self.nodes[i])
        for layer in layers:
            layer.sort(key=lambda nd: sorted(nd.key))
        return layers

    def explore_all(self, limit_radius: int = 10**9) -> list[GraphNode]:
        """Exhaust a finite graph (or a ball of ``limit_radius``) from the root."""
        dist = self.bfs(self.root, limit_radius)
        return [self.nodes[i] for i in sorted(dist)]

    def bfs(self, start: GraphNode, radius: int, face_mask: int = 0) -> dict[int, int]:
        """Exact distances from ``start`` to every node within ``radius``."""
        dist = {start.index: 0}
        frontier = [start.index]
        d = 0
        while frontier and d < radius:
            d += 1
            nxt = []
            for i in frontier:
                for j in self._adjacent(i, face_mask):
                    if j not in dist:
                        dist[j] = d
                        nxt.append(j)
            frontier = nxt
        return dist

    def distance_certified(self, v: GraphNode, w: GraphNode, face_mask: int = 0,
                           max_distance: int | None = None) -> DistanceCertificate:
        """Bidirectional BFS; whole layers are expanded, so the first meeting is a shortest path."""
        if v.index == w.index:
            return DistanceCertificate(0, key_str(v.key), 0, 0, 1)
        dist = ({v.index: 0}, {w.index: 0})
        frontier = ([v.index], [w.index])
        radius = [0, 0]
        while frontier[0] and frontier[1]:
            side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
            mine, other = dist[side], dist[1 - side]
            radius[side] += 1
            nxt = []
            best = None
            for i in frontier[side]:
                for j in self._adjacent(i, face_mask):
                    if j in mine:
                        continue
                    mine[j] = radius[side]
                    nxt.append(j)
                    if j in other:
                        total = radius[side] + other[j]
                        if best is None or total < best[0]:
                            best = (total, j)
            if best is not None:
                total, j = best
                return DistanceCertificate(total, key_str(self.nodes[j].key),
                                           dist[0][j], dist[1][j], len(dist[0]) + len(dist[1]))
            frontier = list(frontier)
            frontier[side] = nxt
            frontier = tuple(frontier)
            if max_distance is not None and radius[0] + radius[1] > max_distance:
                raise BudgetExceeded(f"distance exceeds {max_distance}")
        raise NotInFace("the two nodes are not connected (within the face)")

    def distance(self, v: GraphNode, w: GraphNode) -> int:
        return self.distance_certified(v, w).distance

    def geodesic_interval(self, v: GraphNode, w: GraphNode, d: int | None = None) -> set[GraphNode]:
        if d is None:
            d = self.distance(v, w)
        dv = self.bfs(v, d)
        dw = self.bfs(w, d)
        return {self.nodes[i] for i, a in dv.items() if i in dw and a + dw[i] == d}

    def common_arcs(self, v: GraphNode, w: GraphNode) -> frozenset[ArcCode]:
        return v.key & w.key

    def face_distance(self, v: GraphNode, w: GraphNode, face_arcs: Iterable[ArcCode]) -> int:
        face = frozenset(face_arcs)
        if not face <= v.key or not face <= w.key:
            raise NotInFace("both nodes must contain every face arc")
        return self.distance_certified(v, w, face_mask=self.mask_of(face)).distance

    def nlf_check(self, v: GraphNode, w: GraphNode, with_face_distance: bool = True) -> NlfReport:
        """Every vertex on a geodesic from v to w must keep the arcs they share.

        Exceeding the node budget yields an inconclusive report, never a pass.
        """
        common = sorted(v.key & w.key)
        base = dict(v=key_str(v.key), w=key_str(w.key), common_arcs=[str(c) for c in common])
        try:
            d = self.distance(v, w)
            interval = self.geodesic_interval(v, w, d)
            fd = self.face_distance(v, w, common) if with_face_distance else None
        except BudgetExceeded as exc:
            return NlfReport(distance=None, interval_size=None, ok=None,
                             status="inconclusive", detail=str(exc), **base)
        need = frozenset(common)
        bad = sorted((u for u in interval if not need <= u.key), key=lambda u: sorted(u.key))
        ok = not bad and (fd is None or fd == d)
        detail = None
        if fd is not None and fd != d:
            detail = f"face distance {fd} differs from distance {d}"
        return NlfReport(distance=d, interval_size=len(interval), ok=ok,
                         witness=key_str(bad[0].key) if bad else None,
                         status="ok" if ok else "fail", face_distance=fd, detail=detail, **base)

    # -- batch check -------------------------------------------------------------
    def nlf_sweep(self, sources: Sequence[GraphNode], radius: int,
                  face_check: bool = False) -> list[NlfReport]:
        """Check all pairs of ``sources`` at distance at most ``radius``.

        From each source v a BFS to ``radius`` gives exact distances.  Along
        the BFS order, the arcs shared by every vertex of the interval I(v, u)
        are the arcs of u intersected with those of all BFS predecessors' sets,
        and the interval itself is u plus the predecessors' intervals.
        """
        reports = []
        src_index = {s.index: pos for pos, s in enumerate(sources)}
        for pos, v in enumerate(sources):
            order, dist, preds = self._bfs_dag(v, radius)
            local = {i: k for k, i in enumerate(order)}
            keep: dict[int, int] = {}
            interval: dict[int, int] = {}
            for i in order:
                m = self.nodes[i].mask
                iv = 1 << local[i]
                for p in preds[i]:
                    m &= keep[p]
                    iv |= interval[p]
                keep[i] = m
                interval[i] = iv
            for i in order:
                if src_index.get(i, -1) <= pos:
                    continue
                w = self.nodes[i]
                common = v.mask & w.mask
                missing = common & ~keep[i]
                witness = None
                if missing:
                    for k in range(len(order)):
                        if interval[i] >> k & 1 and common & ~self.nodes[order[k]].mask:
                            witness = key_str(self.nodes[order[k]].key)
                            break
                fd = None
                detail = None
                if face_check:
                    fd = self.distance_certified(v, w, face_mask=common).distance
                    if fd != dist[i]:
                        detail = f"face distance {fd} differs from distance {dist[i]}"
                ok = not missing and detail is None
                reports.append(NlfReport(
                    v=key_str(v.key), w=key_str(w.key), distance=dist[i],
                    common_arcs=[str(c) for c in sorted(v.key & w.key)],
                    interval_size=interval[i].bit_count(), ok=ok, witness=witness,
                    status="ok" if ok else "fail", face_distance=fd, detail=detail))
        return reports

    def _bfs_dag(self, start: GraphNode, radius: int):
        dist = {start.index: 0}
        preds: dict[int, list[int]] = {start.index: []}
        order = [start.index]
        frontier = [start.index]
        d = 0
        while frontier and d < radius:
            d += 1
            nxt = []
            for i in frontier:
                for j in self._adjacent(i):
                    dj = dist.get(j)
                    if dj is None:
                        dist[j] = d
                        preds[j] = [i]
                        nxt.append(j)
                    elif dj == d:
                        preds[j].append(i)
            order.extend(nxt)
            frontier = nxt
        return order, dist, preds

    # -- export ----------------------------------------------------------------
    def to_dot(self, nodes: Sequence[GraphNode], face: Iterable[ArcCode] = (),
               labels=None) -> str:
        """Deterministic DOT text for the subgraph induced by ``nodes``."""
        face = frozenset(face)
        names = {nd.index: (labels(nd) if labels else key_str(nd.key)) for nd in nodes}
        ordered = sorted(nodes, key=lambda nd: names[nd.index])
        lines = ["graph exchange {", "  node [shape=box];"]
        for nd in ordered:
            color = ' color="red"' if face and face <= nd.key else ""
            lines.append(f'  "{names[nd.index]}" [label="{names[nd.index]}"{color}];')
        edges = set()
        for nd in nodes:
            for nb in self.neighbors(nd):
                if nb.index in names:
                    a, b = sorted((names[nd.index], names[nb.index]))
                    edges.add((a, b))
        for a, b in sorted(edges):
            lines.append(f'  "{a}" -- "{b}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def edges_within(self, nodes: Sequence[GraphNode]) -> list[tuple[GraphNode, GraphNode]]:
        inside = {nd.index for nd in nodes}
        out = []
        for nd in nodes:
            for nb in self.neighbors(nd):
                if nb.index in inside and nd.index < nb.index:
                    out.append((nd, nb))
        return out
