"""Sweeps shared by the CLI and the acceptance tests."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import disc_oracle as oracle
from .curves import (ArcCode, Coincident, CurveTrace, code_of_trace, disc_curve, pull_back,
                     reverse_trace, transport, transport_path)
from .explorer import ExchangeGraph, GraphNode, key_str
from .projection import ProjectionResult, project
from .surface import Triangulation, disc_triangulation, flip, generator_annulus, generator_disc, generator_torus_one_boundary


def surface_from_name(text: str) -> Triangulation:
    """``disc:c``, ``annulus:p,q`` or ``torus1``."""
    name, _, args = text.partition(":")
    name = name.strip().lower()
    try:
        nums = [int(v) for v in args.replace(",", " ").split()]
    except ValueError:
        raise ValueError(f"bad surface parameters in {text!r}") from None
    if name == "disc" and len(nums) == 1:
        return generator_disc(nums[0])
    if name == "annulus" and len(nums) == 2:
        return generator_annulus(*nums)
    if name in ("torus1", "torus") and not nums:
        return generator_torus_one_boundary()
    raise ValueError(f"unknown surface {text!r}; use disc:c, annulus:p,q or torus1")


def polygon_of(t: Triangulation) -> oracle.PolygonTriangulation:
    """Diagonal set of a disc triangulation, read off the marked-point labels."""
    return oracle.PolygonTriangulation(len(t.marked_points), (t.endpoints(k) for k in t.internal_arcs))


def all_codes(nodes: Iterable[GraphNode]) -> list[ArcCode]:
    return sorted({c for nd in nodes for c in nd.key})


# ---------------------------------------------------------------------------
# projection axioms

@dataclass
class ProjectionSweep:
    """Projections of graph nodes onto oriented arcs, memoized per (node, arc, orientation)."""

    graph: ExchangeGraph
    runs: int = 0
    measure_violations: list[str] = field(default_factory=list)
    watchdog_violations: list[str] = field(default_factory=list)

    def __post_init__(self):
        self._trace: dict[tuple, CurveTrace] = {}
        self._proj: dict[tuple, tuple[GraphNode, ProjectionResult]] = {}

    def trace_at(self, node: GraphNode, code: ArcCode, reverse: bool) -> CurveTrace:
        k = (node.index, code, reverse)
        tr = self._trace.get(k)
        if tr is None:
            tr = transport_path(code.trace(self.graph.base, reverse), node.path)
            self._trace[k] = tr
        return tr

    def project(self, node: GraphNode, code: ArcCode, reverse: bool):
        k = (node.index, code, reverse)
        hit = self._proj.get(k)
        if hit is None:
            res = project(node.triangulation, self.trace_at(node, code, reverse))
            self.runs += 1
            self._check_measure(node, code, reverse, res)
            hit = (self.graph.extend(node, res.flip_sequence), res)
            self._proj[k] = hit
        return hit

    def _check_measure(self, node, code, reverse, res: ProjectionResult):
        m = res.measure_trace
        tag = f"{key_str(node.key)} / {code}{'~' if reverse else ''}"
        F = res.flips
        ok = m[-1] == 0 and len(m) == F + 1
        if F:
            ok = ok and m[F - 1] == 0 and all(m[i] > m[i + 1] for i in range(F - 1))
        if not ok or res.anomalies:
            self.measure_violations.append(f"{tag}: {m}")
        if F > res.watchdog:
            self.watchdog_violations.append(f"{tag}: {F} > {res.watchdog}")

    def check(self, nodes: Sequence[GraphNode], edges, gammas: Sequence[ArcCode]) -> dict[str, list[str]]:
        viol = {"p1": [], "p2": [], "p3": [], "p4": []}
        n = self.graph.n
        for code in gammas:
            for rev in (False, True):
                tag = f"{code}{'~' if rev else ''}"
                for nd in nodes:
                    img, res = self.project(nd, code, rev)
                    if code not in img.key or not isinstance(res.final_curve, Coincident):
                        viol["p1"].append(f"{key_str(nd.key)} / {tag}")
                    if code in nd.key and (img is not nd or res.flips):
                        viol["p2"].append(f"{key_str(nd.key)} / {tag}")
                for u, w in edges:
                    pu, _ = self.project(u, code, rev)
                    pw, _ = self.project(w, code, rev)
                    if pu is not pw and len(pu.key & pw.key) != n - 1:
                        viol["p3"].append(f"{key_str(u.key)} -- {key_str(w.key)} / {tag}")
                    for a, b, pa in ((u, w, pu), (w, u, pw)):
                        if code in b.key and code not in a.key and pa is not b:
                            viol["p4"].append(f"{key_str(a.key)} -> {key_str(b.key)} / {tag}")
        return viol


def projection_sweep_disc(c: int) -> tuple[ProjectionSweep, dict[str, list[str]], int]:
    g = ExchangeGraph(generator_disc(c))
    nodes = g.explore_all()
    sweep = ProjectionSweep(g)
    edges = g.edges_within(nodes)
    viol = sweep.check(nodes, edges, all_codes(nodes))
    return sweep, viol, len(edges)


def projection_sweep_ball(t: Triangulation, radius: int) -> tuple[ProjectionSweep, dict[str, list[str]], int]:
    g = ExchangeGraph(t)
    nodes = [nd for layer in g.ball(g.root, radius) for nd in layer]
    sweep = ProjectionSweep(g)
    edges = g.edges_within(nodes)
    viol = sweep.check(nodes, edges, all_codes(nodes))
    return sweep, viol, len(edges)


# ---------------------------------------------------------------------------
# disc cross-validation

def oracle_equivalence(c: int) -> tuple[int, list[str]]:
    """Compare the general projection with oracle dragging on every (triangulation, oriented diagonal)."""
    mismatches = []
    count = 0
    diagonals = [(i, j) for i in range(c) for j in range(i + 2, c) if oracle.is_diagonal(c, (i, j))]
    for pt in sorted(oracle.enumerate_all(c), key=sorted):
        t = disc_triangulation(c, pt)
        for i, j in diagonals:
            for s, e in ((i, j), (j, i)):
                res = project(t, disc_curve(t, s, e))
                got = polygon_of(res.final_triangulation)
                want = oracle.stt_project(pt, (s, e))
                count += 1
                if got != want:
                    mismatches.append(f"{sorted(pt)} {s}->{e}: {sorted(got)} != {sorted(want)}")
    return count, mismatches


def associahedron_match(c: int) -> dict:
    """Explorer graph of the c-gon against the oracle flip graph."""
    g = ExchangeGraph(generator_disc(c))
    nodes = g.explore_all()
    fg = oracle.FlipGraph(c)
    to_poly = {nd.index: polygon_of(nd.triangulation) for nd in nodes}
    keys_ok = len(set(to_poly.values())) == len(nodes) and set(to_poly.values()) == set(fg.nodes)
    edges = {frozenset((to_poly[u.index], to_poly[w.index])) for u, w in g.edges_within(nodes)}
    oracle_edges = {frozenset((fg.nodes[i], fg.nodes[j])) for i, a in enumerate(fg.adj) for j in a}
    # each arc code must name one diagonal and vice versa
    code_to_diag = {}
    for nd in nodes:
        for arc, code in nd.codes.items():
            code_to_diag.setdefault(code, set()).add(frozenset(nd.triangulation.endpoints(arc)))
    codes_ok = all(len(v) == 1 for v in code_to_diag.values()) and \
        len({next(iter(v)) for v in code_to_diag.values()}) == len(code_to_diag)
    return {
        "vertices": len(nodes), "catalan": oracle.catalan(c - 2),
        "edges": len(edges), "expected_edges": (c - 3) * len(nodes) // 2,
        "oracle_edges": len(oracle_edges), "isomorphic": keys_ok and edges == oracle_edges,
        "codes_bijective": codes_ok,
    }


# ---------------------------------------------------------------------------
# non-leaving-face sweeps

def nlf_exhaustive(graph: ExchangeGraph, sample: int | None = None, seed: int = 0,
                   face_check: bool = True):
    """All unordered pairs of a finite exchange graph (optionally a seeded sample of sources)."""
    nodes = graph.explore_all()
    reports = graph.nlf_sweep(nodes, radius=10**9, face_check=face_check)
    if sample is not None and sample < len(reports):
        rng = random.Random(seed)
        reports = rng.sample(reports, sample)
    return reports


def nlf_ball(graph: ExchangeGraph, radius: int, max_distance: int, face_check: bool = False):
    """All pairs inside the ball of ``radius`` around the root at certified distance <= ``max_distance``."""
    sources = [nd for layer in graph.ball(graph.root, radius) for nd in layer]
    return sources, graph.nlf_sweep(sources, max_distance, face_check=face_check)


# ---------------------------------------------------------------------------
# curve-engine round trips

def flip_paths(t: Triangulation, length: int):
    """All flip sequences of exactly ``length`` flips from ``t``, as record lists."""
    paths = [[]]
    for _ in range(length):
        nxt = []
        for p in paths:
            cur = p[-1].after if p else t
            for arc in cur.internal_arcs:
                _, rec = flip(cur, arc)
                nxt.append(p + [rec])
        paths = nxt
    return paths


def round_trip_check(t0: Triangulation, max_length: int) -> dict:
    """Transport round trips and flip-path independence of arc codes.

    Path independence is checked against ground truth: appending a flip and
    its undo, or flipping two arcs with no common triangle in either order,
    must reproduce the same code set; and transporting an arc forward from
    the base along one path must land on an arc of that path's endpoint
    exactly when its code is in that endpoint's key.
    """
    failures: list[str] = []
    checked = 0
    paths = [p for L in range(max_length + 1) for p in flip_paths(t0, L)]
    keys = {}

    def key_of(path):
        end = path[-1].after if path else t0
        return frozenset(code_of_trace(pull_back(Coincident(2 * k), path)) for k in end.internal_arcs)

    for p in paths:
        keys[tuple(id(r) for r in p)] = key_of(p)
    universe = sorted({c for k in keys.values() for c in k})

    for p in paths:
        end = p[-1].after if p else t0
        key = keys[tuple(id(r) for r in p)]
        # round trip every known arc class through every flip of the endpoint
        for code in universe:
            for rev in (False, True):
                tr = transport_path(code.trace(t0, rev), p)
                for arc in end.internal_arcs:
                    _, rec = flip(end, arc)
                    checked += 1
                    back = transport(transport(tr, rec), rec.inverse)
                    if back != tr:
                        failures.append(f"round trip {code} through arc {arc}")
                on_arc = isinstance(tr, Coincident)
                if on_arc != (code in key):
                    failures.append(f"forward transport of {code} disagrees with key membership")
                if rev and reverse_trace(tr) != transport_path(code.trace(t0, False), p):
                    failures.append(f"reversal does not commute with transport for {code}")
        if len(p) < max_length:
            for arc in end.internal_arcs:
                a2, rec = flip(end, arc)
                _, back = flip(a2, rec.new_arc)
                checked += 1
                if key_of(p + [rec, back]) != key:
                    failures.append("flip then undo changed the code set")
        if len(p) + 2 <= max_length + 1:
            arcs = end.internal_arcs
            for i, a in enumerate(arcs):
                for b in arcs[i + 1:]:
                    tri_a = {end.triangle_of(2 * a), end.triangle_of(2 * a + 1)}
                    tri_b = {end.triangle_of(2 * b), end.triangle_of(2 * b + 1)}
                    if tri_a & tri_b:
                        continue
                    ta, ra = flip(end, a)
                    _, rab = flip(ta, b)
                    tb, rb = flip(end, b)
                    _, rba = flip(tb, a)
                    checked += 1
                    if key_of(p + [ra, rab]) != key_of(p + [rb, rba]):
                        failures.append("commuting flips give different code sets")
    return {"paths": len(paths), "checked": checked, "failures": failures,
            "classes": len(universe)}
