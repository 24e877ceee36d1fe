"""Command-line entry point.

Exit codes:
  0  success
  2  invalid input or usage
  3  inconclusive (search budget exhausted)
  4  a checked property failed
  5  internal error or projection watchdog tripped
"""
from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import checks
from . import disc_oracle as oracle
from .curves import CurveError, disc_curve, is_reduced, trace_from_dict, trace_to_dict
from .explorer import BudgetExceeded, ExchangeGraph, NotInFace, default_budget, key_str
from .projection import IncompatibleArcs, ProjectionError, project, project_multi
from .surface import SurfaceError, Triangulation, disc_triangulation, flip, new_from_gluing, validate

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE, EXIT_FAILURE, EXIT_INTERNAL = 0, 2, 3, 4, 5

log = logging.getLogger("markedflip")


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    surface: str | None = None
    triangulation: str | None = None
    diagonals: str | None = None
    curve: str | None = None
    curve_json: str | None = None
    v: str | None = None
    w: str | None = None
    polygon: int | None = None
    budget: int | None = None
    radius: int | None = None
    max_distance: int | None = None
    exhaustive: bool = False
    sample: int | None = None
    seed: int = 0
    allow_inconclusive: bool = False
    face_check: bool = False
    format: str = "json"
    output: str | None = None
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        known = {f for f in cls.__dataclass_fields__ if f != "extra"}
        return cls(**{k: v for k, v in vars(args).items() if k in known})


# ---------------------------------------------------------------------------
# parsing helpers

def parse_pair(text: str) -> tuple[int, int]:
    """An oriented vertex pair ``u-v``; anything else is rejected."""
    parts = text.strip().split("-")
    if len(parts) != 2 or not all(p.strip().isdigit() for p in parts):
        raise InputError(f"curve {text!r} must be an oriented pair 'u-v'")
    u, v = (int(p) for p in parts)
    if u == v:
        raise InputError(f"curve {text!r} has equal endpoints")
    return u, v


def parse_diagonals(text: str) -> list[tuple[int, int]]:
    return [parse_pair(p) for p in text.split(",") if p.strip()]


def load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def load_triangulation(cfg: RunConfig) -> Triangulation:
    if cfg.triangulation:
        data = load_json(cfg.triangulation)
        if isinstance(data, list):
            data = {"triangles": data}
        return new_from_gluing(data["triangles"], twisted=data.get("twisted", ()),
                               vertices=data.get("vertices"), strict=data.get("strict", True))
    if not cfg.surface:
        raise InputError("give --surface or --triangulation")
    try:
        t = checks.surface_from_name(cfg.surface)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if cfg.diagonals is not None:
        c = disc_size(t)
        t = disc_triangulation(c, parse_diagonals(cfg.diagonals))
    return t


def disc_size(t: Triangulation) -> int:
    s = t.surface
    if s.genus != 0 or s.b != 1:
        raise InputError("vertex-pair shorthand needs a disc surface")
    return s.c


def locate(graph: ExchangeGraph, text: str | None):
    """A node given as ``base``, ``path:a,b,...`` (arc ids flipped in turn) or disc diagonals."""
    if text is None or text.strip() in ("", "base"):
        return graph.root
    text = text.strip()
    if text.startswith("path:"):
        node, t = graph.root, graph.base
        records = []
        for tok in text[5:].split(","):
            if tok.strip():
                try:
                    t, rec = flip(t, int(tok))
                except (ValueError, SurfaceError) as exc:
                    raise InputError(f"bad flip path {text!r}: {exc}") from None
                records.append(rec)
        return graph.extend(node, records)
    c = disc_size(graph.base)
    diags = parse_diagonals(text)
    pt = oracle.PolygonTriangulation(c, diags)
    try:
        pt.check()
    except ValueError as exc:
        raise InputError(f"{text!r}: {exc}") from None
    res = project_multi(graph.base, [disc_curve(graph.base, u, v) for u, v in diags])
    return graph.extend(graph.root, res.flip_sequence)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def emit(cfg: RunConfig, text: str):
    if cfg.output:
        Path(cfg.output).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------------------
# commands

def cmd_surface(cfg: RunConfig) -> int:
    t = load_triangulation(cfg)
    s = t.surface
    emit(cfg, dumps({
        "surface": {"genus": s.genus, "boundary_marked_counts": list(s.boundary_marked_counts),
                    "b": s.b, "c": s.c, "n": s.n},
        "table": t.to_table(),
        "halfedges": [list(tri) for tri in t.triangles],
        "tail": {str(h): t.tail[h] for h in sorted(t.tail)},
        "internal_arcs": {str(k): list(t.endpoints(k)) for k in t.internal_arcs},
    }))
    return EXIT_OK


def cmd_validate(cfg: RunConfig) -> int:
    report = validate(load_triangulation(cfg))
    emit(cfg, dumps(report.to_dict()))
    return EXIT_OK if report.ok else EXIT_INPUT


def _curve(cfg: RunConfig, t: Triangulation):
    if cfg.curve_json:
        tr = trace_from_dict(load_json(cfg.curve_json))
        if not is_reduced(tr, t):
            raise InputError("curve JSON is not a reduced trace of the triangulation")
        return tr
    if cfg.curve is None:
        raise InputError("give --curve u-v (discs) or --curve-json FILE")
    u, v = parse_pair(cfg.curve)
    c = disc_size(t)
    if not oracle.is_diagonal(c, (u, v)):
        raise InputError(f"{u}-{v} is not a diagonal of the {c}-gon")
    return disc_curve(t, u, v)


def cmd_project(cfg: RunConfig) -> int:
    t = load_triangulation(cfg)
    gamma = _curve(cfg, t)
    res = project(t, gamma)
    flips = []
    for rec in res.flip_sequence:
        flips.append({"old_arc": rec.old_arc, "old_endpoints": list(rec.before.endpoints(rec.old_arc)),
                      "new_arc": rec.new_arc, "new_endpoints": list(rec.after.endpoints(rec.new_arc))})
    out = {
        "flips": flips,
        "flip_count": res.flips,
        "measure_trace": res.measure_trace,
        "watchdog": res.watchdog,
        "anomalies": res.anomalies,
        "final_curve": trace_to_dict(res.final_curve),
        "final_arcs": {str(k): list(res.final_triangulation.endpoints(k))
                       for k in res.final_triangulation.internal_arcs},
        "final_table": res.final_triangulation.to_table(),
    }
    emit(cfg, dumps(out))
    return EXIT_FAILURE if res.anomalies else EXIT_OK


def _graph(cfg: RunConfig) -> ExchangeGraph:
    return ExchangeGraph(load_triangulation(cfg), budget=cfg.budget)


def cmd_distance(cfg: RunConfig) -> int:
    g = _graph(cfg)
    v, w = locate(g, cfg.v), locate(g, cfg.w)
    cert = g.distance_certified(v, w, max_distance=cfg.max_distance)
    out = asdict(cert)
    out.update(v=key_str(v.key), w=key_str(w.key))
    emit(cfg, dumps(out))
    return EXIT_OK


def _ball_nodes(g: ExchangeGraph, cfg: RunConfig):
    start = locate(g, cfg.v)
    if cfg.radius is None:
        raise InputError("--radius is required")
    return g.ball(start, cfg.radius)


def cmd_ball(cfg: RunConfig) -> int:
    g = _graph(cfg)
    layers = _ball_nodes(g, cfg)
    out = {"layer_sizes": [len(L) for L in layers], "total": sum(len(L) for L in layers),
           "layers": [sorted(key_str(nd.key) for nd in L) for L in layers]}
    emit(cfg, dumps(out))
    return EXIT_OK


def cmd_export(cfg: RunConfig) -> int:
    g = _graph(cfg)
    if cfg.radius is None:
        nodes = g.explore_all()
    else:
        nodes = [nd for L in _ball_nodes(g, cfg) for nd in L]
    if cfg.format == "dot":
        emit(cfg, g.to_dot(nodes))
    else:
        edges = sorted(tuple(sorted((key_str(a.key), key_str(b.key)))) for a, b in g.edges_within(nodes))
        out = {"nodes": sorted(({"key": key_str(nd.key), "flip_path": [r.old_arc for r in nd.path]}
                                for nd in nodes), key=lambda d: d["key"]),
               "edges": [list(e) for e in edges]}
        emit(cfg, dumps(out))
    return EXIT_OK


def _nlf_status(reports, cfg: RunConfig) -> int:
    if any(r.status == "fail" for r in reports):
        return EXIT_FAILURE
    if any(r.status == "inconclusive" for r in reports) and not cfg.allow_inconclusive:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _stream(cfg: RunConfig, reports, extra: dict) -> None:
    lines = [dumps(r.to_dict()) for r in reports]
    summary = {"summary": {"pairs": len(reports), "ok": sum(r.status == "ok" for r in reports),
                           "fail": sum(r.status == "fail" for r in reports),
                           "inconclusive": sum(r.status == "inconclusive" for r in reports), **extra}}
    lines.append(dumps(summary))
    emit(cfg, "\n".join(lines))


def cmd_nlf(cfg: RunConfig) -> int:
    g = _graph(cfg)
    extra = {}
    if cfg.exhaustive:
        try:
            reports = checks.nlf_exhaustive(g, face_check=cfg.face_check)
        except BudgetExceeded as exc:
            raise _Inconclusive(str(exc)) from None
    elif cfg.radius is not None:
        max_d = cfg.max_distance if cfg.max_distance is not None else cfg.radius
        try:
            _, reports = checks.nlf_ball(g, cfg.radius, max_d, face_check=cfg.face_check)
        except BudgetExceeded as exc:
            raise _Inconclusive(str(exc)) from None
    else:
        reports = [g.nlf_check(locate(g, cfg.v), locate(g, cfg.w))]
    if cfg.sample is not None and cfg.sample < len(reports):
        reports = random.Random(cfg.seed).sample(reports, cfg.sample)
        extra = {"sampled": cfg.sample, "seed": cfg.seed}
        log.info("sampled %d pairs with seed %d", cfg.sample, cfg.seed)
    _stream(cfg, reports, extra)
    return _nlf_status(reports, cfg)


class _Inconclusive(Exception):
    pass


def cmd_oracle(cfg: RunConfig) -> int:
    """Disc-only mirrors of the explorer commands, computed by the brute-force model."""
    c = cfg.polygon
    if c is None or not 4 <= c <= oracle.MAX_C:
        raise InputError(f"--polygon must lie in 4..{oracle.MAX_C}")
    action = cfg.extra["action"]

    def tri(text):
        if text is None or text.strip() in ("", "base"):
            return oracle.PolygonTriangulation(c, [(0, j) for j in range(2, c - 1)])
        try:
            return oracle.PolygonTriangulation(c, parse_diagonals(text)).check()
        except ValueError as exc:
            raise InputError(str(exc)) from None

    if action == "count":
        emit(cfg, dumps({"c": c, "triangulations": len(oracle.enumerate_all(c)),
                         "catalan": oracle.catalan(c - 2)}))
        return EXIT_OK
    if action == "project":
        u, v = parse_pair(cfg.curve or "")
        if not oracle.is_diagonal(c, (u, v)):
            raise InputError(f"{u}-{v} is not a diagonal")
        res = oracle.stt_project(tri(cfg.diagonals), (u, v))
        emit(cfg, dumps({"result": [list(d) for d in sorted(res)]}))
        return EXIT_OK
    fg = oracle.FlipGraph(c)
    if action == "distance":
        a, b = fg.index[tri(cfg.v)], fg.index[tri(cfg.w)]
        emit(cfg, dumps({"distance": fg.bfs(a)[b]}))
        return EXIT_OK
    # nlf: exhaustive over all pairs
    bad = fg.nlf_failures()
    pairs = len(fg.nodes) * (len(fg.nodes) - 1) // 2
    emit(cfg, dumps({"pairs": pairs, "failures": [
        {"v": sorted(fg.nodes[a]), "w": sorted(fg.nodes[b]), "witness": sorted(fg.nodes[u])}
        for a, b, u in bad]}))
    return EXIT_FAILURE if bad else EXIT_OK


COMMANDS = {
    "surface": cmd_surface, "validate": cmd_validate, "project": cmd_project,
    "distance": cmd_distance, "ball": cmd_ball, "nlf-check": cmd_nlf,
    "oracle": cmd_oracle, "export": cmd_export,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="markedflip", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, graph=False):
        sp.add_argument("--surface", help="disc:c, annulus:p,q or torus1")
        sp.add_argument("--triangulation", help="gluing-table JSON file")
        sp.add_argument("--diagonals", help="disc triangulation as 'u-v,u-v,...'")
        sp.add_argument("--output", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=("json", "dot"), default="json")
        if graph:
            sp.add_argument("--budget", type=int, default=None,
                            help="node cap (default $MARKEDFLIP_BUDGET or 10^6)")
            sp.add_argument("--radius", type=int)
            sp.add_argument("--seed", type=int, default=0)

    for name in ("surface", "validate"):
        common(sub.add_parser(name))
    sp = sub.add_parser("project")
    common(sp)
    sp.add_argument("--curve", help="oriented disc curve 'u-v'")
    sp.add_argument("--curve-json", help="reduced trace JSON for general surfaces")

    sp = sub.add_parser("distance")
    common(sp, graph=True)
    sp.add_argument("--v")
    sp.add_argument("--w")
    sp.add_argument("--max-distance", type=int)

    for name in ("ball", "export"):
        sp = sub.add_parser(name)
        common(sp, graph=True)
        sp.add_argument("--v", help="centre node (default: base)")

    sp = sub.add_parser("nlf-check")
    common(sp, graph=True)
    sp.add_argument("--v")
    sp.add_argument("--w")
    sp.add_argument("--exhaustive", action="store_true", help="all pairs of a finite graph")
    sp.add_argument("--max-distance", type=int, help="pair distance cap with --radius")
    sp.add_argument("--sample", type=int, help="report a seeded sample of the pairs")
    sp.add_argument("--face-check", action="store_true", help="also compare face distance")
    sp.add_argument("--allow-inconclusive", action="store_true")

    sp = sub.add_parser("oracle")
    sp.add_argument("action", choices=("count", "distance", "nlf", "project"))
    sp.add_argument("--polygon", type=int, required=True, help="number of polygon vertices")
    sp.add_argument("--diagonals")
    sp.add_argument("--curve")
    sp.add_argument("--v")
    sp.add_argument("--w")
    sp.add_argument("--output")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    cfg = RunConfig.from_args(args)
    if args.command == "oracle":
        cfg.extra["action"] = args.action
    if cfg.budget is None and args.command in ("distance", "ball", "export", "nlf-check"):
        cfg.budget = default_budget()
    log.info("config %s", dumps(asdict(cfg)))
    try:
        return COMMANDS[args.command](cfg)
    except (InputError, SurfaceError, CurveError, IncompatibleArcs, NotInFace) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (BudgetExceeded, _Inconclusive) as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except ProjectionError as exc:
        print(f"watchdog: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
