"""Acceptance criteria, one test each; a PASS/FAIL line per criterion is printed at the end of the run.

Run alone with ``pytest tests/test_acceptance.py -v`` or as a script.
"""
import sys
import time

import pytest

from markedflip import checks
from markedflip import disc_oracle as oracle
from markedflip.explorer import ExchangeGraph, key_str
from markedflip.surface import generator_annulus, generator_disc, generator_torus_one_boundary, validate

from conftest import ACCEPTANCE_LINES


def record(number, title, ok, detail, seconds, limit=None):
    status = "PASS" if ok else "FAIL"
    bound = f" (limit {limit:g} s)" if limit else ""
    line = f"criterion {number}: {status}  {title}: {detail}; {seconds:.2f} s{bound}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def test_criterion_1_arc_count():
    start = time.perf_counter()
    cases = [(f"disc({c})", generator_disc(c), 0, 1, c) for c in range(4, 13)]
    cases += [(f"annulus({p},{q})", generator_annulus(p, q), 0, 2, p + q)
              for p in range(1, 4) for q in range(1, 4)]
    cases.append(("torus1", generator_torus_one_boundary(), 1, 1, 1))
    bad = []
    for name, t, g, b, c in cases:
        rep = validate(t)
        expected = 6 * g + 3 * b + c - 6
        if not (rep.ok and rep.n == expected == len(t.internal_arcs) and (rep.genus, rep.b, rep.c) == (g, b, c)):
            bad.append(name)
    secs = time.perf_counter() - start
    ok = not bad and secs < 1
    record(1, "arc count", ok, f"{len(cases)} surfaces, mismatches {bad}", secs, 1)
    assert ok


def test_criterion_2_associahedron():
    start = time.perf_counter()
    rows, ok = [], True
    for c, expected in zip(range(6, 10), (14, 42, 132, 429)):
        t0 = time.perf_counter()
        m = checks.associahedron_match(c)
        good = (m["vertices"] == m["catalan"] == expected and m["edges"] == m["expected_edges"]
                and m["isomorphic"] and m["codes_bijective"])
        if c == 9:
            good = good and time.perf_counter() - t0 < 30
        ok = ok and good
        rows.append(f"c={c}: V={m['vertices']} E={m['edges']}")
    record(2, "associahedron", ok, ", ".join(rows), time.perf_counter() - start)
    assert ok


@pytest.fixture(scope="module")
def projection_sweeps():
    start = time.perf_counter()
    out = []
    for c in range(4, 9):
        sweep, viol, edges = checks.projection_sweep_disc(c)
        out.append((f"disc({c})", sweep, viol, edges))
    for p, q in ((1, 1), (2, 2)):
        sweep, viol, edges = checks.projection_sweep_ball(generator_annulus(p, q), 5)
        out.append((f"annulus({p},{q})", sweep, viol, edges))
    return out, time.perf_counter() - start


def test_criterion_3_projection_axioms(projection_sweeps):
    sweeps, secs = projection_sweeps
    total = {k: 0 for k in ("p1", "p2", "p3", "p4")}
    for _, _, viol, _ in sweeps:
        for k, v in viol.items():
            total[k] += len(v)
    runs = sum(s.runs for _, s, _, _ in sweeps)
    edges = sum(e for *_, e in sweeps)
    ok = not any(total.values()) and secs < 300
    record(3, "projection axioms", ok, f"{runs} projections, {edges} edges, violations {total}", secs, 300)
    assert ok


def test_criterion_4_measure_decrease(projection_sweeps):
    sweeps, secs = projection_sweeps
    measure = sum(len(s.measure_violations) for _, s, _, _ in sweeps)
    watchdog = sum(len(s.watchdog_violations) for _, s, _, _ in sweeps)
    runs = sum(s.runs for _, s, _, _ in sweeps)
    ok = measure == 0 and watchdog == 0 and runs > 0
    record(4, "measure decrease", ok, f"{runs} runs, {measure} measure and {watchdog} watchdog violations", secs)
    assert ok


def test_criterion_5_oracle_equivalence():
    start = time.perf_counter()
    count, mismatches = 0, []
    for c in range(4, 10):
        n, bad = checks.oracle_equivalence(c)
        count += n
        mismatches += bad
    ok = not mismatches
    record(5, "oracle equivalence", ok, f"{count} (triangulation, oriented diagonal) pairs, "
           f"{len(mismatches)} mismatches", time.perf_counter() - start)
    assert ok, mismatches[:5]


def test_criterion_6_nlf_discs():
    start = time.perf_counter()
    rows, ok = [], True
    for c in range(5, 10):
        t0 = time.perf_counter()
        g = ExchangeGraph(generator_disc(c))
        reports = checks.nlf_exhaustive(g, face_check=True)
        V = len(g.nodes)
        failures = [r for r in reports if not r.ok]
        # the engine's distances must match the oracle's independent BFS
        fg = oracle.FlipGraph(c)
        poly = {nd.key: checks.polygon_of(nd.triangulation) for nd in g.explore_all()}
        by_str = {key_str(k): p for k, p in poly.items()}
        dist_bad = sum(fg.dist[fg.index[by_str[r.v]]][fg.index[by_str[r.w]]] != r.distance for r in reports)
        oracle_fail = len(fg.nlf_failures())
        good = len(reports) == V * (V - 1) // 2 and not failures and not dist_bad and not oracle_fail
        if c == 9:
            good = good and time.perf_counter() - t0 < 600
        ok = ok and good
        rows.append(f"c={c}: {len(reports)} pairs, {len(failures)} fail")
    record(6, "non-leaving face, discs", ok, ", ".join(rows), time.perf_counter() - start, 600)
    assert ok


def test_criterion_7_nlf_bounded():
    start = time.perf_counter()
    rows, ok = [], True
    for name, t in (("annulus(1,1)", generator_annulus(1, 1)), ("annulus(2,2)", generator_annulus(2, 2)),
                    ("torus1", generator_torus_one_boundary())):
        g = ExchangeGraph(t)
        sources, reports = checks.nlf_ball(g, 6, 6)
        failures = [r for r in reports if r.status != "ok"]
        # re-certify every distance with the independent bidirectional search
        lookup = {key_str(nd.key): nd for nd in sources}
        wrong = sum(g.distance_certified(lookup[r.v], lookup[r.w]).distance != r.distance for r in reports)
        ok = ok and not failures and not wrong
        rows.append(f"{name}: {len(sources)} nodes, {len(reports)} pairs, {len(failures)} fail, "
                    f"{wrong} distance mismatches")
    secs = time.perf_counter() - start
    ok = ok and secs < 600
    record(7, "non-leaving face, bounded", ok, "; ".join(rows), secs, 600)
    assert ok


def test_criterion_8_round_trips():
    start = time.perf_counter()
    hexa = checks.round_trip_check(generator_disc(6), 4)
    ann = checks.round_trip_check(generator_annulus(2, 2), 3)
    secs = time.perf_counter() - start
    failures = hexa["failures"] + ann["failures"]
    ok = not failures and secs < 60
    record(8, "curve-engine round trips", ok,
           f"hexagon {hexa['paths']} paths/{hexa['checked']} checks, annulus(2,2) {ann['paths']} paths/"
           f"{ann['checked']} checks, {len(failures)} failures", secs, 60)
    assert ok, failures[:5]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
