import pytest
from hypothesis import given, settings, strategies as st

from markedflip.curves import (ArcCode, Coincident, CurveError, Transverse, canonical_code, check_trace,
                               code_of_trace, disc_curve, first_crossed_arc, intersection_numbers,
                               is_reduced, pull_back, reduce, reverse_trace, trace_from_dict,
                               trace_to_dict, transport, transport_path)
from markedflip.surface import flip, generator_annulus, generator_disc, generator_torus_one_boundary

from conftest import arc_between, corner, side


def crossed_diagonals(t, tr):
    return [tuple(sorted(t.endpoints(h >> 1))) for h in tr.crossings]


def test_bigon_back_and_forth_reduces_to_boundary_side(hexagon):
    t = hexagon
    into = side(t, (0, 3, 4), 0, 3)
    back = side(t, (0, 2, 3), 0, 3)
    tr = Transverse(corner(t, (0, 2, 3), 2), (into, back), corner(t, (0, 2, 3), 3))
    check_trace(tr, t)
    assert not is_reduced(tr, t)
    out = reduce(tr, t)
    assert isinstance(out, Coincident)
    assert t.endpoints(out.arc) == (2, 3) and not out.reverse
    assert not t.is_internal(out.arc)


def test_reduced_trace_is_fixed(hexagon):
    tr = disc_curve(hexagon, 1, 4)
    assert crossed_diagonals(hexagon, tr) == [(0, 2), (0, 3)]
    assert reduce(tr, hexagon) == tr
    assert is_reduced(tr, hexagon)


def test_intersection_numbers(hexagon):
    t = hexagon
    counts, total = intersection_numbers(disc_curve(t, 1, 4), t)
    assert total == 2
    assert counts == {arc_between(t, 0, 2): 1, arc_between(t, 0, 3): 1, arc_between(t, 0, 4): 0}
    counts, total = intersection_numbers(disc_curve(t, 2, 5), t)
    assert total == 2 and counts[arc_between(t, 0, 3)] == counts[arc_between(t, 0, 4)] == 1
    counts, total = intersection_numbers(Coincident(2 * arc_between(t, 0, 3)), t)
    assert total == 0 and not any(counts.values())


def test_first_crossed_arc_depends_on_orientation(hexagon):
    t = hexagon
    assert first_crossed_arc(disc_curve(t, 1, 4)) == arc_between(t, 0, 2)
    assert first_crossed_arc(disc_curve(t, 4, 1)) == arc_between(t, 0, 3)
    assert disc_curve(t, 4, 1) == reverse_trace(disc_curve(t, 1, 4))
    with pytest.raises(CurveError):
        first_crossed_arc(Coincident(2 * arc_between(t, 0, 3)))


def test_transport_drops_flipped_crossing(hexagon):
    t = hexagon
    t2, rec = flip(t, arc_between(t, 0, 2))
    assert set(t2.endpoints(rec.new_arc)) == {1, 3}
    out = transport(disc_curve(t, 1, 4), rec)
    assert crossed_diagonals(t2, out) == [(0, 3)]

    t2, rec = flip(t, arc_between(t, 0, 4))
    assert set(t2.endpoints(rec.new_arc)) == {3, 5}
    out = transport(disc_curve(t, 2, 5), rec)
    assert crossed_diagonals(t2, out) == [(0, 3)]


def test_transport_of_flipped_arc_crosses_new_arc(hexagon):
    t = hexagon
    k = arc_between(t, 0, 3)
    t2, rec = flip(t, k)
    out = transport(Coincident(2 * k), rec)
    assert isinstance(out, Transverse) and len(out.crossings) == 1
    assert set(t2.endpoints(out.crossings[0] >> 1)) == {2, 4}
    assert {t2.tail[out.start], t2.tail[out.end]} == {0, 3}
    assert transport(out, rec.inverse) == Coincident(2 * k)


def test_canonical_codes(hexagon):
    t = hexagon
    k02 = arc_between(t, 0, 2)
    t2, rec = flip(t, arc_between(t, 0, 4))
    assert canonical_code(k02, [rec]) == ArcCode(k02)
    t3, rec2 = flip(t, k02)
    code = canonical_code(rec2.new_arc, [rec2])
    assert code.arc == -1 and [h >> 1 for h in code.crossings] == [k02]
    assert canonical_code(k02, [], t) == ArcCode(k02)
    with pytest.raises(CurveError):
        canonical_code(k02, [])


def test_code_string_round_trip():
    for code in (ArcCode(3), ArcCode(-1, (4, 7, 12))):
        assert ArcCode.parse(str(code)) == code
    with pytest.raises(CurveError):
        ArcCode.parse("q1")


def test_trace_json_round_trip(hexagon):
    for tr in (disc_curve(hexagon, 1, 4), Coincident(14, True)):
        assert trace_from_dict(trace_to_dict(tr)) == tr
    with pytest.raises(CurveError):
        trace_from_dict({"start": 1})


def test_check_trace_rejects_inconsistent(hexagon):
    tr = disc_curve(hexagon, 1, 4)
    with pytest.raises(CurveError):
        check_trace(Transverse(tr.start, tr.crossings[::-1], tr.end), hexagon)


def test_null_homotopic_trace_is_rejected(hexagon):
    t = hexagon
    h = corner(t, (0, 2, 3), 2)
    into = side(t, (0, 3, 4), 0, 3)
    back = side(t, (0, 2, 3), 0, 3)
    with pytest.raises(CurveError):
        reduce(Transverse(h, (into, back), h), t)


# -- properties over random flip sequences -----------------------------------

SURFACES = {"disc7": generator_disc(7), "annulus22": generator_annulus(2, 2),
            "torus": generator_torus_one_boundary()}


def random_walk(t, choices):
    records = []
    for c in choices:
        arcs = t.internal_arcs
        t, rec = flip(t, arcs[c % len(arcs)])
        records.append(rec)
    return t, records


@settings(max_examples=60, deadline=None)
@given(name=st.sampled_from(sorted(SURFACES)), walk=st.lists(st.integers(0, 50), max_size=6),
       pick=st.integers(0, 50), reverse=st.booleans())
def test_transport_round_trip_and_reduction(name, walk, pick, reverse):
    t0 = SURFACES[name]
    t, records = random_walk(t0, walk)
    k = t.internal_arcs[pick % len(t.internal_arcs)]
    tr = Coincident(2 * k, reverse)
    base_tr = pull_back(tr, records)
    assert is_reduced(base_tr, t0)
    assert reduce(base_tr, t0) == base_tr
    assert transport_path(base_tr, records) == tr
    # reversing commutes with transport
    assert pull_back(reverse_trace(tr), records) == reverse_trace(base_tr)
    # code does not depend on orientation
    assert code_of_trace(base_tr) == code_of_trace(reverse_trace(base_tr))


@settings(max_examples=40, deadline=None)
@given(name=st.sampled_from(sorted(SURFACES)), walk=st.lists(st.integers(0, 50), max_size=5))
def test_codes_distinct_within_a_triangulation(name, walk):
    t0 = SURFACES[name]
    t, records = random_walk(t0, walk)
    codes = [canonical_code(k, records, t) for k in t.internal_arcs]
    assert len(set(codes)) == t.n
    # walking back the same way returns the base codes
    assert {canonical_code(k, [], t0) for k in t0.internal_arcs} == {ArcCode(k) for k in t0.internal_arcs}


@settings(max_examples=40, deadline=None)
@given(name=st.sampled_from(sorted(SURFACES)), walk=st.lists(st.integers(0, 50), min_size=1, max_size=5),
       pick=st.integers(0, 50))
def test_arc_survives_transport_unchanged(name, walk, pick):
    # an arc untouched by a flip stays the same arc
    t0 = SURFACES[name]
    t, records = random_walk(t0, walk)
    k = t.internal_arcs[pick % len(t.internal_arcs)]
    others = [a for a in t.internal_arcs if a != k]
    t2, rec = flip(t, others[pick % len(others)])
    assert transport(Coincident(2 * k), rec) == Coincident(2 * k)
