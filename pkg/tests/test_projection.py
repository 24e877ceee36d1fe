import pytest

from markedflip.curves import Coincident, CurveError, Transverse, disc_curve
from markedflip.projection import IncompatibleArcs, project, project_multi, watchdog_bound, weight
from markedflip.surface import disc_triangulation, generator_annulus, generator_torus_one_boundary

from conftest import arc_between, corner, diagonals, side


def test_weight_examples(hexagon):
    assert weight(hexagon, disc_curve(hexagon, 1, 4)) == 1
    t = disc_triangulation(6, [(1, 3), (0, 3), (0, 4)])
    assert weight(t, disc_curve(t, 1, 4)) == 0
    assert weight(hexagon, Coincident(2 * arc_between(hexagon, 0, 3))) == 0


def test_project_fan_one_to_four(hexagon):
    t = hexagon
    res = project(t, disc_curve(t, 1, 4))
    flipped = [tuple(sorted(r.before.endpoints(r.old_arc))) for r in res.flip_sequence]
    assert flipped == [(0, 2), (0, 3)]
    assert diagonals(res.final_triangulation) == {(1, 3), (1, 4), (0, 4)}
    assert res.measure_trace == [1, 0, 0]
    assert not res.anomalies
    assert isinstance(res.final_curve, Coincident)
    assert set(res.final_triangulation.endpoints(res.final_curve.arc)) == {1, 4}


def test_project_orientations_differ(hexagon):
    res = project(hexagon, disc_curve(hexagon, 4, 1))
    assert diagonals(res.final_triangulation) == {(0, 4), (1, 4), (2, 4)}


def test_project_present_arc_is_identity(hexagon):
    res = project(hexagon, Coincident(2 * arc_between(hexagon, 0, 3)))
    assert res.flips == 0 and res.final_triangulation == hexagon
    assert res.measure_trace == [0]


def test_project_one_flip():
    t = disc_triangulation(6, [(1, 3), (0, 3), (0, 4)])
    res = project(t, disc_curve(t, 1, 4))
    assert [tuple(sorted(r.before.endpoints(r.old_arc))) for r in res.flip_sequence] == [(0, 3)]
    assert diagonals(res.final_triangulation) == {(1, 3), (1, 4), (0, 4)}


def test_project_requires_reduced(hexagon):
    t = hexagon
    tr = Transverse(corner(t, (0, 2, 3), 2), (side(t, (0, 3, 4), 0, 3), side(t, (0, 2, 3), 0, 3)),
                    corner(t, (0, 3, 4), 4))
    with pytest.raises(CurveError):
        project(t, tr)


def test_project_multi(hexagon):
    t = hexagon
    res = project_multi(t, [disc_curve(t, 1, 4), disc_curve(t, 1, 3)])
    assert {(1, 3), (1, 4)} <= diagonals(res.final_triangulation)
    same = project_multi(t, [Coincident(2 * k) for k in t.internal_arcs])
    assert same.final_triangulation == t and not same.flip_sequence
    with pytest.raises(IncompatibleArcs):
        project_multi(t, [disc_curve(t, 1, 3), disc_curve(t, 2, 4)])


def test_watchdog_scales_with_crossings(hexagon):
    tr = disc_curve(hexagon, 1, 4)
    assert watchdog_bound(hexagon, tr) == 3 * 4


@pytest.mark.parametrize("t", [generator_annulus(2, 2), generator_torus_one_boundary()],
                         ids=["annulus22", "torus"])
def test_project_every_neighbor_arc(t):
    # the arc created by a flip, pulled back, projects in exactly one flip
    from markedflip.curves import transport
    from markedflip.surface import flip
    for k in t.internal_arcs:
        t2, rec = flip(t, k)
        gamma = transport(Coincident(2 * rec.new_arc), rec.inverse)
        res = project(t, gamma)
        assert res.flips == 1 and res.final_triangulation == t2
