import pytest

from markedflip.surface import generator_disc


def arc_between(t, u, v):
    """Internal arc of a disc triangulation joining marked points u and v."""
    found = [k for k in t.internal_arcs if set(t.endpoints(k)) == {u, v}]
    assert len(found) == 1, (u, v, found)
    return found[0]


def diagonals(t):
    return {tuple(sorted(t.endpoints(k))) for k in t.internal_arcs}


@pytest.fixture
def hexagon():
    return generator_disc(6)


def triangle_with(t, verts):
    verts = set(verts)
    found = [tri for tri in t.triangles if {t.tail[h] for h in tri} == verts]
    assert len(found) == 1
    return found[0]


def corner(t, verts, v):
    """Half-edge leaving marked point v inside the triangle with vertex set verts."""
    return next(h for h in triangle_with(t, verts) if t.tail[h] == v)


def side(t, verts, u, v):
    """Half-edge of the triangle with vertex set verts joining u and v."""
    return next(h for h in triangle_with(t, verts) if {t.tail[h], t.head(h)} == {u, v})


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
