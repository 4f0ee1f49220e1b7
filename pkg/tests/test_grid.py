from collections import deque

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ftca.errors import TorusTooSmall
from ftca.grid import (CORRIDORS, QUADRANTS, Kind, Topology, ball, bfs_distances, corridor, diagonal,
                       diagonal_and_corridor_regions, disc, graph_distance, is_up, neighbors,
                       planar_disc_offsets, quadrant_triangle, semi_plane_arc)


def bfs(t, a):
    dist = {a: 0}
    q = deque([a])
    while q:
        v = q.popleft()
        for w in neighbors(t, v):
            if w not in dist:
                dist[w] = dist[v] + 1
                q.append(w)
    return dist


def test_square_neighbours_wrap():
    t = Topology.square(4)
    assert set(neighbors(t, (0, 0))) == {(3, 0), (1, 0), (0, 3), (0, 1)}


def test_triangular_neighbours_wrap():
    t = Topology(Kind.TRIANGULAR, 4, 8)
    assert is_up((0, 0))
    assert set(neighbors(t, (0, 0))) == {(0, 7), (0, 1), (1, 0)}
    # a down triangle points up
    assert set(neighbors(t, (0, 1))) == {(0, 0), (0, 2), (3, 1)}


def test_bad_topologies():
    with pytest.raises(ValueError):
        Topology(Kind.SQUARE, 3, 4)
    with pytest.raises(ValueError):
        Topology(Kind.TRIANGULAR, 3, 6)


topologies = st.one_of(
    st.integers(2, 12).map(Topology.square),
    st.integers(1, 8).map(lambda k: Topology.triangular(2 * k)),
)


@given(topologies, st.data())
def test_neighbour_symmetry_and_degree(t, data):
    r = data.draw(st.integers(0, t.rows - 1))
    c = data.draw(st.integers(0, t.cols - 1))
    nb = neighbors(t, (r, c))
    assert len(nb) == t.degree
    for v in nb:
        assert (r, c) in neighbors(t, v)


def test_distance_examples():
    t = Topology.square(100)
    assert graph_distance(t, (0, 0), (0, 0)) == 0
    assert graph_distance(t, (0, 0), (2, 3)) == 5
    tt = Topology(Kind.TRIANGULAR, 8, 16)
    assert graph_distance(tt, (0, 0), (2, 4)) == bfs(tt, (0, 0))[(2, 4)]


@given(topologies, st.data())
def test_distance_matches_bfs(t, data):
    a = (data.draw(st.integers(0, t.rows - 1)), data.draw(st.integers(0, t.cols - 1)))
    dist = bfs(t, a)
    for b in [(0, 0), (t.rows - 1, t.cols - 1), (t.rows // 2, t.cols // 3)]:
        assert graph_distance(t, a, b) == dist[b]


def test_discs():
    t = Topology.square(30)
    assert disc(t, (5, 5), 0) == {(5, 5)}
    assert disc(t, (5, 5), 1) == set(neighbors(t, (5, 5)))
    tt = Topology.triangular(32)
    dist = bfs(tt, (10, 10))
    for r in range(1, 6):
        assert len(disc(tt, (10, 10), r)) == sum(1 for d in dist.values() if d == r)


@given(topologies, st.integers(0, 6))
def test_disc_is_ball_difference(t, r):
    u = (t.rows // 2, t.cols // 2)
    inner = ball(t, u, r - 1) if r else frozenset()
    assert disc(t, u, r) == ball(t, u, r) - inner
    assert sum(len(disc(t, u, k)) for k in range(r + 1)) == len(ball(t, u, r))


def test_planar_offsets_match_torus_disc():
    t = Topology.triangular(32)
    for u in [(10, 10), (10, 11)]:
        for r in range(1, 8):
            off = planar_disc_offsets(Kind.TRIANGULAR, is_up(u), r)
            assert {t.canonical((u[0] + a, u[1] + b)) for a, b in off} == disc(t, u, r)


def _line_side(u, v, w):
    """Float-geometry oracle: side of w's centroid relative to v's, across the shared edge.

    Returns 1 same side, -1 opposite, 0 on the line.
    """
    import math
    h = math.sqrt(3) / 2

    def verts(cell):
        r, c = cell
        x = c / 2
        if is_up(cell):
            return [(x - .5, -h * (r + 1)), (x + .5, -h * (r + 1)), (x, -h * r)]
        return [(x - .5, -h * r), (x + .5, -h * r), (x, -h * (r + 1))]

    a, b = sorted(set(verts(u)) & set(verts(v)))

    def cen(cell):
        vs = verts(cell)
        return (sum(p[0] for p in vs) / 3, sum(p[1] for p in vs) / 3)

    def side(p):
        s = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
        return 0 if abs(s) < 1e-9 else (1 if s > 0 else -1)

    return side(cen(w)) * side(cen(v))


def test_semi_plane_arc_r2_geometric_oracle():
    t = Topology.triangular(32)
    u = (10, 10)
    for v in neighbors(t, u):
        arc = semi_plane_arc(t, u, v, 2)
        want = {w for w in disc(t, u, 2) if _line_side(u, v, w) == 1}
        assert arc == want


def test_semi_plane_arcs_cover_disc():
    t = Topology.triangular(32)
    for u in [(10, 10), (9, 10)]:
        for r in range(2, 9):
            arcs = [semi_plane_arc(t, u, v, r) for v in neighbors(t, u)]
            union = frozenset().union(*arcs)
            assert union <= disc(t, u, r)
            # only cells whose centroid sits on a cutting line are left out
            for w in disc(t, u, r) - union:
                assert any(_line_side(u, v, w) == 0 for v in neighbors(t, u))


def test_semi_plane_arc_guard():
    with pytest.raises(TorusTooSmall):
        semi_plane_arc(Topology.triangular(8), (0, 0), (0, 1), 4)


def test_diagonals_count():
    # d_I(k) = {(i, j): i + j = k, i, j > 0} has k - 1 cells
    for k in range(1, 7):
        assert len(diagonal("I", k)) == k - 1
    assert corridor("north", 3) == [(0, 1), (0, 2), (0, 3)]


def test_regions_tile_ball():
    for tau in range(1, 9):
        cells = {(0, 0)}
        for q in QUADRANTS:
            cells |= set(quadrant_triangle(q, tau))
        for name in CORRIDORS:
            cells |= set(corridor(name, tau))
        want = {(x, y) for x in range(-tau, tau + 1) for y in range(-tau, tau + 1) if abs(x) + abs(y) <= tau}
        assert cells == want
        total = 1 + sum(len(quadrant_triangle(q, tau)) for q in QUADRANTS) + 4 * tau
        assert total == len(want)


def test_regions_on_torus():
    t = Topology.square(20)
    reg = diagonal_and_corridor_regions(t, (3, 4), 5)
    b = ball(t, (3, 4), 5)
    for q in QUADRANTS:
        assert reg.triangles[q] <= b
        for k, d in enumerate(reg.diagonals[q], start=1):
            assert d <= disc(t, (3, 4), k)
    assert reg.corridors["north"] == {((3 - i) % 20, 4) for i in range(1, 6)}
    with pytest.raises(TorusTooSmall):
        diagonal_and_corridor_regions(Topology.square(12), (0, 0), 5)


def test_bfs_multi_source():
    t = Topology.square(9)
    d = bfs_distances(t, [(0, 0), (4, 4)])
    assert d[0, 0] == 0 and d[4, 4] == 0
    assert d[2, 2] == 4
    assert np.all(d >= 0)
