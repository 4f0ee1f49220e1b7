"""Grid geometry for the triangular and square von Neumann tori.

Cells are addressed as ``(row, col)`` pairs. On the triangular grid a cell
points up when ``row + col`` is even; up cells touch the row below, down
cells touch the row above. Both grids wrap around in each direction.

Planar helpers (``*_offsets``) work in unwrapped coordinates around a cell
and never wrap; the region functions map them onto the torus and refuse
when the torus is too small for the map to be injective.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

import numpy as np

from .errors import TorusTooSmall

Cell = tuple[int, int]


class Kind(str, enum.Enum):
    TRIANGULAR = "tri"
    SQUARE = "sq"


@dataclass(frozen=True)
class Topology:
    kind: Kind
    rows: int
    cols: int

    def __post_init__(self):
        if self.rows <= 0 or self.cols <= 0:
            raise ValueError("grid dimensions must be positive")
        if self.kind is Kind.SQUARE and self.rows != self.cols:
            raise ValueError("square topology must be n x n")
        if self.kind is Kind.TRIANGULAR and (self.rows % 2 or self.cols % 2):
            # odd periods would glue an up triangle onto a down one
            raise ValueError("triangular topology needs even rows and cols")

    @classmethod
    def square(cls, n: int) -> "Topology":
        return cls(Kind.SQUARE, n, n)

    @classmethod
    def triangular(cls, n: int) -> "Topology":
        """n rows of 2n triangles (n must be even, see config.parse for odd n)."""
        return cls(Kind.TRIANGULAR, n, 2 * n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def size(self) -> int:
        return self.rows * self.cols

    @property
    def degree(self) -> int:
        return 3 if self.kind is Kind.TRIANGULAR else 4

    def canonical(self, cell: Cell) -> Cell:
        return (cell[0] % self.rows, cell[1] % self.cols)

    def index(self, cell: Cell) -> int:
        r, c = self.canonical(cell)
        return r * self.cols + c

    def cell(self, idx: int) -> Cell:
        return divmod(int(idx), self.cols)

    def cells(self) -> Iterator[Cell]:
        for r in range(self.rows):
            for c in range(self.cols):
                yield (r, c)

    def neighbor_table(self) -> np.ndarray:
        """(size, degree) array of flat neighbour indices, read-only."""
        return _neighbor_table(self)


def is_up(cell: Cell) -> bool:
    return (cell[0] + cell[1]) % 2 == 0


def planar_neighbors(kind: Kind, cell: Cell) -> list[Cell]:
    """Neighbours in unwrapped coordinates."""
    r, c = cell
    if kind is Kind.SQUARE:
        return [(r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)]
    vertical = (r + 1, c) if is_up(cell) else (r - 1, c)
    return [(r, c - 1), (r, c + 1), vertical]


def neighbors(t: Topology, cell: Cell) -> list[Cell]:
    return [t.canonical(v) for v in planar_neighbors(t.kind, t.canonical(cell))]


@lru_cache(maxsize=64)
def _neighbor_table(t: Topology) -> np.ndarray:
    r, c = np.divmod(np.arange(t.size), t.cols)
    if t.kind is Kind.SQUARE:
        dr = np.array([-1, 1, 0, 0])
        dc = np.array([0, 0, -1, 1])
        nr = (r[:, None] + dr) % t.rows
        nc = (c[:, None] + dc) % t.cols
    else:
        up = (r + c) % 2 == 0
        vr = np.where(up, r + 1, r - 1)
        nr = np.stack([r, r, vr], axis=1) % t.rows
        nc = np.stack([c - 1, c + 1, c], axis=1) % t.cols
    table = nr * t.cols + nc
    table.setflags(write=False)
    return table


def bfs_distances(t: Topology, sources: Iterable[Cell]) -> np.ndarray:
    """Multi-source torus BFS; returns a (rows, cols) int array, -1 if unreachable."""
    nbr = t.neighbor_table()
    dist = np.full(t.size, -1, dtype=np.int64)
    frontier = np.unique([t.index(s) for s in sources]).astype(np.int64)
    d = 0
    dist[frontier] = 0
    while frontier.size:
        d += 1
        cand = nbr[frontier].ravel()
        cand = np.unique(cand[dist[cand] < 0])
        dist[cand] = d
        frontier = cand
    return dist.reshape(t.shape)


def graph_distance(t: Topology, a: Cell, b: Cell) -> int:
    a, b = t.canonical(a), t.canonical(b)
    if t.kind is Kind.SQUARE:
        dr = abs(a[0] - b[0])
        dc = abs(a[1] - b[1])
        return min(dr, t.rows - dr) + min(dc, t.cols - dc)
    return int(bfs_distances(t, [a])[b])


def _as_region(cells: Iterable[Cell]) -> frozenset[Cell]:
    return frozenset(cells)


def disc(t: Topology, u: Cell, r: int) -> frozenset[Cell]:
    """D_r(u): cells at distance exactly r."""
    dist = bfs_distances(t, [u])
    return _as_region(map(tuple, np.argwhere(dist == r).tolist()))


def ball(t: Topology, u: Cell, r: int) -> frozenset[Cell]:
    dist = bfs_distances(t, [u])
    return _as_region(map(tuple, np.argwhere((dist >= 0) & (dist <= r)).tolist()))


# planar discs -----------------------------------------------------------

@lru_cache(maxsize=4096)
def planar_disc_offsets(kind: Kind, up: bool, r: int) -> tuple[Cell, ...]:
    """Offsets (dr, dc) at planar distance exactly r from a cell.

    On the triangular grid the shape depends on the orientation of the
    centre; the offsets are taken from the origin (0,0) when ``up`` else
    from (0,1), then shifted, which keeps parities consistent.
    """
    if kind is Kind.SQUARE:
        if r == 0:
            return ((0, 0),)
        out = []
        for k in range(r):
            out += [(-r + k, k), (k, r - k), (r - k, -k), (-k, -r + k)]
        return tuple(sorted(out))
    origin = (0, 0) if up else (0, 1)
    seen = {origin: 0}
    q = deque([origin])
    while q:
        v = q.popleft()
        if seen[v] == r:
            continue
        for w in planar_neighbors(kind, v):
            if w not in seen:
                seen[w] = seen[v] + 1
                q.append(w)
    return tuple(sorted((a - origin[0], b - origin[1]) for (a, b), d in seen.items() if d == r))


def _tri_vertices(cell: Cell) -> list[tuple[int, int]]:
    # integer coordinates: X = 2x, Y = 3y/h with h the triangle height
    r, c = cell
    if is_up(cell):
        return [(c - 1, -3 * (r + 1)), (c + 1, -3 * (r + 1)), (c, -3 * r)]
    return [(c - 1, -3 * r), (c + 1, -3 * r), (c, -3 * (r + 1))]


def tri_centroid(cell: Cell) -> tuple[int, int]:
    """Centroid in the integer frame of ``_tri_vertices``."""
    r, c = cell
    return (c, -3 * r - 2) if is_up(cell) else (c, -3 * r - 1)


def _side(a, b, p) -> int:
    cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
    return (cross > 0) - (cross < 0)


def semi_plane_offsets(up: bool, k: int, r: int) -> tuple[Cell, ...]:
    """Planar S_v ∩ D_r(u) as offsets, v being neighbour number k of u.

    Neighbour numbering follows ``planar_neighbors``: 0 left, 1 right,
    2 vertical. A cell belongs to the arc when its centroid lies strictly
    on v's side of the line through the edge shared by u and v.
    """
    origin = (0, 0) if up else (0, 1)
    v = planar_neighbors(Kind.TRIANGULAR, origin)[k]
    a, b = sorted(set(_tri_vertices(origin)) & set(_tri_vertices(v)))
    want = _side(a, b, tri_centroid(v))
    out = []
    for d in planar_disc_offsets(Kind.TRIANGULAR, up, r):
        w = (origin[0] + d[0], origin[1] + d[1])
        if _side(a, b, tri_centroid(w)) == want:
            out.append(d)
    return tuple(out)


def semi_plane_arc(t: Topology, u: Cell, v: Cell, r: int) -> frozenset[Cell]:
    """S_v ∩ D_r(u) on the torus; v must be a neighbour of u."""
    if t.kind is not Kind.TRIANGULAR:
        raise ValueError("semi-plane arcs are defined on the triangular grid")
    if r < 1:
        raise ValueError("radius must be positive")
    if 2 * r + 2 > t.rows or 2 * r + 2 > t.cols:
        raise TorusTooSmall(f"radius {r} does not fit a {t.rows}x{t.cols} torus")
    u = t.canonical(u)
    nb = neighbors(t, u)
    if t.canonical(v) not in nb:
        raise ValueError(f"{v} is not a neighbour of {u}")
    k = nb.index(t.canonical(v))
    return _as_region(t.canonical((u[0] + dr, u[1] + dc))
                      for dr, dc in semi_plane_offsets(is_up(u), k, r))


# square-grid regions, u-centred (x east, y north) --------------------------

QUADRANTS = ("I", "II", "III", "IV")
_QSIGN = {"I": (1, 1), "II": (-1, 1), "III": (-1, -1), "IV": (1, -1)}
CORRIDORS = ("north", "west", "south", "east")
_CDIR = {"north": (0, 1), "west": (-1, 0), "south": (0, -1), "east": (1, 0)}


def xy_to_offset(x: int, y: int) -> Cell:
    """u-centred (x east, y north) to a (drow, dcol) offset."""
    return (-y, x)


def diagonal(quadrant: str, k: int) -> list[tuple[int, int]]:
    """d_Q(k): cells of quadrant Q at distance k with both coordinates nonzero."""
    sx, sy = _QSIGN[quadrant]
    return [(sx * i, sy * (k - i)) for i in range(1, k)]


def quadrant_triangle(quadrant: str, tau: int) -> list[tuple[int, int]]:
    sx, sy = _QSIGN[quadrant]
    return [(sx * i, sy * j) for i in range(1, tau) for j in range(1, tau - i + 1)]


def corridor(name: str, tau: int) -> list[tuple[int, int]]:
    dx, dy = _CDIR[name]
    return [(dx * i, dy * i) for i in range(1, tau + 1)]


@dataclass(frozen=True)
class SquareRegions:
    diagonals: dict  # quadrant -> list of regions for k = 1..tau
    corridors: dict  # name -> region
    triangles: dict  # quadrant -> region


def diagonal_and_corridor_regions(t: Topology, u: Cell, tau: int) -> SquareRegions:
    """Diagonals, corridors and quadrant triangles of B_tau(u) mapped to the torus."""
    if t.kind is not Kind.SQUARE:
        raise ValueError("corridor regions are defined on the square grid")
    if 2 * tau + 4 > t.rows:
        raise TorusTooSmall(f"tau={tau} does not fit an n={t.rows} torus")

    def place(pts):
        return _as_region(t.canonical((u[0] + o[0], u[1] + o[1]))
                          for o in (xy_to_offset(x, y) for x, y in pts))

    return SquareRegions(
        diagonals={q: [place(diagonal(q, k)) for k in range(1, tau + 1)] for q in QUADRANTS},
        corridors={name: place(corridor(name, tau)) for name in CORRIDORS},
        triangles={q: place(quadrant_triangle(q, tau)) for q in QUADRANTS},
    )
