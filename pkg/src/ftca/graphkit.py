"""Graph algorithms on grid-induced subgraphs.

The graph is the torus adjacency restricted to a vertex mask, as a
multigraph: on very small tori a cell can meet the same neighbour twice,
and the edge is then counted twice, exactly as the neighbour sum does.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

import numpy as np
from numba import njit
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .config import Configuration
from .errors import EmptySources, NotATree, NotInGraph
from .grid import Cell, Topology, bfs_distances


@dataclass(frozen=True, eq=False)
class InducedGraph:
    topology: Topology
    mask: np.ndarray  # (rows, cols) bool, True = vertex

    def __post_init__(self):
        m = np.asarray(self.mask, dtype=bool)
        if m.shape != self.topology.shape:
            raise ValueError(f"mask shape {m.shape} != {self.topology.shape}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "mask", m)

    @classmethod
    def inactive(cls, c: Configuration) -> "InducedGraph":
        """G[0]: the cells that are inactive in c."""
        return cls(c.topology, c.states == 0)

    @classmethod
    def of(cls, t: Topology, cells: Iterable[Cell]) -> "InducedGraph":
        m = np.zeros(t.shape, bool)
        for cell in cells:
            m[t.canonical(cell)] = True
        return cls(t, m)

    def __contains__(self, cell) -> bool:
        return bool(self.mask[self.topology.canonical(cell)])

    @property
    def flat_mask(self) -> np.ndarray:
        return self.mask.ravel()

    def vertices(self) -> frozenset:
        return frozenset(self.topology.cell(i) for i in np.flatnonzero(self.flat_mask))

    def degrees(self) -> np.ndarray:
        """Flat array of induced degrees (0 for non-vertices)."""
        nbr = self.topology.neighbor_table()
        m = self.flat_mask
        return np.where(m, m[nbr].sum(axis=1), 0)

    def graph_neighbors(self, idx: int) -> list[int]:
        nbr = self.topology.neighbor_table()
        return [int(j) for j in nbr[idx] if self.flat_mask[j]]

    @cached_property
    def labels(self) -> np.ndarray:
        """Flat component labels; -1 outside the vertex set."""
        nbr = self.topology.neighbor_table()
        m = self.flat_mask
        n = m.size
        rows = np.repeat(np.arange(n), nbr.shape[1])
        cols = nbr.ravel()
        keep = m[rows] & m[cols]
        a = csr_matrix((np.ones(int(keep.sum()), np.int8), (rows[keep], cols[keep])), shape=(n, n))
        _, lab = connected_components(a, directed=False)
        return np.where(m, lab, -1)

    def _index(self, cell: Cell) -> int:
        idx = self.topology.index(cell)
        if not self.flat_mask[idx]:
            raise NotInGraph(f"{cell} is not a vertex")
        return idx


def connected_component_of(g: InducedGraph, u: Cell) -> frozenset:
    idx = g._index(u)
    members = np.flatnonzero(g.labels == g.labels[idx])
    return frozenset(g.topology.cell(i) for i in members)


def _edge_count(g: InducedGraph, idx: np.ndarray) -> int:
    nbr = g.topology.neighbor_table()
    inside = np.zeros(g.flat_mask.size, bool)
    inside[idx] = True
    return int(inside[nbr[idx]].sum()) // 2


def has_cycle(g: InducedGraph, component: Iterable[Cell]) -> bool:
    """A connected multigraph is cyclic iff it has at least as many edges as vertices."""
    t = g.topology
    idx = np.array(sorted({t.index(c) for c in component}), dtype=np.int64)
    if idx.size == 0:
        return False
    return _edge_count(g, idx) >= idx.size


def cyclic_components(g: InducedGraph) -> np.ndarray:
    """Flat bool: vertex lies in a component containing a cycle."""
    lab = g.labels
    m = g.flat_mask
    if not m.any():
        return np.zeros_like(m)
    k = lab.max() + 1
    verts = np.bincount(lab[m], minlength=k)
    # each edge is seen from both endpoints
    deg = g.degrees()
    edges2 = np.bincount(lab[m], weights=deg[m], minlength=k)
    cyc = edges2 / 2 >= verts
    return m & cyc[np.where(m, lab, 0)]


@njit(cache=True)
def _peel(nbr, alive, k):
    n = alive.size
    deg = np.zeros(n, np.int64)
    stack = np.empty(n, np.int64)
    top = 0
    for v in range(n):
        if alive[v]:
            for j in range(nbr.shape[1]):
                if alive[nbr[v, j]]:
                    deg[v] += 1
    for v in range(n):
        if alive[v] and deg[v] < k:
            alive[v] = False
            stack[top] = v
            top += 1
    while top > 0:
        top -= 1
        v = stack[top]
        for j in range(nbr.shape[1]):
            w = nbr[v, j]
            if alive[w]:
                deg[w] -= 1
                if deg[w] < k:
                    alive[w] = False
                    stack[top] = w
                    top += 1
    return alive


def k_core_mask(g: InducedGraph, k: int) -> np.ndarray:
    """Flat bool mask of the k-core, by worklist pruning."""
    alive = g.flat_mask.copy()
    return _peel(g.topology.neighbor_table(), alive, k)


def k_core_rounds(g: InducedGraph, k: int) -> np.ndarray:
    """Same set as ``k_core_mask`` but pruned in synchronous rounds (numpy only)."""
    nbr = g.topology.neighbor_table()
    alive = g.flat_mask.copy()
    while True:
        deg = alive[nbr].sum(axis=1)
        drop = alive & (deg < k)
        if not drop.any():
            return alive
        alive &= ~drop


def k_core(g: InducedGraph, k: int) -> frozenset:
    if k not in (2, 3):
        raise ValueError("only the 2-core and 3-core are used")
    t = g.topology
    return frozenset(t.cell(i) for i in np.flatnonzero(k_core_mask(g, k)))


@dataclass(frozen=True)
class RootedTreeDepths:
    root: Cell
    child_subtree_depth: dict = field(default_factory=dict)  # neighbour -> depth or None

    def sorted_depths(self) -> list:
        """Depths of present children, largest first."""
        return sorted((d for d in self.child_subtree_depth.values() if d is not None), reverse=True)


def _branch_height(g: InducedGraph, root: int, start: int, stop: Optional[np.ndarray] = None):
    """Height of the branch hanging from ``root`` through ``start``.

    Returns None when the branch reaches a vertex flagged in ``stop``
    (used to detect branches that lead into the 2-core).
    """
    nbr = g.topology.neighbor_table()
    m = g.flat_mask
    seen = {root, start}
    frontier = [start]
    h = 0
    if stop is not None and stop[start]:
        return None
    while True:
        nxt = []
        for v in frontier:
            for w in nbr[v]:
                w = int(w)
                if m[w] and w not in seen:
                    if stop is not None and stop[w]:
                        return None
                    seen.add(w)
                    nxt.append(w)
        if not nxt:
            return h
        h += 1
        frontier = nxt


def subtree_depths(g: InducedGraph, root: Cell) -> RootedTreeDepths:
    t = g.topology
    idx = g._index(root)
    comp = np.flatnonzero(g.labels == g.labels[idx])
    if _edge_count(g, comp) >= comp.size:
        raise NotATree(f"the component of {root} contains a cycle")
    out = {}
    for w in t.neighbor_table()[idx]:
        w = int(w)
        cell = t.cell(w)
        out[cell] = _branch_height(g, idx, w) if g.flat_mask[w] else None
    return RootedTreeDepths(t.canonical(root), out)


def distance_field(t: Topology, sources: Iterable[Cell]) -> np.ndarray:
    src = list(sources)
    if not src:
        raise EmptySources("distance field needs at least one source")
    return bfs_distances(t, src)
