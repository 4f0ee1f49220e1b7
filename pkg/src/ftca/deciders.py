"""Fast stability deciders, one per rule class, and the dispatcher.

All deciders read the torus configuration as the periodic configuration
of the plane it stands for: a planar offset around u is looked up modulo
the torus size. The planar arguments therefore apply at every radius and
no size guard is needed here (the region helpers in ``grid`` keep theirs).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit

from . import engine
from .config import Configuration
from .errors import CellInitiallyActive, GridMismatch
from .graphkit import InducedGraph, _branch_height, k_core_mask
from .grid import Cell, Kind, is_up, planar_disc_offsets, semi_plane_offsets
from .rules import Rule, RuleClass, classify
from .verdict import Method, StabilityVerdict

INF = math.inf


@dataclass(frozen=True, eq=False)
class DecisionTable:
    """Verdicts for every cell of one configuration.

    ``time`` holds the activation time, 0 for initially active cells and
    -1 where the cell is stable or the method does not compute a time.
    """
    stable: np.ndarray  # (rows, cols) bool, False on initially active cells
    time: np.ndarray
    method: Method

    def verdict(self, cell: Cell) -> StabilityVerdict:
        if self.stable[cell]:
            return StabilityVerdict.stable_by(self.method)
        t = int(self.time[cell])
        return StabilityVerdict.active_at(t if t >= 0 else None, self.method)


def _check(r: Rule, c: Configuration, u: Cell):
    if r.grid_kind is not c.topology.kind:
        raise GridMismatch(f"rule {r} on a {c.topology.kind.value} configuration")
    if c[u]:
        raise CellInitiallyActive(f"cell {u} is active in the initial configuration")


# distance to the nearest active cell -----------------------------------------

def nearest_active_distance(c: Configuration, u: Cell) -> int:
    """tau(u); -1 when the configuration has no active cell."""
    t = c.topology
    if not c.states.any():
        return -1
    u = t.canonical(u)
    if t.kind is Kind.SQUARE:
        act = np.argwhere(c.states == 1)
        dr = np.abs(act[:, 0] - u[0])
        dc = np.abs(act[:, 1] - u[1])
        return int((np.minimum(dr, t.rows - dr) + np.minimum(dc, t.cols - dc)).min())
    up = is_up(u)
    d = 0
    while True:
        for dr, dc in planar_disc_offsets(Kind.TRIANGULAR, up, d):
            if c.states[(u[0] + dr) % t.rows, (u[1] + dc) % t.cols]:
                return d
        d += 1


def _distance_field(c: Configuration) -> np.ndarray:
    from .grid import bfs_distances
    act = np.argwhere(c.states == 1)
    if act.size == 0:
        return np.full(c.topology.shape, -1, np.int64)
    return bfs_distances(c.topology, map(tuple, act.tolist()))


# trivial rules ---------------------------------------------------------------

def decide_trivial(r: Rule, c: Configuration, u: Cell) -> StabilityVerdict:
    _check(r, c, u)
    name = r.name
    if name == "phi":
        return StabilityVerdict.stable_by(Method.TRIVIAL)
    if name in ("123", "1234"):
        tau = nearest_active_distance(c, u)
        if tau < 0:
            return StabilityVerdict.stable_by(Method.TRIVIAL)
        return StabilityVerdict.active_at(tau, Method.TRIVIAL)
    # rule 3 (tri) / 4 (sq): only a full neighbourhood at time 0 fires
    s = sum(c[v] for v in _nbrs(c, u))
    if s in r.activating_sums:
        return StabilityVerdict.active_at(1, Method.TRIVIAL)
    return StabilityVerdict.stable_by(Method.TRIVIAL)


def _nbrs(c: Configuration, u: Cell) -> list[Cell]:
    t = c.topology
    return [t.cell(j) for j in t.neighbor_table()[t.index(u)]]


def _trivial_all(r: Rule, c: Configuration) -> DecisionTable:
    inactive = c.states == 0
    time = np.where(inactive, -1, 0).astype(np.int64)
    if r.name == "phi":
        return DecisionTable(inactive, time, Method.TRIVIAL)
    if r.name in ("123", "1234"):
        d = _distance_field(c)
        if (d < 0).all():
            return DecisionTable(inactive, time, Method.TRIVIAL)
        return DecisionTable(np.zeros_like(inactive), d, Method.TRIVIAL)
    fire = inactive & r.lookup()[engine.neighbor_sums(c)]
    time[fire] = 1
    return DecisionTable(inactive & ~fire, time, Method.TRIVIAL)


# topological rules -----------------------------------------------------------

_MAJORITY = {(Kind.TRIANGULAR, "23"), (Kind.SQUARE, "34")}
_EXACT = {(Kind.TRIANGULAR, "2"), (Kind.SQUARE, "3")}


class _Topo:
    """Shared state for the tree-based deciders on one configuration."""

    def __init__(self, c: Configuration):
        self.c = c
        self.g = InducedGraph.inactive(c)
        self.core = k_core_mask(self.g, 2)
        self.nbr = c.topology.neighbor_table()

    def arrival_times(self, idx: int) -> list:
        """When each neighbour of u would be active if u stayed inactive.

        Active neighbours have already arrived (0); a branch leading into
        the 2-core never arrives; a finite branch of height h arrives at h+1.
        """
        out = []
        for w in self.nbr[idx]:
            w = int(w)
            if not self.g.flat_mask[w]:
                out.append(0)
            elif self.core[w]:
                out.append(INF)
            else:
                h = _branch_height(self.g, idx, w, stop=self.core)
                out.append(INF if h is None else h + 1)
        return sorted(out)


def _threshold(c: Configuration) -> int:
    # neighbours that must be active: 2 of 3 on triangles, 3 of 4 on squares
    return 2 if c.topology.kind is Kind.TRIANGULAR else 3


def _topo_verdict(exact: bool, topo: _Topo, idx: int) -> StabilityVerdict:
    k = _threshold(topo.c)
    method = Method.TREE_DEPTH if exact else Method.TWO_CORE
    if topo.core[idx]:
        return StabilityVerdict.stable_by(method)
    a = topo.arrival_times(idx)
    if exact and a[k - 1] == a[k]:
        # the k-th and (k+1)-th waves land together: the sum jumps over k
        return StabilityVerdict.stable_by(method)
    if a[k - 1] == INF:
        return StabilityVerdict.stable_by(method)
    return StabilityVerdict.active_at(int(a[k - 1]) + 1, method)


def decide_topological_majority(r: Rule, c: Configuration, u: Cell) -> StabilityVerdict:
    _check(r, c, u)
    topo = _Topo(c)
    return _topo_verdict(False, topo, c.topology.index(u))


def decide_topological_treedepth(r: Rule, c: Configuration, u: Cell) -> StabilityVerdict:
    _check(r, c, u)
    topo = _Topo(c)
    return _topo_verdict(True, topo, c.topology.index(u))


def decide_topological_234(r: Rule, c: Configuration, u: Cell) -> StabilityVerdict:
    _check(r, c, u)
    core = k_core_mask(InducedGraph.inactive(c), 3)
    if core[c.topology.index(u)]:
        return StabilityVerdict.stable_by(Method.THREE_CORE)
    return StabilityVerdict.active_at(None, Method.THREE_CORE)


def _topo_all(r: Rule, c: Configuration) -> DecisionTable:
    key = (r.grid_kind, r.name)
    if key == (Kind.SQUARE, "234"):
        core = k_core_mask(InducedGraph.inactive(c), 3).reshape(c.topology.shape)
        time = np.where(c.states == 1, 0, -1).astype(np.int64)
        return DecisionTable(core, time, Method.THREE_CORE)
    exact = key in _EXACT
    topo = _Topo(c)
    stable = np.zeros(c.topology.size, bool)
    time = np.where(c.flat == 1, 0, -1).astype(np.int64)
    for idx in np.flatnonzero(c.flat == 0):
        v = _topo_verdict(exact, topo, int(idx))
        stable[idx] = v.stable
        if not v.stable:
            time[idx] = v.activation_time
    shape = c.topology.shape
    return DecisionTable(stable.reshape(shape), time.reshape(shape),
                         Method.TREE_DEPTH if exact else Method.TWO_CORE)


def decide_topological(r: Rule, c: Configuration, u: Cell) -> StabilityVerdict:
    key = (r.grid_kind, r.name)
    if key in _MAJORITY:
        return decide_topological_majority(r, c, u)
    if key in _EXACT:
        return decide_topological_treedepth(r, c, u)
    return decide_topological_234(r, c, u)


# algebraic rule 12 on the triangular grid -----------------------------------

def _marked_neighbours(c: Configuration, u: Cell, tau: int) -> list[bool]:
    """For each neighbour v: is there an active cell in S_v ∩ D_tau(u)?"""
    t = c.topology
    up = is_up(u)
    out = []
    for k in range(3):
        offs = np.array(semi_plane_offsets(up, k, tau), dtype=np.int64).reshape(-1, 2)
        rr = (u[0] + offs[:, 0]) % t.rows
        cc = (u[1] + offs[:, 1]) % t.cols
        out.append(bool(c.states[rr, cc].any()))
    return out


def decide_algebraic_12_tri(r: Rule, c: Configuration, u: Cell) -> StabilityVerdict:
    _check(r, c, u)
    u = c.topology.canonical(u)
    tau = nearest_active_distance(c, u)
    if tau < 0:
        return StabilityVerdict.stable_by(Method.SEMI_PLANE)
    if all(_marked_neighbours(c, u, tau)):
        # all three neighbours light up together at tau-1: sum 0 -> 3
        return StabilityVerdict.stable_by(Method.SEMI_PLANE)
    return StabilityVerdict.active_at(tau, Method.SEMI_PLANE)


def _tri12_all(c: Configuration) -> DecisionTable:
    t = c.topology
    d = _distance_field(c)
    stable = c.states == 0
    time = np.where(c.states == 1, 0, -1).astype(np.int64)
    if (d < 0).all():
        return DecisionTable(stable, time, Method.SEMI_PLANE)
    rows, cols = np.nonzero(c.states == 0)
    ups = (rows + cols) % 2 == 0
    taus = d[rows, cols]
    # group cells by (orientation, tau) so each arc is gathered in one shot
    for up in (True, False):
        for tau in np.unique(taus[ups == up]):
            sel = (ups == up) & (taus == tau)
            rr, cc = rows[sel], cols[sel]
            marked = np.ones(rr.size, bool)
            for k in range(3):
                offs = np.array(semi_plane_offsets(up, k, int(tau)), dtype=np.int64).reshape(-1, 2)
                hit = c.states[(rr[:, None] + offs[:, 0]) % t.rows, (cc[:, None] + offs[:, 1]) % t.cols]
                marked &= hit.any(axis=1)
            stable[rr, cc] = marked
            time[rr[~marked], cc[~marked]] = tau
    return DecisionTable(stable, time, Method.SEMI_PLANE)


# algebraic rules on the square grid -------------------------------------------

# corridor directions (drow, dcol): north, west, south, east
_DIRS = np.array([[-1, 0], [0, -1], [1, 0], [0, 1]], dtype=np.int64)


@njit(cache=True)
def _corridor_endpoints(x, r0, c0, tau, lut, out):
    """States of the four neighbours of (r0, c0) at time tau-1.

    Walks each corridor inwards from its far end. The two side cells of
    corridor cell i are quadrant cells; each equals the OR of the
    distance-tau diagonal cells of its quadrant that dominate it, so the
    sides are running ORs as i decreases.
    """
    R, C = x.shape
    for d in range(4):
        ar, ac = _DIRS[d, 0], _DIRS[d, 1]
        pr, pc = ac, -ar  # one perpendicular, the other is its negative
        val = x[(r0 + tau * ar) % R, (c0 + tau * ac) % C]
        s1 = 0
        s2 = 0
        for i in range(tau - 1, 0, -1):
            j = tau - i
            s1 |= x[(r0 + i * ar + j * pr) % R, (c0 + i * ac + j * pc) % C]
            s2 |= x[(r0 + i * ar - j * pr) % R, (c0 + i * ac - j * pc) % C]
            val = lut[val + s1 + s2]
        out[d] = val
    return out


def corridor_endpoints(r: Rule, c: Configuration, u: Cell, tau: int) -> np.ndarray:
    """States at time tau-1 of the north, west, south and east neighbours of u."""
    out = np.zeros(4, np.uint8)
    lut = r.lookup().astype(np.uint8)
    u = c.topology.canonical(u)
    return _corridor_endpoints(c.states, u[0], u[1], tau, lut, out)


@dataclass(frozen=True)
class CorridorAnalysis:
    """One corridor of u, read as a chain of switches.

    Scanning from the far end is what the fold does; the same result
    follows from the first asymmetric index: an asymmetric pair forces
    the corridor cell on, every symmetric active pair inverts it, and
    symmetric inactive pairs copy it.
    """
    tau: int
    direction: int
    sides: tuple  # (s1, s2) per index i = 1..tau-1
    i_star: int
    I_star: tuple
    z: int
    seed: int
    endpoint: int


def corridor_analysis(c: Configuration, u: Cell, tau: int, direction: int) -> CorridorAnalysis:
    """Switch-parity reading of one corridor (rules 12 and 124)."""
    t = c.topology
    u = t.canonical(u)
    ar, ac = (int(v) for v in _DIRS[direction])
    pr, pc = ac, -ar
    x = c.states
    s1 = s2 = 0
    sides = {}
    for i in range(tau - 1, 0, -1):
        j = tau - i
        s1 |= int(x[(u[0] + i * ar + j * pr) % t.rows, (u[1] + i * ac + j * pc) % t.cols])
        s2 |= int(x[(u[0] + i * ar - j * pr) % t.rows, (u[1] + i * ac - j * pc) % t.cols])
        sides[i] = (s1, s2)
    asym = [i for i in range(1, tau) if sides[i][0] != sides[i][1]]
    if asym:
        i_star, seed = asym[0], 1
    else:
        i_star = tau
        seed = int(x[(u[0] + tau * ar) % t.rows, (u[1] + tau * ac) % t.cols])
    I_star = tuple(range(1, i_star))
    z = sum(1 for i in I_star if sides[i] == (1, 1))
    return CorridorAnalysis(tau, direction, tuple(sides[i] for i in range(1, tau)),
                            i_star, I_star, z, seed, seed ^ (z & 1))


class Phase124(enum.Enum):
    """States of the rule-124 case analysis."""
    FIRST_WAVE = 1   # neighbour sum of u at tau-1
    LAGGARD = 2      # sum 3: where does the missing neighbour stand?
    SHIFTED = 3      # rerun the corridor analysis around the missing neighbour
    DONE = 4


def _fires_at_tau(s: int, r: Rule) -> bool:
    """Sum 1, 2 or 4 at tau-1: u fires at tau (first-wave figures)."""
    return s in r.activating_sums


def _empty_ring(s: int) -> bool:
    """No neighbour on at tau-1: the ring around u closes and u is shielded."""
    return s == 0


def _laggard_deadlocked(tau_w: int, tau: int) -> bool:
    """The missing neighbour was already due at tau-1 and stayed dark.

    Its three other neighbours are on, so it can only wait for u, and u
    waits for it.
    """
    return tau_w == tau - 1


def _laggard_fires(s_w: int, r: Rule) -> bool:
    """Shifted analysis: the missing neighbour sees 1 or 2 at its own tau-1."""
    return 0 < s_w < 3 and s_w in r.activating_sums


def _decide_124(r: Rule, c: Configuration, u: Cell, tau: int, ends: np.ndarray) -> StabilityVerdict:
    t = c.topology
    phase = Phase124.FIRST_WAVE
    verdict = None
    while phase is not Phase124.DONE:
        if phase is Phase124.FIRST_WAVE:
            s = int(ends.sum())
            if _fires_at_tau(s, r):
                verdict, phase = StabilityVerdict.active_at(tau, Method.CORRIDOR_124), Phase124.DONE
            elif _empty_ring(s):
                verdict, phase = StabilityVerdict.stable_by(Method.CORRIDOR_124), Phase124.DONE
            else:
                phase = Phase124.LAGGARD
        elif phase is Phase124.LAGGARD:
            d = int(np.flatnonzero(ends == 0)[0])
            w = t.canonical((u[0] + int(_DIRS[d, 0]), u[1] + int(_DIRS[d, 1])))
            tau_w = nearest_active_distance(c, w)
            if _laggard_deadlocked(tau_w, tau):
                verdict, phase = StabilityVerdict.stable_by(Method.CORRIDOR_124), Phase124.DONE
            else:
                phase = Phase124.SHIFTED
        else:
            back = (d + 2) % 4  # the corridor of w that points at u
            ends_w = corridor_endpoints(r, c, w, tau_w)
            s_w = int(ends_w.sum()) - int(ends_w[back])
            if _laggard_fires(s_w, r):
                verdict = StabilityVerdict.active_at(tau_w + 1, Method.CORRIDOR_124)
            else:
                verdict = StabilityVerdict.stable_by(Method.CORRIDOR_124)
            phase = Phase124.DONE
    return verdict


def decide_algebraic_sq(r: Rule, c: Configuration, u: Cell) -> StabilityVerdict:
    _check(r, c, u)
    u = c.topology.canonical(u)
    tau = nearest_active_distance(c, u)
    method = Method.CORRIDOR_124 if r.name == "124" else Method.DIAGONAL_OR
    if tau < 0:
        return StabilityVerdict.stable_by(method)
    ends = corridor_endpoints(r, c, u, tau)
    if r.name == "124":
        return _decide_124(r, c, u, tau, ends)
    s = int(ends.sum())
    if s in r.activating_sums:
        return StabilityVerdict.active_at(tau, method)
    # rule 123 can only miss with all four on; rule 12 with 0, 3 or 4
    return StabilityVerdict.stable_by(method)


def decide_algebraic(r: Rule, c: Configuration, u: Cell) -> StabilityVerdict:
    if r.grid_kind is Kind.TRIANGULAR:
        return decide_algebraic_12_tri(r, c, u)
    return decide_algebraic_sq(r, c, u)


def _sq_algebraic_all(r: Rule, c: Configuration) -> DecisionTable:
    d = _distance_field(c)
    stable = c.states == 0
    time = np.where(c.states == 1, 0, -1).astype(np.int64)
    method = Method.CORRIDOR_124 if r.name == "124" else Method.DIAGONAL_OR
    if (d < 0).all():
        return DecisionTable(stable, time, method)
    for cell in map(tuple, np.argwhere(c.states == 0).tolist()):
        v = decide_algebraic_sq(r, c, cell)
        stable[cell] = v.stable
        if not v.stable:
            time[cell] = v.activation_time
    return DecisionTable(stable, time, method)


# dispatch -----------------------------------------------------------------

def _oracle_all(r: Rule, c: Configuration) -> DecisionTable:
    tr = engine.run_to_fixed_point(r, c)
    a = tr.activation_time
    return DecisionTable((a < 0), a.copy(), Method.ORACLE)


def decide(r: Rule, c: Configuration, u: Cell) -> StabilityVerdict:
    _check(r, c, u)
    cls = classify(r)
    if cls is RuleClass.TRIVIAL:
        return decide_trivial(r, c, u)
    if cls is RuleClass.TOPOLOGICAL:
        return decide_topological(r, c, u)
    if cls is RuleClass.ALGEBRAIC:
        return decide_algebraic(r, c, u)
    return engine.oracle_stable(r, c, u)


def decide_all(r: Rule, c: Configuration) -> DecisionTable:
    """Verdicts for every cell at once, sharing the per-configuration work."""
    if r.grid_kind is not c.topology.kind:
        raise GridMismatch(f"rule {r} on a {c.topology.kind.value} configuration")
    cls = classify(r)
    if cls is RuleClass.TRIVIAL:
        return _trivial_all(r, c)
    if cls is RuleClass.TOPOLOGICAL:
        return _topo_all(r, c)
    if cls is RuleClass.ALGEBRAIC:
        if r.grid_kind is Kind.TRIANGULAR:
            return _tri12_all(c)
        return _sq_algebraic_all(r, c)
    return _oracle_all(r, c)


def has_fast_decider(r: Rule) -> bool:
    return classify(r) in (RuleClass.TRIVIAL, RuleClass.TOPOLOGICAL, RuleClass.ALGEBRAIC)
