"""Synchronous freezing dynamics and the simulation oracle."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import Configuration
from .errors import CellInitiallyActive, GridMismatch
from .grid import Cell
from .rules import Rule
from .verdict import Method, StabilityVerdict


def _check(r: Rule, c: Configuration):
    if r.grid_kind is not c.topology.kind:
        raise GridMismatch(f"rule {r} on a {c.topology.kind.value} configuration")


def neighbor_sums(c: Configuration) -> np.ndarray:
    nbr = c.topology.neighbor_table()
    return c.flat[nbr].sum(axis=1).reshape(c.topology.shape)


def step(r: Rule, c: Configuration) -> Configuration:
    _check(r, c)
    fire = r.lookup()[neighbor_sums(c)]
    return Configuration(c.topology, (c.states | fire).astype(np.uint8))


@dataclass(frozen=True, eq=False)
class Trajectory:
    rule: Rule
    initial: Configuration
    activation_time: np.ndarray  # (rows, cols), -1 = never
    steps_to_fix: int

    @property
    def fixed_point(self) -> Configuration:
        return Configuration(self.initial.topology, (self.activation_time >= 0).astype(np.uint8))

    def at(self, t: int) -> Configuration:
        """Configuration after t steps."""
        a = self.activation_time
        return Configuration(self.initial.topology, ((a >= 0) & (a <= t)).astype(np.uint8))

    def time_of(self, cell: Cell) -> int:
        return int(self.activation_time[self.initial.topology.canonical(cell)])


def run_to_fixed_point(r: Rule, c: Configuration, max_steps: int | None = None) -> Trajectory:
    """Iterate until nothing changes, recording first activation times.

    After one full sweep only the inactive neighbours of cells that just
    fired are re-evaluated: nobody else saw its neighbour sum change.
    """
    _check(r, c)
    t = c.topology
    nbr = t.neighbor_table()
    lut = r.lookup()
    state = c.flat.copy()
    act = np.where(state == 1, 0, -1).astype(np.int64)
    cand = np.flatnonzero(state == 0)
    step_no = 0
    limit = t.size + 1 if max_steps is None else max_steps
    while cand.size and step_no < limit:
        sums = state[nbr[cand]].sum(axis=1)
        fire = cand[lut[sums]]
        if fire.size == 0:
            break
        step_no += 1
        state[fire] = 1
        act[fire] = step_no
        cand = np.unique(nbr[fire].ravel())
        cand = cand[state[cand] == 0]
    return Trajectory(r, c, act.reshape(t.shape), step_no)


def run_full_sweep(r: Rule, c: Configuration) -> Trajectory:
    """Reference implementation: repeated full ``step`` calls."""
    _check(r, c)
    act = np.where(c.states == 1, 0, -1).astype(np.int64)
    cur = c
    k = 0
    while True:
        nxt = step(r, cur)
        if nxt == cur:
            break
        k += 1
        act[(nxt.states == 1) & (cur.states == 0)] = k
        cur = nxt
    return Trajectory(r, c, act, k)


def oracle_stable(r: Rule, c: Configuration, u: Cell, trajectory: Trajectory | None = None) -> StabilityVerdict:
    _check(r, c)
    if c[u]:
        raise CellInitiallyActive(f"cell {u} is active in the initial configuration")
    traj = trajectory if trajectory is not None else run_to_fixed_point(r, c)
    t = traj.time_of(u)
    if t < 0:
        return StabilityVerdict.stable_by(Method.ORACLE)
    return StabilityVerdict.active_at(t, Method.ORACLE)
