"""Compile a netlist into a rule-2/24 configuration.

Layout: signals run eastwards along horizontal lanes. The plane is cut
into slots of S rows and stages of S columns; each stage places one
stamp per busy slot (two slots for stamps that move, copy or combine
signals). Between operations every signal sits on an odd slot with an
empty slot below, so that any two neighbours can be combined or swapped
locally:

* copy:    shift the signals below down by two slots, then fan out;
* swap:    the XOR crossover, c = a ^ b, a' = c ^ b, b' = c ^ a;
* combine: lift the lower signal next to the upper one, then AND/XOR.

There is no single OR stamp: an OR junction fires late or not at all
when both fronts arrive together. OR is built as a xor (a and b) xor b,
which only needs stamps with fixed delays (see ``or_stamp``).

Every stamp has a fixed delay from input port to output port, so the
planner knows when each signal reaches each stage. A two-input stamp may
expect one input some steps after the other (its port lag). Before a
stage with such a gate the planner inserts stages of slow wires until
the inputs of every gate arrive exactly that far apart.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ..config import Configuration
from ..errors import NetlistError, UnroutableNetlist
from ..grid import Topology
from .gadgets import Gadget, GadgetPort, library
from .netlist import OPS, Netlist

MAX_CELLS = 1 << 22
DELAY_WIRES = ("wire_d2", "wire_d4", "wire_d6")


@dataclass
class Token:
    value: str  # netlist gate id carried by this wire
    time: int  # step at which it reaches the current stage
    uid: int = field(default_factory=itertools.count().__next__)


@dataclass(frozen=True)
class Placement:
    stage: int
    slot: int
    gadget: str


@dataclass(frozen=True)
class GateArrival:
    """Input cells of a placed two-input gate and when they should fire.

    Input k should fire at ``time + lags[k]``.
    """
    gate: str
    cells: tuple
    time: int
    lags: tuple = (0, 0)


@dataclass(frozen=True, eq=False)
class CompiledCircuit:
    configuration: Configuration
    input_ignition_cells: dict  # INPUT id -> cell
    probe: dict  # OUTPUT id -> cell
    time_budget: int
    assignment: dict
    placements: tuple = ()
    arrivals: tuple = ()  # GateArrival per placed two-input gate
    layout_shape: tuple = (0, 0)

    @property
    def lit_inputs(self) -> list:
        return [k for k, v in self.assignment.items() if v]


class _Planner:
    def __init__(self, lib: dict):
        self.lib = lib
        self.S = lib["wire"].shape[1] - 2 * lib["wire"].margin
        g = lib["wire"]
        self.hand = g.margin + g.band - 1  # outer output cell sits this far past the handover
        self.slots: list = []
        self.stages: list = []  # list of dict slot -> (gadget, {port: time}, {port: token})
        self.extra = {}
        base = self.stage_delay("wire", "y")
        for name in DELAY_WIRES:
            if name in lib and self.stage_delay(name, "y") > base:
                self.extra[self.stage_delay(name, "y") - base] = name

    # geometry helpers
    def height(self, name: str) -> int:
        g = self.lib[name]
        return (g.shape[0] - 2 * g.margin) // self.S

    def port_slot(self, g: Gadget, port: str) -> int:
        return (g.port(port).row - g.margin) // self.S

    def stage_delay(self, name: str, port: str) -> int:
        return self.lib[name].port(port).delay - self.hand

    # slot bookkeeping
    def grow(self, n: int):
        while len(self.slots) < n:
            self.slots.append(None)

    def tokens(self) -> list:
        return [(i, t) for i, t in enumerate(self.slots) if t is not None]

    def emit(self, ops: dict, wires: dict | None = None):
        """Place one stage. ``ops`` maps top slot -> gadget; busy slots left
        uncovered get a plain wire, or the wire named in ``wires``."""
        if any(len(self.lib[g].inputs) == 2 for g in ops.values()):
            self.balance(ops)
        wires = wires or {}
        covered = {}
        for top, name in ops.items():
            for s in range(top, top + self.height(name)):
                if s in covered:
                    raise UnroutableNetlist(f"stamps overlap at slot {s}")
                covered[s] = top
        full = dict(ops)
        for s, tok in self.tokens():
            if s not in covered:
                full[s] = wires.get(s, "wire")
        if not full:
            return {}
        self.grow(max(top + self.height(n) for top, n in full.items()) + 2)
        new = [None] * len(self.slots)
        stage = {}
        for top, name in sorted(full.items()):
            g = self.lib[name]
            ins = {}
            for p in g.inputs:
                tok = self.slots[top + self.port_slot(g, p.name)]
                if tok is None:
                    raise UnroutableNetlist(f"{name} at slot {top}: input {p.name} has no signal")
                ins[p.name] = tok
            outs = {}
            times = {p: t.time for p, t in ins.items()}
            if ins:
                starts = {t - g.port(p).lag for p, t in times.items()}
                if len(starts) != 1:
                    raise UnroutableNetlist(f"{name} at slot {top}: unbalanced inputs {times}")
                t0 = starts.pop()
                for k, p in enumerate(g.outputs):
                    t = t0 + self.stage_delay(name, p.name)
                    if len(ins) == 2:
                        tok = Token("", t)
                    elif k == 0:
                        tok = next(iter(ins.values()))  # the signal keeps its identity
                        tok.time = t
                    else:
                        tok = Token(next(iter(ins.values())).value, t)
                    outs[p.name] = tok
                    new[top + self.port_slot(g, p.name)] = tok
            stage[top] = (name, times, outs)
        self.stages.append(stage)
        self.slots = new
        return stage

    def balance(self, ops: dict):
        """Insert slow-wire stages until every gate in ``ops`` has synchronous inputs."""
        while True:
            need = {}
            for top, name in ops.items():
                g = self.lib[name]
                if len(g.inputs) != 2:
                    continue
                s = [top + self.port_slot(g, p.name) for p in g.inputs]
                t = [self.slots[i].time - p.lag for i, p in zip(s, g.inputs)]
                target = max(t)
                for i, ti in zip(s, t):
                    if ti < target:
                        need[i] = target - ti
            if not need:
                return
            wires = {}
            for s, d in need.items():
                fit = [e for e in self.extra if e <= d]
                if not fit:
                    raise UnroutableNetlist(f"cannot pad a delay of {d} steps")
                wires[s] = self.extra[max(fit)]
            self.emit({}, wires)

    def normalize(self, gap_after: int | None = None):
        """Move signals to slots 1, 3, 5, ... keeping their order.

        ``gap_after`` leaves a free pair of slots below that stack position.
        """
        for _ in range(4 * len(self.slots) + 8):
            toks = self.tokens()
            target = {}
            for k, (s, _) in enumerate(toks):
                kk = k + 1 if gap_after is not None and k > gap_after else k
                target[s] = 2 * kk + 1
            if all(s == g for s, g in target.items()):
                return
            self.grow(max(target.values()) + 2)
            ops, used = {}, set()
            for s, _ in toks:
                g = target[s]
                if g > s and self.slots[s + 1] is None and {s, s + 1}.isdisjoint(used):
                    ops[s] = "move_down"
                    used |= {s, s + 1}
                elif g < s and self.slots[s - 1] is None and {s - 1, s}.isdisjoint(used):
                    ops[s - 1] = "move_up"
                    used |= {s - 1, s}
                else:
                    used.add(s)
            self.emit(ops)
        raise UnroutableNetlist("lane shifting did not converge")

    # logical operations on stack positions
    def position(self, tok: Token) -> int:
        return [t.uid for _, t in self.tokens()].index(tok.uid)

    def slot_of(self, tok: Token) -> int:
        for s, t in self.tokens():
            if t.uid == tok.uid:
                return s
        raise KeyError(tok)

    def copy(self, tok: Token) -> Token:
        self.normalize(gap_after=self.position(tok))
        top = self.slot_of(tok)
        stage = self.emit({top: "fanout_down"})
        self.normalize()
        return stage[top][2]["y1"]

    def swap(self, k: int):
        """Exchange stack positions k and k + 1 through the XOR crossover."""
        self.normalize()
        p = 2 * k + 1
        a, b = self.slots[p], self.slots[p + 2]
        self.emit({p: "fanout_down", p + 2: "fanout_down"})
        self.emit({p + 1: "xor_up"})
        self.emit({p + 1: "fanout_down"})
        self.emit({p: "xor_up", p + 2: "xor_up"})
        # the crossover rebuilds both signals; hand their identities back
        for tok, s in ((b, p), (a, p + 2)):
            tok.time = self.slots[s].time
            self.slots[s] = tok
        self.normalize()

    def or_prefix(self, p: int):
        """Signals a at p and b at p + 2 become a xor (a and b) at p and b at p + 3."""
        self.emit({p: "fanout_down", p + 2: "fanout_down"})
        self.emit({p + 1: "and_up"})
        self.emit({p: "xor_up"})

    def combine(self, k: int, op: str, value: str) -> Token:
        """Gate stack positions k and k + 1 into one signal at position k."""
        self.normalize()
        p = 2 * k + 1
        if op == "OR":
            self.or_prefix(p)
            self.normalize()
            op = "XOR"
        self.emit({p + 1: "move_up"})
        stage = self.emit({p: f"{op.lower()}_up"})
        tok = stage[p][2]["y"]
        tok.value = value
        self.normalize()
        return tok

    def drop(self, tok: Token) -> tuple:
        """End a signal in a sink; returns (stage index, slot)."""
        s = self.slot_of(tok)
        self.emit({s: "sink"})
        return len(self.stages) - 1, s


def _render(pl: _Planner, lib: dict, rows: int, cols: int):
    """Stamp every placed gadget onto a rows x cols array; returns it and the placements."""
    S = pl.S
    a = np.zeros((rows, cols), np.uint8)
    placed = []
    for j, stage in enumerate(pl.stages):
        for top, (name, _, _) in stage.items():
            g = lib[name]
            h, w = g.shape
            a[top * S:top * S + h, j * S:j * S + w] |= g.static
            placed.append((j, top, name))
    for j, top, name in placed:
        g = lib[name]
        h, w = g.shape
        if not np.array_equal(a[top * S:top * S + h, j * S:j * S + w], g.static):
            raise UnroutableNetlist(f"{name} at stage {j} slot {top} overlaps a neighbour")
    return a, placed


def or_stamp(lib: dict | None = None) -> Gadget:
    """The OR compound as one stamp: inputs on slots 0 and 2, output on slot 0.

    It is laid out exactly as the compiler lays out an OR whose inputs
    arrive together.
    """
    lib = lib or library()
    pl = _Planner(lib)
    # lanes sit on odd slots, so build on slots 1..4 and drop slot 0
    a, b = Token("a", 0), Token("b", 0)
    pl.slots = [None, a, None, b, None]
    pl.or_prefix(1)
    pl.normalize()
    pl.emit({2: "move_up"})
    y = pl.emit({1: "xor_up"})[1][2]["y"]
    if [s for s, _ in pl.tokens()] != [1]:
        raise UnroutableNetlist("internal: OR compound left stray signals")
    M = lib["wire"].margin
    S = pl.S
    rows, cols = 5 * S + 2 * M, len(pl.stages) * S + 2 * M
    static, _ = _render(pl, lib, rows, cols)
    static = static[S:].copy()
    static.setflags(write=False)
    first = pl.stages[0]
    ports = []
    for name, top in (("a", 1), ("b", 3)):
        g = lib[first[top][0]]
        p = g.inputs[0]
        ports.append(GadgetPort(name, "in", "W", (top - 1) * S + p.row, p.col))
    last = len(pl.stages) - 1
    g = lib[pl.stages[last][1][0]]
    p = g.outputs[0]
    ports.append(GadgetPort("y", "out", "E", p.row, last * S + p.col, "0111", y.time + pl.hand))
    return Gadget("or", static, M, g.band, tuple(ports))


def _plan(n: Netlist, lib: dict):
    pl = _Planner(lib)
    alias = {}
    for gid in n.order():
        g = n[gid]
        alias[gid] = alias[g.inputs[0]] if g.kind == "FANOUT" else gid
    uses = {gid: 0 for gid in alias.values()}
    for g in n.gates:
        if g.kind in OPS or g.kind == "OUTPUT":
            for i in g.inputs:
                uses[alias[i]] += 1
    live: dict = {}  # value -> tokens carrying it
    pl.grow(2 * len(n.input_order) + 2)
    for k, gid in enumerate(n.input_order):
        tok = Token(gid, 0)
        pl.slots[2 * k + 1] = tok
        live[gid] = [tok]
    pl.emit({2 * k + 1: "source" for k in range(len(n.input_order))})
    sources = {gid: (0, 2 * k + 1) for k, gid in enumerate(n.input_order)}
    probes = {}

    def take(v: str) -> Token:
        toks = live[v]
        if uses[v] > 1:
            c = pl.copy(toks[0])
            uses[v] -= 1
            return c
        uses[v] -= 1
        tok = toks.pop()
        return tok

    for gid in list(n.input_order):
        if uses[gid] == 0:
            pl.drop(live[gid].pop())
            pl.normalize()
    for gid in n.order():
        g = n[gid]
        if g.kind in OPS:
            x, y = (alias[i] for i in g.inputs)
            tx = take(x)
            ty = take(y)
            i, j = pl.position(tx), pl.position(ty)
            if i > j:
                tx, ty, i, j = ty, tx, j, i
            while j - i > 1:
                pl.swap(i)
                i += 1
            tok = pl.combine(i, g.kind, gid)
            if uses[gid] == 0:
                pl.drop(tok)
                pl.normalize()
            else:
                live[gid] = [tok]
        elif g.kind == "OUTPUT":
            tok = take(alias[g.inputs[0]])
            probes[gid] = pl.drop(tok)
            pl.normalize()
    if pl.tokens():
        raise NetlistError("internal: signals left over after planning")
    return pl, sources, probes


def compile(n: Netlist, assignment: dict, lib: dict | None = None) -> CompiledCircuit:  # noqa: A001
    lib = lib or library()
    pl, sources, probes = _plan(n, lib)
    S = pl.S
    M = lib["wire"].margin
    rows = len(pl.slots) * S + 2 * M
    cols = len(pl.stages) * S + 2 * M
    side = max(rows, cols) + 2
    if side * side > MAX_CELLS:
        raise UnroutableNetlist(f"layout needs a {side}x{side} torus")
    a, placed = _render(pl, lib, side, side)
    arrivals = []
    for j, top, name in placed:
        g = lib[name]
        r0, c0 = top * S, j * S
        if len(g.inputs) == 2:
            times = pl.stages[j][top][1]
            cells = tuple((r0 + p.row, c0 + p.col) for p in g.inputs)
            lags = tuple(p.lag for p in g.inputs)
            arrivals.append(GateArrival(f"{name}@{j},{top}", cells, times["a"] - lags[0], lags))
    ignition = {}
    for gid, (j, top) in sources.items():
        p = lib["source"].inputs[0]
        ignition[gid] = (top * S + p.row, j * S + p.col)
    probe = {}
    for gid, (j, top) in probes.items():
        track, _, _ = lib["sink"].inputs[0].cells(M + 1)
        r, c = track[M]
        probe[gid] = (top * S + r, j * S + c)
    for gid, bit in assignment.items():
        if gid not in ignition:
            raise NetlistError(f"{gid} is not an input")
        if bit:
            a[ignition[gid]] = 1
    missing = set(n.input_order) - set(assignment)
    if missing:
        raise NetlistError(f"no value for inputs {sorted(missing)}")
    cfg = Configuration(Topology.square(side), a)
    budget = 4 * 2 * (rows + cols)
    return CompiledCircuit(cfg, ignition, probe, budget, {k: int(v) for k, v in assignment.items()},
                           tuple(Placement(j, top, name) for j, top, name in placed), tuple(arrivals),
                           (rows, cols))
