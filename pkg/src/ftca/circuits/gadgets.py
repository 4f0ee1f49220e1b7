"""Gadget stamps for rules 2 and 24, and their simulation-based check.

A stamp is a rectangle of static cells: an H x W window plus a margin on
every side. Ports are straight double wires crossing the margin and the
outer band of the window: a dark track, a static rail on the left of the
direction of travel, and a dark shadow on the right. A signal is an
activation front running along the track; the shadow lights up one step
behind it. Apart from the ports, margin and band carry no statics and
must never light up, so stamps placed side by side meet only at ports.

Stamp file layout::

    name wire
    size 14 14
    margin 2
    band 2
    port a in W 7 0
    port y out E 7 13 truth 01 delay 13
    ignition double
    ---
    ..............

Port coordinates are the outermost track cell. ``truth`` lists the output
bit for every input assignment in binary counting order of the input
ports; ``delay`` is the step at which that cell fires, counted from the
ignition of the inputs at step 0. It does not depend on which inputs
caused the output to fire, which is what lets delays add up along a
circuit.

A two-input stamp may put ``lag L`` on an input port. That input is lit
L steps after step 0, so its signal is expected L steps after the signal
on a port without a lag.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from ..config import Configuration
from ..engine import run_to_fixed_point, step
from ..errors import BadHeader, GridMismatch
from ..grid import Kind, Topology
from ..rules import Rule

RULE_COMPAT = ("2", "24")

# direction of travel through a port, by (side, kind)
_TRAVEL = {("W", "in"): (0, 1), ("E", "out"): (0, 1), ("E", "in"): (0, -1), ("W", "out"): (0, -1),
           ("N", "in"): (1, 0), ("S", "out"): (1, 0), ("S", "in"): (-1, 0), ("N", "out"): (-1, 0)}


@dataclass(frozen=True)
class GadgetPort:
    name: str
    kind: str  # "in" or "out"
    side: str  # "N", "S", "W" or "E"
    row: int
    col: int
    truth: str | None = None
    delay: int | None = None
    lag: int = 0

    @property
    def travel(self) -> tuple[int, int]:
        return _TRAVEL[self.side, self.kind]

    @property
    def offset(self) -> int:
        """Position along the side: row for W/E ports, column for N/S ports."""
        return self.row if self.side in "WE" else self.col

    def cells(self, depth: int):
        """Track, rail and shadow cells, outermost first."""
        dr, dc = self.travel
        inward = (dr, dc) if self.kind == "in" else (-dr, -dc)
        track = [(self.row + i * inward[0], self.col + i * inward[1]) for i in range(depth)]
        left = (-dc, dr)
        rail = [(r + left[0], c + left[1]) for r, c in track]
        shadow = [(r - left[0], c - left[1]) for r, c in track]
        return track, rail, shadow


@dataclass(frozen=True, eq=False)
class Gadget:
    name: str
    static: np.ndarray  # uint8 stamp including the margin
    margin: int
    band: int
    ports: tuple
    ignition: str = "double"
    rule_compat: tuple = RULE_COMPAT

    @property
    def shape(self) -> tuple[int, int]:
        return self.static.shape

    @property
    def footprint(self) -> np.ndarray:
        return self.static

    @property
    def inputs(self) -> list[GadgetPort]:
        return [p for p in self.ports if p.kind == "in"]

    @property
    def outputs(self) -> list[GadgetPort]:
        return [p for p in self.ports if p.kind == "out"]

    def port(self, name: str) -> GadgetPort:
        for p in self.ports:
            if p.name == name:
                return p
        raise KeyError(name)

    def assignments(self):
        return list(itertools.product((0, 1), repeat=len(self.inputs)))

    def truth_function(self, bits) -> dict:
        """Expected output bits for a tuple of input bits."""
        k = self.assignments().index(tuple(bits))
        return {p.name: int(p.truth[k]) for p in self.outputs}

    def ignition_cells(self, bits) -> dict:
        """Cells lit from outside for an input assignment, by step."""
        out: dict = {}
        for p, b in zip(self.inputs, bits):
            if b:
                track, _, shadow = p.cells(1)
                cells = out.setdefault(p.lag, [])
                cells.append(track[0])
                if self.ignition == "double":
                    cells.append(shadow[0])
        return out

    def allowed_activity(self) -> np.ndarray:
        """Cells that may ever light up: the window interior and the port lines."""
        R, C = self.shape
        w = self.margin + self.band
        a = np.zeros((R, C), bool)
        a[w:R - w, w:C - w] = True
        for p in self.ports:
            track, _, shadow = p.cells(w)
            for cell in track + shadow:
                a[cell] = True
        return a | self.static.astype(bool)

    def handover(self, port: str) -> tuple[int, int]:
        """Output track cell that coincides with the next stamp's outermost input cell."""
        p = self.port(port)
        track, _, _ = p.cells(self.margin + self.band)
        return track[-1]


def parse_gadget(text: str) -> Gadget:
    head, sep, body = text.partition("---")
    if not sep:
        raise BadHeader("gadget stamp needs a '---' line before the rows")
    meta: dict = {}
    ports = []
    for line in head.strip().splitlines():
        f = line.split()
        if not f:
            continue
        if f[0] == "port":
            extra = dict(zip(f[6::2], f[7::2]))
            ports.append(GadgetPort(f[1], f[2], f[3], int(f[4]), int(f[5]),
                                    extra.get("truth"), int(extra["delay"]) if "delay" in extra else None,
                                    int(extra.get("lag", 0))))
        else:
            meta[f[0]] = f[1:]
    try:
        R, C = (int(v) for v in meta["size"])
        name = meta["name"][0]
    except (KeyError, ValueError) as e:
        raise BadHeader(f"bad gadget header: {e}") from None
    rows = [r for r in body.strip().splitlines() if r.strip()]
    if len(rows) != R or any(len(r) != C for r in rows):
        raise BadHeader(f"gadget {name}: rows do not match size {R}x{C}")
    st = np.array([[ch == "#" for ch in r] for r in rows], np.uint8)
    st.setflags(write=False)
    return Gadget(name, st, int(meta.get("margin", [2])[0]), int(meta.get("band", [2])[0]),
                  tuple(ports), meta.get("ignition", ["double"])[0])


def format_gadget(g: Gadget) -> str:
    """Inverse of ``parse_gadget``."""
    R, C = g.shape
    lines = [f"name {g.name}", f"size {R} {C}", f"margin {g.margin}", f"band {g.band}"]
    for p in g.ports:
        extra = ""
        if p.truth is not None:
            extra += f" truth {p.truth}"
        if p.delay is not None:
            extra += f" delay {p.delay}"
        if p.lag:
            extra += f" lag {p.lag}"
        lines.append(f"port {p.name} {p.kind} {p.side} {p.row} {p.col}{extra}")
    lines += [f"ignition {g.ignition}", "---"]
    lines += ["".join("#" if v else "." for v in row) for row in g.static]
    return "\n".join(lines) + "\n"


def read_gadget(path) -> Gadget:
    return parse_gadget(Path(path).read_text())


@lru_cache(maxsize=None)
def library() -> dict:
    """All bundled stamps by name."""
    out = {}
    for f in sorted(resources.files(__package__).joinpath("stamps").iterdir(), key=lambda p: p.name):
        if f.name.endswith(".txt"):
            g = parse_gadget(f.read_text())
            out[g.name] = g
    return out


# gadgets that implement the elementary circuit functions
ELEMENTARY = ("wire", "turn", "fanout_down", "and_up", "or", "xor_up")


def crowded_cells(g: Gadget) -> list:
    """Dark cells of the stamp that see three or more static neighbours."""
    s = np.pad(g.static.astype(np.int8), 1)
    n = s[:-2, 1:-1] + s[2:, 1:-1] + s[1:-1, :-2] + s[1:-1, 2:]
    return [tuple(int(v) for v in rc) for rc in np.argwhere((n >= 3) & (g.static == 0))]


@dataclass(frozen=True)
class CaseResult:
    assignment: tuple
    expected: dict
    observed: dict  # output -> activation step, -1 if never
    steps: int
    clean: bool
    delays_ok: bool

    @property
    def passed(self) -> bool:
        fired = {k: int(v >= 0) for k, v in self.observed.items()}
        return fired == self.expected and self.clean and self.delays_ok


@dataclass(frozen=True)
class GadgetReport:
    gadget: str
    rule: str
    cases: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def trace_lengths(self) -> dict:
        return {c.assignment: c.steps for c in self.cases}

    def failures(self) -> list:
        return [c.assignment for c in self.cases if not c.passed]


PAD = 2


def embed(g: Gadget, cells=()) -> tuple[Configuration, tuple[int, int]]:
    """Square torus holding the stamp with a dark border, plus the stamp origin."""
    R, C = g.shape
    n = max(R, C) + 2 * PAD
    a = np.zeros((n, n), np.uint8)
    a[PAD:PAD + R, PAD:PAD + C] = g.static
    for r, c in cells:
        a[PAD + r, PAD + c] = 1
    return Configuration(Topology.square(n), a), (PAD, PAD)


def time_budget(g: Gadget) -> int:
    R, C = g.shape
    return 4 * 2 * (R + C)


def _run_lit(r: Rule, cfg: Configuration, later: dict, origin, budget: int):
    """Activation times when ``later`` maps steps > 0 to cells switched on from outside."""
    act = np.where(cfg.states == 1, 0, -1).astype(np.int64)
    cur = cfg
    last = max(later, default=0)
    for t in range(1, last + 1):
        nxt = step(r, cur)
        extra = [(origin[0] + a, origin[1] + b) for a, b in later.get(t, [])]
        nxt = nxt.with_cells(extra) if extra else nxt
        act[(nxt.states == 1) & (act < 0)] = t
        cur = nxt
    traj = run_to_fixed_point(r, cur, max_steps=max(budget - last, 0))
    rest = traj.activation_time
    act[(act < 0) & (rest > 0)] = rest[(act < 0) & (rest > 0)] + last
    return act, traj.steps_to_fix + last


def _ports_quiet(g: Gadget, bits, act) -> bool:
    """No signal runs backwards out of a port.

    Port lines are shared with the neighbouring stamp, so an idle port
    must stay dark, and a lit input must not light up ahead of its own
    front.
    """
    depth = g.margin + g.band
    expect = g.truth_function(bits)
    for p in g.ports:
        track, _, shadow = p.cells(depth)
        if p.kind == "in":
            on = bits[g.inputs.index(p)]
        else:
            on = expect[p.name]
        if not on:
            if any(act[c] >= 0 for c in track + shadow):
                return False
        elif p.kind == "in":
            for k, (a, b) in enumerate(zip(track, shadow)):
                if 0 <= act[a] < p.lag + k or 0 <= act[b] < p.lag + k:
                    return False
    return True


def run_case(g: Gadget, r: Rule, bits) -> CaseResult:
    lit = g.ignition_cells(bits)
    cfg, (r0, c0) = embed(g, lit.pop(0, []))
    act, steps = _run_lit(r, cfg, lit, (r0, c0), time_budget(g))
    R, C = g.shape
    inside = act[r0:r0 + R, c0:c0 + C]
    outside = act.copy()
    outside[r0:r0 + R, c0:c0 + C] = -1
    clean = not (outside >= 0).any() and not ((inside >= 0) & ~g.allowed_activity()).any()
    clean = clean and _ports_quiet(g, bits, inside)
    observed = {}
    delays_ok = True
    for p in g.outputs:
        t = int(inside[p.row, p.col])
        observed[p.name] = t
        if p.delay is not None and t >= 0 and t != p.delay:
            delays_ok = False
    return CaseResult(tuple(bits), g.truth_function(bits), observed, steps, clean, delays_ok)


def verify_gadget(g: Gadget, r: Rule) -> GadgetReport:
    """Light every input assignment, run, and compare the outputs with the truth table.

    A case also fails when activity leaks outside the window interior
    and the port lines, or when the output fires at a step other than
    the recorded delay.
    """
    if r.grid_kind is not Kind.SQUARE:
        raise GridMismatch("gadgets live on the square grid")
    cases = tuple(run_case(g, r, bits) for bits in g.assignments())
    return GadgetReport(g.name, r.name, cases)
