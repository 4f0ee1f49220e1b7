"""Search for rule-2/24 gadget stamps with a SAT solver.

Design-time tool only: the package ships the resulting stamps as text
files and never imports this script. Needs ``python-sat``.

A tile is an H x W window surrounded by an M-wide margin. All ports sit
on the west (inputs) and east (outputs) sides. A port is a straight
double wire: a track row with a static rail row on its north side and a
shadow row on its south side. Outside the ports, the margin and a band
of width B inside the window stay free of statics and never activate,
so tiles placed side by side only meet through their ports.

Usage: python3 scripts/design_gadgets.py NAME [--size S] [--time T] [--out DIR]
"""
from __future__ import annotations

import argparse
import itertools
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

M = 2  # margin
B = 2  # quiet band inside the window


@dataclass
class Port:
    name: str
    side: str  # 'W' or 'E'
    row: int   # window row (W/E) or column (N/S) of the track
    kind: str  # 'in' or 'out'


@dataclass
class Spec:
    name: str
    H: int
    W: int
    ports: list
    table: dict  # tuple of input bits -> dict output -> bit
    single_input: bool = False  # ignite the track cell only
    delays: dict = field(default_factory=dict)  # output -> exact track delay
    max_static: int | None = None
    stagger: int = 0  # inputs may be lit up to this many steps after step 0
    offsets: dict = field(default_factory=dict)  # input -> ignition step, filled in by solve


# travel direction of a signal through a port, and the unit step "to its left"
_TRAVEL = {("W", "in"): (0, 1), ("E", "out"): (0, 1), ("E", "in"): (0, -1), ("W", "out"): (0, -1),
           ("N", "in"): (1, 0), ("S", "out"): (1, 0), ("S", "in"): (-1, 0), ("N", "out"): (-1, 0)}


def port_cells(sp: Spec, p: Port):
    """Model cells of a port: track, rail and shadow lists (outer end first).

    ``p.row`` is the window row for W/E ports and the window column for N/S
    ports. The rail runs on the left of the direction of travel.
    """
    R, C = sp.H + 2 * M, sp.W + 2 * M
    dr, dc = _TRAVEL[p.side, p.kind]
    left = (-dc, dr)
    k = M + p.row
    depth = range(M + B)
    if p.side == "W":
        track = [(k, i) for i in depth]
    elif p.side == "E":
        track = [(k, C - 1 - i) for i in depth]
    elif p.side == "N":
        track = [(i, k) for i in depth]
    else:
        track = [(R - 1 - i, k) for i in depth]
    rail = [(r + left[0], c + left[1]) for r, c in track]
    shadow = [(r - left[0], c - left[1]) for r, c in track]
    return track, rail, shadow


def build(sp: Spec, T: int):
    from pysat.card import CardEnc, EncType
    from pysat.formula import IDPool

    R, C = sp.H + 2 * M, sp.W + 2 * M
    pool = IDPool()
    cl = []
    TRUE = pool.id("TRUE")
    cl.append([TRUE])

    def interior(r, c):
        return M + B <= r < M + sp.H - B and M + B <= c < M + sp.W - B

    fixed = {}
    allowed = set()
    tracks = {}
    for p in sp.ports:
        tr, rl, sh = port_cells(sp, p)
        tracks[p.name] = (tr, sh)
        for cell in tr + sh:
            fixed[cell] = 0
            allowed.add(cell)
        for cell in rl:
            fixed[cell] = 1
    S = {}
    for r in range(R):
        for c in range(C):
            if (r, c) in fixed:
                S[r, c] = TRUE if fixed[r, c] else -TRUE
            elif interior(r, c):
                S[r, c] = pool.id(("s", r, c))
            else:
                S[r, c] = -TRUE

    def nb(r, c):
        return [(r + a, c + b) for a, b in ((-1, 0), (1, 0), (0, -1), (0, 1)) if 0 <= r + a < R and 0 <= c + b < C]

    # quiescence: an inactive cell never sees two static neighbours
    for r in range(R):
        for c in range(C):
            ns = [S[n] for n in nb(r, c)]
            for a, b in itertools.combinations(ns, 2):
                cl.append([S[r, c], -a, -b])
            # nor three: the stamp never tells rules 2 and 24 apart
            for a, b, d in itertools.combinations(ns, 3):
                cl.append([S[r, c], -a, -b, -d])
    if sp.max_static is not None:
        frees = [v for (rc, v) in S.items() if rc not in fixed and v not in (TRUE, -TRUE)]
        cl.extend(CardEnc.atmost(frees, bound=sp.max_static, vpool=pool, encoding=EncType.seqcounter).clauses)

    ins = [p for p in sp.ports if p.kind == "in"]
    outs = [p for p in sp.ports if p.kind == "out"]
    # ignition step of each input, one-hot over 0..stagger; someone starts at 0
    sel = {p.name: [pool.id(("sel", p.name, d)) for d in range(sp.stagger + 1)] for p in ins}
    for vs in sel.values():
        cl.append(list(vs))
        cl.extend([-a, -b] for a, b in itertools.combinations(vs, 2))
    cl.append([vs[0] for vs in sel.values()])
    lit_at = {p.name: [] for p in outs}  # scenarios in which each output fires
    for si, bits in enumerate(itertools.product((0, 1), repeat=len(ins))):
        expect = sp.table[bits]

        def x(r, c, t, si=si):
            return pool.id(("x", si, r, c, t))

        lit = {}
        for p, bit in zip(ins, bits):
            if bit:
                tr, sh = tracks[p.name]
                lit[tr[0]] = p.name
                if not sp.single_input:
                    lit[sh[0]] = p.name
        for r in range(R):
            for c in range(C):
                s = S[r, c]
                if (r, c) in lit:
                    # driven from outside: on from its ignition step onwards
                    vs = sel[lit[r, c]]
                    for t in range(T + 1):
                        on = vs[:t + 1]
                        cl.append([-x(r, c, t)] + on)
                        cl.extend([x(r, c, t), -v] for v in on)
                    continue
                else:
                    cl.append([-x(r, c, 0), s])
                    cl.append([x(r, c, 0), -s])
                xs_all = [[x(a, b, t) for (a, b) in nb(r, c)] for t in range(T)]
                for t in range(T):
                    cl.append([-x(r, c, t), x(r, c, t + 1)])
                    xs = xs_all[t]
                    for nbits in itertools.product((0, 1), repeat=len(xs)):
                        ls = [(-v if bb else v) for v, bb in zip(xs, nbits)]
                        if sum(nbits) == 2:
                            cl.append(ls + [x(r, c, t), x(r, c, t + 1)])
                        else:
                            cl.append(ls + [x(r, c, t), -x(r, c, t + 1)])
                    if len(xs) == 4:
                        # never four active neighbours around an inactive cell
                        cl.append([x(r, c, t)] + [-v for v in xs])
                cl.append([-x(r, c, T), x(r, c, T - 1)])
                if not interior(r, c) and (r, c) not in allowed and s == -TRUE:
                    cl.append([-x(r, c, T)])
        # port lines are shared with the neighbour: an idle input stays dark,
        # a lit one never lights ahead of its own front
        for p, bit in zip(ins, bits):
            tr, sh = tracks[p.name]
            if not bit:
                cl.extend([-x(*cell, T)] for cell in tr + sh)
            else:
                sel_p = sel[p.name]
                for k, (a, b) in enumerate(zip(tr, sh)):
                    if k == 0:
                        continue
                    for d, v in enumerate(sel_p):
                        if d + k - 1 <= T:
                            cl.append([-v, -x(*a, d + k - 1)])
                            cl.append([-v, -x(*b, d + k - 1)])
        for p in outs:
            tr, sh = tracks[p.name]
            if not expect[p.name]:
                cl.extend([-x(*cell, T)] for cell in tr + sh)
        for p in outs:
            tr, sh = tracks[p.name]
            want = expect[p.name]
            end, shend = tr[0], sh[0]
            if want:
                lit_at[p.name].append(si)
                d = sp.delays.get(p.name)
                if d is not None:
                    cl.append([x(*end, d)])
                    cl.append([-x(*end, d - 1)])
                    cl.append([x(*shend, d + 1)])
                    cl.append([-x(*shend, d)])
                else:
                    cl.append([x(*end, T)])
                    cl.append([x(*shend, T)])
            else:
                cl.append([-x(*end, T)])
                cl.append([-x(*shend, T)])
    # an output fires at the same step whichever inputs caused it
    for name, sis in lit_at.items():
        tr, sh = tracks[name]
        for a, b in zip(sis, sis[1:]):
            for t in range(T + 1):
                for cell in (tr[0], sh[0]):
                    u, v = pool.id(("x", a, *cell, t)), pool.id(("x", b, *cell, t))
                    cl.append([-u, v])
                    cl.append([u, -v])
    return pool, cl, S, fixed


def solve(sp: Spec, T: int, verbose=True):
    from pysat.solvers import Cadical153

    t0 = time.time()
    pool, cl, S, fixed = build(sp, T)
    s = Cadical153(bootstrap_with=cl)
    ok = s.solve()
    if verbose:
        print(f"{sp.name}: vars {pool.top} clauses {len(cl)} sat {ok} {time.time() - t0:.1f}s", flush=True)
    if not ok:
        return None
    model = set(v for v in s.get_model() if v > 0)
    sp.offsets = {p.name: next(d for d in range(sp.stagger + 1) if pool.id(("sel", p.name, d)) in model)
                  for p in sp.ports if p.kind == "in"}
    R, C = sp.H + 2 * M, sp.W + 2 * M
    st = np.zeros((R, C), np.uint8)
    for (r, c), v in S.items():
        st[r, c] = 1 if (v > 0 and v in model) else 0
    return st


def _simulate(sp: Spec, st: np.ndarray, bits) -> np.ndarray:
    act = st.astype(bool)
    inject: dict = {}
    for p, b in zip([p for p in sp.ports if p.kind == "in"], bits):
        if b:
            tr, _, sh = port_cells(sp, p)
            cells = [tr[0]] + ([] if sp.single_input else [sh[0]])
            inject.setdefault(sp.offsets.get(p.name, 0), []).extend(cells)
    when = np.where(act, 0, -1)
    for c in inject.pop(0, []):
        act[c] = True
        when[c] = 0
    for t in range(1, 4 * sum(st.shape)):
        pad = np.pad(act, 1).astype(np.int8)
        n = pad[:-2, 1:-1] + pad[2:, 1:-1] + pad[1:-1, :-2] + pad[1:-1, 2:]
        fire = (n == 2) & ~act
        for c in inject.pop(t, []):
            fire[c] = fire[c] or not act[c]
        if not fire.any() and not inject:
            break
        act |= fire
        when[fire] = t
    return when


def _delays(sp: Spec, st: np.ndarray) -> dict:
    """Step at which each output's outer track cell fires (the same in every lit case)."""
    n_in = sum(p.kind == "in" for p in sp.ports)
    seen: dict = {}
    for bits in itertools.product((0, 1), repeat=n_in):
        when = _simulate(sp, st, bits)
        for p in sp.ports:
            if p.kind == "out" and sp.table[bits][p.name]:
                seen.setdefault(p.name, set()).add(int(when[port_cells(sp, p)[0][0]]))
    for name, ts in seen.items():
        if len(ts) != 1:
            raise RuntimeError(f"{sp.name}: output {name} fires at steps {sorted(ts)}")
    return {name: ts.pop() for name, ts in seen.items()}


def to_text(sp: Spec, st: np.ndarray) -> str:
    """Stamp file: a port header block, then rows of '.'/'#'."""
    lines = [f"name {sp.name}", f"size {st.shape[0]} {st.shape[1]}", f"margin {M}", f"band {B}"]
    delays = _delays(sp, st)
    ins = [p for p in sp.ports if p.kind == "in"]
    for p in sp.ports:
        tr, _, _ = port_cells(sp, p)
        extra = ""
        if p.kind == "in" and sp.offsets.get(p.name):
            extra = f" lag {sp.offsets[p.name]}"
        if p.kind == "out":
            bits = "".join(str(sp.table[k][p.name]) for k in itertools.product((0, 1), repeat=len(ins)))
            extra = f" truth {bits}"
            if p.name in delays:
                extra += f" delay {delays[p.name]}"
        lines.append(f"port {p.name} {p.kind} {p.side} {tr[0][0]} {tr[0][1]}{extra}")
    lines.append(f"ignition {'single' if sp.single_input else 'double'}")
    lines.append("---")
    lines += ["".join("#" if v else "." for v in row) for row in st]
    return "\n".join(lines) + "\n"


def specs(S: int) -> dict:
    o = S // 2
    one = [Port("a", "W", o, "in"), Port("y", "E", o, "out")]
    ident = {(0,): {"y": 0}, (1,): {"y": 1}}
    out = {
        "wire": Spec("wire", S, S, one, ident),
        "source": Spec("source", S, S, one, ident, single_input=True),
        "turn": Spec("turn", S, S, [Port("a", "W", o, "in"), Port("y", "S", o, "out")], ident),
        "sink": Spec("sink", S, S, [Port("a", "W", o, "in")], {(0,): {}, (1,): {}}),
        "move_down": Spec("move_down", 2 * S, S, [Port("a", "W", o, "in"), Port("y", "E", S + o, "out")], ident),
        "move_up": Spec("move_up", 2 * S, S, [Port("a", "W", S + o, "in"), Port("y", "E", o, "out")], ident),
        "fanout_down": Spec("fanout_down", 2 * S, S,
                            [Port("a", "W", o, "in"), Port("y0", "E", o, "out"), Port("y1", "E", S + o, "out")],
                            {(0,): {"y0": 0, "y1": 0}, (1,): {"y0": 1, "y1": 1}}),
        "fanout_up": Spec("fanout_up", 2 * S, S,
                          [Port("a", "W", S + o, "in"), Port("y0", "E", o, "out"), Port("y1", "E", S + o, "out")],
                          {(0,): {"y0": 0, "y1": 0}, (1,): {"y0": 1, "y1": 1}}),
    }
    ops = {"and": lambda a, b: a & b, "or": lambda a, b: a | b, "xor": lambda a, b: a ^ b}
    for name, f in ops.items():
        for where, row in (("up", o), ("down", S + o)):
            out[f"{name}_{where}"] = Spec(
                f"{name}_{where}", 2 * S, S,
                [Port("a", "W", o, "in"), Port("b", "W", S + o, "in"), Port("y", "E", row, "out")],
                {(a, b): {"y": f(a, b)} for a in (0, 1) for b in (0, 1)})
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("name")
    ap.add_argument("--size", type=int, default=12)
    ap.add_argument("--time", type=int, default=48)
    ap.add_argument("--delay", type=int, action="append", default=[], help="exact delay per output, in order")
    ap.add_argument("--max-static", type=int)
    ap.add_argument("--out", default="designs")
    ap.add_argument("--as", dest="rename", help="save under another gadget name")
    ap.add_argument("--stagger", type=int, default=0, help="let inputs light up to this many steps late")
    a = ap.parse_args(argv)
    sp = specs(a.size)[a.name]
    outs = [p.name for p in sp.ports if p.kind == "out"]
    sp.delays = dict(zip(outs, a.delay))
    sp.max_static = a.max_static
    sp.stagger = a.stagger
    if a.rename:
        sp.name = a.rename
    st = solve(sp, a.time)
    if st is None:
        return 1
    Path(a.out).mkdir(parents=True, exist_ok=True)
    txt = to_text(sp, st)
    (Path(a.out) / f"{sp.name}.txt").write_text(txt)
    print(txt)
    return 0


if __name__ == "__main__":
    sys.exit(main())
