"""Command line: simulate, decide, crosscheck, circuits, bench.

Reports are printed as ``key=value`` lines. Exit codes: 0 success,
1 other errors, 2 verdict mismatch, 3 parse error, 4 gadget failure,
5 queried cell is initially active.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import config as cfgmod
from . import engine
from .config import Configuration
from .deciders import decide, decide_all, has_fast_decider
from .errors import CellInitiallyActive, FtcaError, NetlistError, ParseError, UnroutableNetlist
from .grid import Kind, Topology
from .rules import parse_rule

EXIT_OK, EXIT_ERROR, EXIT_MISMATCH, EXIT_PARSE, EXIT_GADGET, EXIT_ACTIVE_CELL = 0, 1, 2, 3, 4, 5


@dataclass
class RunReport:
    command: str
    seed: int | None = None
    timings: dict = field(default_factory=dict)
    counters: dict = field(default_factory=dict)
    files: list = field(default_factory=list)
    lines: list = field(default_factory=list)  # extra records, already formatted

    def emit(self, out=None):
        out = out or sys.stdout
        print(f"command={self.command}", file=out)
        if self.seed is not None:
            print(f"seed={self.seed}", file=out)
        for k, v in self.counters.items():
            print(f"{k}={v}", file=out)
        for k, v in self.timings.items():
            print(f"time_{k}={v:.6f}", file=out)
        for f in self.files:
            print(f"wrote={f}", file=out)
        for line in self.lines:
            print(line, file=out)


# renders

def to_pbm(c: Configuration) -> str:
    """Plain portable bitmap, one pixel per cell (for both grids)."""
    rows, cols = c.topology.shape
    body = "\n".join(" ".join(str(int(v)) for v in row) for row in c.states)
    return f"P1\n{cols} {rows}\n{body}\n"


def to_rows(c: Configuration) -> str:
    return "\n".join("".join("#" if v else "." for v in row) for row in c.states) + "\n"


def _write(path: Path, text: str, report: RunReport):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    report.files.append(str(path))


def _render(c: Configuration, out: Path, stem: str, report: RunReport):
    _write(out / f"{stem}.pbm", to_pbm(c), report)
    if c.topology.kind is Kind.TRIANGULAR:
        _write(out / f"{stem}.txt", to_rows(c), report)


def _load(path: str, grid: str | None) -> Configuration:
    c = cfgmod.parse(Path(path).read_text())
    if grid is not None and c.topology.kind is not Kind(grid):
        raise ParseError(f"{path} holds a {c.topology.kind.value} configuration, not {grid}")
    return c


def _cell(text: str):
    try:
        r, c = (int(v) for v in text.split(","))
    except ValueError:
        raise ParseError(f"cell must look like r,c, got {text!r}") from None
    return r, c


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v]


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v]


def _topology(grid: str, n: int) -> Topology:
    return Topology.square(n) if grid == "sq" else Topology.triangular(n)


# commands

def cmd_simulate(a) -> int:
    c = _load(a.input, a.grid)
    rule = parse_rule(a.rule, c.topology.kind)
    rep = RunReport("simulate")
    t0 = time.perf_counter()
    if a.steps is not None:
        traj = engine.run_to_fixed_point(rule, c, max_steps=a.steps)
        final = traj.at(a.steps)
    else:
        traj = engine.run_to_fixed_point(rule, c)
        final = traj.fixed_point
    rep.timings["simulate"] = time.perf_counter() - t0
    rep.counters["steps_to_fix"] = traj.steps_to_fix
    rep.counters["active"] = final.active_count()
    if a.out:
        out = Path(a.out)
        _write(out / "final.txt", cfgmod.serialize(final), rep)
        _render(final, out, "final", rep)
        if a.render_every:
            last = a.steps if a.steps is not None else traj.steps_to_fix
            for t in range(0, last + 1, a.render_every):
                frame = traj.at(t)
                _render(frame, out, f"step{t:05d}", rep)
                rep.lines.append(f"frame={t} active={frame.active_count()}")
    rep.emit()
    return EXIT_OK


def cmd_decide(a) -> int:
    c = _load(a.input, a.grid)
    rule = parse_rule(a.rule, c.topology.kind)
    u = _cell(a.cell)
    if c[u]:
        raise CellInitiallyActive(f"cell {u} is active in the initial configuration")
    rep = RunReport("decide")
    verdicts = {}
    if a.method in ("fast", "both"):
        t0 = time.perf_counter()
        verdicts["fast"] = decide(rule, c, u)
        rep.timings["fast"] = time.perf_counter() - t0
    if a.method in ("oracle", "both"):
        t0 = time.perf_counter()
        verdicts["oracle"] = engine.oracle_stable(rule, c, u)
        rep.timings["oracle"] = time.perf_counter() - t0
    for k, v in verdicts.items():
        rep.lines.append(f"{k}_verdict={'Stable' if v.stable else 'NotStable'}")
        rep.lines.append(f"{k}_method={v.method.value}")
        if v.activation_time is not None:
            rep.lines.append(f"{k}_time={v.activation_time}")
    code = EXIT_OK
    if a.method == "both":
        agree = verdicts["fast"].same_answer(verdicts["oracle"])
        rep.counters["agree"] = int(agree)
        code = EXIT_OK if agree else EXIT_MISMATCH
    rep.emit()
    return code


def crosscheck_one(rule, c: Configuration) -> list:
    """Cells where the fast decider and the oracle disagree."""
    traj = engine.run_to_fixed_point(rule, c)
    table = decide_all(rule, c)
    act = traj.activation_time
    bad = []
    for cell in map(tuple, np.argwhere(c.states == 0)):
        fast = table.verdict(cell)
        t = int(act[cell])
        if fast.stable != (t < 0):
            bad.append(cell)
        elif not fast.stable and isinstance(fast.activation_time, int) and fast.activation_time != t:
            bad.append(cell)
    return bad


def cmd_crosscheck(a) -> int:
    rule = parse_rule(a.rule, a.grid)
    rep = RunReport("crosscheck", seed=a.seed)
    rng = np.random.default_rng(a.seed)
    sizes, dens = _ints(a.sizes), _floats(a.densities)
    trials = mismatches = cells = 0
    t0 = time.perf_counter()
    for i in range(a.trials):
        n = sizes[i % len(sizes)]
        d = dens[(i // len(sizes)) % len(dens)]
        c = cfgmod.random(_topology(a.grid, n), d, int(rng.integers(2**31)))
        bad = crosscheck_one(rule, c)
        trials += 1
        cells += int((c.states == 0).sum())
        if bad:
            mismatches += len(bad)
            rep.lines.append(f"mismatch_trial={i} cells={';'.join(f'{r},{q}' for r, q in bad)}")
            rep.lines.append(cfgmod.serialize(c).rstrip())
    rep.timings["total"] = time.perf_counter() - t0
    rep.counters.update(trials=trials, cells=cells, mismatches=mismatches)
    rep.emit()
    return EXIT_MISMATCH if mismatches else EXIT_OK


def cmd_circuits(a) -> int:
    from . import circuits

    if a.action == "verify-gadgets":
        names = [r for r in (["2", "24"] if a.rule == "both" else [a.rule])]
        rep = RunReport("circuits verify-gadgets")
        failed = 0
        lib = circuits.library()
        todo = a.gadget or list(lib)
        for rname in names:
            rule = parse_rule(rname, "sq")
            for gname in todo:
                res = circuits.verify_gadget(lib[gname], rule)
                steps = max(res.trace_lengths.values())
                rep.lines.append(f"gadget={gname} rule={rname} pass={int(res.passed)} max_steps={steps}")
                for bits in res.failures():
                    failed += 1
                    rep.lines.append(f"failure gadget={gname} rule={rname} inputs={''.join(map(str, bits))}")
        rep.counters["failures"] = failed
        rep.counters["result"] = "FAIL" if failed else "PASS"
        rep.emit()
        return EXIT_GADGET if failed else EXIT_OK
    n = circuits.load(a.netlist)
    assignment = circuits.parse_assignment(n, a.inputs)
    rep = RunReport("circuits compile")
    t0 = time.perf_counter()
    cc = circuits.compile(n, assignment)
    rep.timings["compile"] = time.perf_counter() - t0
    rows, cols = cc.layout_shape
    rep.counters.update(layout=f"{rows}x{cols}", torus=cc.configuration.topology.rows,
                        time_budget=cc.time_budget)
    for k, cell in cc.probe.items():
        rep.lines.append(f"probe {k}={cell[0]},{cell[1]}")
    if a.out:
        out = Path(a.out)
        _write(out / "circuit.txt", cfgmod.serialize(cc.configuration), rep)
        _write(out / "circuit.pbm", to_pbm(cc.configuration), rep)
        _write(out / "probes.json", json.dumps({k: list(v) for k, v in cc.probe.items()}, indent=1) + "\n", rep)
    code = EXIT_OK
    if a.simulate:
        t0 = time.perf_counter()
        run = circuits.simulate(cc, a.rule if a.rule in ("2", "24") else "2")
        rep.timings["simulate"] = time.perf_counter() - t0
        want = circuits.evaluate_netlist(n, assignment)
        for k, v in run.outputs.items():
            rep.lines.append(f"output {k}={v} probe={'active' if v else 'stable'} expected={want[k]}")
            if v != want[k]:
                code = EXIT_MISMATCH
    rep.emit()
    return code


def cmd_bench(a) -> int:
    rule = parse_rule(a.rule, a.grid)
    rep = RunReport("bench", seed=a.seed)
    for n in _ints(a.sizes):
        c = cfgmod.random(_topology(a.grid, n), a.density, a.seed)
        c.topology.neighbor_table()  # shared by both sides, keep it out of the timings
        if has_fast_decider(rule):
            decide_all(rule, cfgmod.random(_topology(a.grid, 8), a.density, a.seed))  # warm the jit
        t0 = time.perf_counter()
        traj = engine.run_to_fixed_point(rule, c)
        t_sim = time.perf_counter() - t0
        t0 = time.perf_counter()
        decide_all(rule, c)
        t_all = time.perf_counter() - t0
        dark = np.argwhere(c.states == 0)
        t_one = float("nan")
        if len(dark):
            u = tuple(int(v) for v in dark[len(dark) // 2])
            t0 = time.perf_counter()
            decide(rule, c, u)
            t_one = time.perf_counter() - t0
        ratio = t_sim / t_all if t_all > 0 else float("inf")
        rep.lines.append(f"n={n} density={a.density} steps={traj.steps_to_fix} oracle_s={t_sim:.6f} "
                         f"decider_all_s={t_all:.6f} decider_one_s={t_one:.6f} speedup={ratio:.2f}")
    rep.emit()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ftca", description="Freezing totalistic cellular automata")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("simulate", help="run the automaton")
    s.add_argument("--grid", choices=["tri", "sq"])
    s.add_argument("--rule", required=True)
    s.add_argument("--input", required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--steps", type=int)
    g.add_argument("--to-fixed-point", action="store_true")
    s.add_argument("--render-every", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("decide", help="answer Stability for one cell")
    s.add_argument("--grid", choices=["tri", "sq"])
    s.add_argument("--rule", required=True)
    s.add_argument("--input", required=True)
    s.add_argument("--cell", required=True)
    s.add_argument("--method", choices=["fast", "oracle", "both"], default="fast")
    s.set_defaults(func=cmd_decide)

    s = sub.add_parser("crosscheck", help="fast decider against simulation on random inputs")
    s.add_argument("--grid", choices=["tri", "sq"], required=True)
    s.add_argument("--rule", required=True)
    s.add_argument("--trials", type=int, default=50)
    s.add_argument("--sizes", default="6,10,16")
    s.add_argument("--densities", default="0.1,0.3,0.5,0.8")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_crosscheck)

    s = sub.add_parser("circuits", help="gadget verification and circuit compilation")
    s.add_argument("action", choices=["verify-gadgets", "compile"])
    s.add_argument("--rule", default="both")
    s.add_argument("--gadget", action="append", help="restrict verification to these gadgets")
    s.add_argument("--netlist")
    s.add_argument("--inputs")
    s.add_argument("--simulate", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_circuits)

    s = sub.add_parser("bench", help="decider against simulation wall time")
    s.add_argument("--grid", choices=["tri", "sq"], required=True)
    s.add_argument("--rule", required=True)
    s.add_argument("--sizes", default="128,256,512")
    s.add_argument("--density", type=float, default=0.3)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    p = build_parser()
    a = p.parse_args(argv)
    if a.cmd == "circuits" and a.action == "compile" and not (a.netlist and a.inputs):
        p.error("compile needs --netlist and --inputs")
    try:
        return a.func(a)
    except CellInitiallyActive as e:
        print(f"error=CellInitiallyActive {e}", file=sys.stderr)
        return EXIT_ACTIVE_CELL
    except UnroutableNetlist as e:
        print(f"error=UnroutableNetlist {e}", file=sys.stderr)
        return EXIT_ERROR
    except (ParseError, NetlistError) as e:
        print(f"error={type(e).__name__} {e}", file=sys.stderr)
        return EXIT_PARSE
    except (FtcaError, OSError, ValueError) as e:
        print(f"error={type(e).__name__} {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
