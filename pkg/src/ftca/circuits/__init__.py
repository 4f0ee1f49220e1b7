"""Rule-2/24 circuits: gadget stamps, netlists and the compiler."""
from __future__ import annotations

from dataclasses import dataclass

from ..engine import Trajectory, run_to_fixed_point
from ..rules import Rule, parse_rule
from .compiler import CompiledCircuit, compile
from .gadgets import (ELEMENTARY, Gadget, GadgetReport, crowded_cells, library, parse_gadget,
                      read_gadget, verify_gadget)
from .netlist import Gate, Netlist, evaluate_netlist, load, loads, parse_assignment


@dataclass(frozen=True)
class CircuitRun:
    circuit: CompiledCircuit
    trajectory: Trajectory

    @property
    def outputs(self) -> dict:
        """OUTPUT id -> 1 when its probe cell fired within the time budget."""
        a = self.trajectory.activation_time
        return {k: int(0 <= a[cell] <= self.circuit.time_budget) for k, cell in self.circuit.probe.items()}

    def unbalanced_gates(self) -> list:
        """Gates whose two inputs both fired, but not the expected number of steps apart."""
        a = self.trajectory.activation_time
        bad = []
        for g in self.circuit.arrivals:
            t = [int(a[c]) for c in g.cells]
            if min(t) >= 0 and t[0] - g.lags[0] != t[1] - g.lags[1]:
                bad.append((g.gate, t))
        return bad


def simulate(cc: CompiledCircuit, rule: Rule | str = "2") -> CircuitRun:
    r = parse_rule(rule, "sq") if isinstance(rule, str) else rule
    return CircuitRun(cc, run_to_fixed_point(r, cc.configuration, max_steps=cc.time_budget))


__all__ = [
    "CircuitRun", "CompiledCircuit", "ELEMENTARY", "Gadget", "GadgetReport", "Gate", "Netlist",
    "compile", "crowded_cells", "evaluate_netlist", "library", "load", "loads", "parse_assignment",
    "parse_gadget", "read_gadget", "simulate", "verify_gadget",
]
