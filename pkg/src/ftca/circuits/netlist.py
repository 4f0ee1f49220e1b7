"""Boolean netlists: JSON I/O, validation and reference evaluation."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from pathlib import Path

from ..errors import NetlistCycle, NetlistError

KINDS = ("INPUT", "AND", "OR", "XOR", "FANOUT", "OUTPUT")
ARITY = {"INPUT": 0, "AND": 2, "OR": 2, "XOR": 2, "FANOUT": 1, "OUTPUT": 1}
OPS = {
    "AND": lambda a, b: a & b,
    "OR": lambda a, b: a | b,
    "XOR": lambda a, b: a ^ b,
}


@dataclass(frozen=True)
class Gate:
    id: str
    kind: str
    inputs: tuple = ()


@dataclass(frozen=True)
class Netlist:
    gates: tuple
    input_order: tuple
    _by_id: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_id", {g.id: g for g in self.gates})
        self.validate()

    def __getitem__(self, gid: str) -> Gate:
        return self._by_id[gid]

    @property
    def outputs(self) -> list[str]:
        return [g.id for g in self.gates if g.kind == "OUTPUT"]

    def consumers(self, gid: str) -> list[str]:
        return [g.id for g in self.gates for i in g.inputs if i == gid]

    def validate(self):
        if len(self._by_id) != len(self.gates):
            raise NetlistError("duplicate gate ids")
        for g in self.gates:
            if g.kind not in KINDS:
                raise NetlistError(f"gate {g.id}: unknown kind {g.kind}")
            if len(g.inputs) != ARITY[g.kind]:
                raise NetlistError(f"gate {g.id}: {g.kind} takes {ARITY[g.kind]} inputs, got {len(g.inputs)}")
            for i in g.inputs:
                if i not in self._by_id:
                    raise NetlistError(f"gate {g.id}: unknown input {i}")
                if self._by_id[i].kind == "OUTPUT":
                    raise NetlistError(f"gate {g.id} reads from OUTPUT {i}")
        declared = [g.id for g in self.gates if g.kind == "INPUT"]
        if sorted(declared) != sorted(self.input_order):
            raise NetlistError("inputs list must name every INPUT gate exactly once")
        for g in self.gates:
            if g.kind == "FANOUT" and len(self.consumers(g.id)) > 2:
                raise NetlistError(f"FANOUT {g.id} feeds more than two gates")
        self.order()

    def order(self) -> list[str]:
        """Gate ids in a topological order; raises NetlistCycle."""
        ts = TopologicalSorter({g.id: set(g.inputs) for g in self.gates})
        try:
            return list(ts.static_order())
        except CycleError as e:
            raise NetlistCycle(f"netlist has a cycle through {e.args[1]}") from None


def from_dict(d: dict) -> Netlist:
    try:
        gates = tuple(Gate(str(g["id"]), str(g["kind"]).upper(), tuple(str(i) for i in g.get("inputs", ())))
                      for g in d["gates"])
        inputs = tuple(str(i) for i in d["inputs"])
    except (KeyError, TypeError) as e:
        raise NetlistError(f"bad netlist document: {e}") from None
    return Netlist(gates, inputs)


def to_dict(n: Netlist) -> dict:
    return {
        "gates": [{"id": g.id, "kind": g.kind, "inputs": list(g.inputs)} for g in n.gates],
        "inputs": list(n.input_order),
    }


def loads(text: str) -> Netlist:
    try:
        return from_dict(json.loads(text))
    except json.JSONDecodeError as e:
        raise NetlistError(f"netlist is not valid JSON: {e}") from None


def load(path) -> Netlist:
    return loads(Path(path).read_text())


def parse_assignment(n: Netlist, bits: str) -> dict:
    """'110' -> {first input: 1, second: 1, third: 0} in input_order."""
    if len(bits) != len(n.input_order) or set(bits) - {"0", "1"}:
        raise NetlistError(f"need {len(n.input_order)} bits for inputs {list(n.input_order)}, got {bits!r}")
    return {k: int(b) for k, b in zip(n.input_order, bits)}


def evaluate_netlist(n: Netlist, assignment: dict) -> dict:
    val: dict = {}
    for gid in n.order():
        g = n[gid]
        if g.kind == "INPUT":
            val[gid] = int(assignment[gid])
        elif g.kind in OPS:
            a, b = (val[i] for i in g.inputs)
            val[gid] = OPS[g.kind](a, b)
        else:
            val[gid] = val[g.inputs[0]]
    return {gid: val[gid] for gid in n.outputs}


# small circuits used by tests, the CLI and the acceptance run

def _net(inputs, gates) -> Netlist:
    return from_dict({"inputs": inputs, "gates": [{"id": i, "kind": k, "inputs": list(a)} for i, k, a in gates]})


def wire_netlist() -> Netlist:
    return _net(["a"], [("a", "INPUT", ()), ("y", "OUTPUT", ("a",))])


def and_netlist() -> Netlist:
    return _net(["a", "b"], [("a", "INPUT", ()), ("b", "INPUT", ()), ("g", "AND", ("a", "b")),
                             ("y", "OUTPUT", ("g",))])


def or_xor_netlist() -> Netlist:
    """(a OR b) XOR c"""
    return _net(["a", "b", "c"], [("a", "INPUT", ()), ("b", "INPUT", ()), ("c", "INPUT", ()),
                                  ("o", "OR", ("a", "b")), ("x", "XOR", ("o", "c")), ("y", "OUTPUT", ("x",))])


def majority_netlist() -> Netlist:
    """(a AND b) OR (a AND c) OR (b AND c) with explicit fanouts."""
    return _net(["a", "b", "c"], [
        ("a", "INPUT", ()), ("b", "INPUT", ()), ("c", "INPUT", ()),
        ("fa", "FANOUT", ("a",)), ("fb", "FANOUT", ("b",)), ("fc", "FANOUT", ("c",)),
        ("ab", "AND", ("fa", "fb")), ("ac", "AND", ("fa", "fc")), ("bc", "AND", ("fb", "fc")),
        ("o1", "OR", ("ab", "ac")), ("o2", "OR", ("o1", "bc")), ("y", "OUTPUT", ("o2",))])


def crossing_netlist() -> Netlist:
    """y1 = a AND c, y2 = b AND d: with inputs stacked a, b, c, d the two gates' wires must cross."""
    return _net(["a", "b", "c", "d"], [("a", "INPUT", ()), ("b", "INPUT", ()), ("c", "INPUT", ()), ("d", "INPUT", ()),
                                       ("g", "AND", ("a", "c")), ("h", "AND", ("b", "d")),
                                       ("y1", "OUTPUT", ("g",)), ("y2", "OUTPUT", ("h",))])
