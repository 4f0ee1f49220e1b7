"""Freezing totalistic cellular automata on triangular and square tori."""
from .config import Configuration, parse, serialize
from .deciders import decide, decide_all
from .engine import oracle_stable, run_to_fixed_point, step
from .grid import Kind, Topology
from .rules import Rule, RuleClass, classify, parse_rule
from .verdict import Method, StabilityVerdict

__all__ = [
    "Configuration", "Kind", "Method", "Rule", "RuleClass", "StabilityVerdict", "Topology",
    "classify", "decide", "decide_all", "oracle_stable", "parse", "parse_rule",
    "run_to_fixed_point", "serialize", "step",
]
