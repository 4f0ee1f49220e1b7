"""Rules named by their activating neighbour sums, and their classes."""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import BadRuleName
from .grid import Kind


class RuleClass(str, enum.Enum):
    TRIVIAL = "Trivial"
    TOPOLOGICAL = "Topological"
    ALGEBRAIC = "Algebraic"
    TURING_UNIVERSAL = "TuringUniversal"
    FRACTAL_GROWING = "FractalGrowing"
    NON_QUIESCENT = "NonQuiescent"


@dataclass(frozen=True)
class Rule:
    grid_kind: Kind
    activating_sums: frozenset

    def __post_init__(self):
        top = 3 if self.grid_kind is Kind.TRIANGULAR else 4
        sums = frozenset(int(s) for s in self.activating_sums)
        if any(s < 0 or s > top for s in sums):
            raise BadRuleName(f"sums {sorted(sums)} out of range for {self.grid_kind.value}")
        object.__setattr__(self, "activating_sums", sums)

    @property
    def name(self) -> str:
        return "".join(str(s) for s in sorted(self.activating_sums)) or "phi"

    @property
    def quiescent(self) -> bool:
        return 0 not in self.activating_sums

    def lookup(self):
        """Boolean table indexed by neighbour sum."""
        import numpy as np
        top = 3 if self.grid_kind is Kind.TRIANGULAR else 4
        return np.array([s in self.activating_sums for s in range(top + 1)])

    def __str__(self):
        return f"{self.grid_kind.value}:{self.name}"


def parse_rule(name: str, grid: Kind | str) -> Rule:
    grid = Kind(grid)
    if name == "phi":
        return Rule(grid, frozenset())
    if not name or not name.isdigit():
        raise BadRuleName(f"bad rule name {name!r}")
    digits = [int(ch) for ch in name]
    if any(b <= a for a, b in zip(digits, digits[1:])):
        raise BadRuleName(f"digits of {name!r} must strictly increase")
    top = 3 if grid is Kind.TRIANGULAR else 4
    if digits[-1] > top:
        raise BadRuleName(f"digit {digits[-1]} exceeds the neighbourhood size {top}")
    return Rule(grid, frozenset(digits))


_TRI = {
    "phi": RuleClass.TRIVIAL, "123": RuleClass.TRIVIAL, "3": RuleClass.TRIVIAL,
    "2": RuleClass.TOPOLOGICAL, "23": RuleClass.TOPOLOGICAL,
    "12": RuleClass.ALGEBRAIC,
    "1": RuleClass.FRACTAL_GROWING, "13": RuleClass.FRACTAL_GROWING,
}
_SQ = {
    "phi": RuleClass.TRIVIAL, "1234": RuleClass.TRIVIAL, "4": RuleClass.TRIVIAL,
    "234": RuleClass.TOPOLOGICAL, "3": RuleClass.TOPOLOGICAL, "34": RuleClass.TOPOLOGICAL,
    "12": RuleClass.ALGEBRAIC, "123": RuleClass.ALGEBRAIC, "124": RuleClass.ALGEBRAIC,
    "2": RuleClass.TURING_UNIVERSAL, "24": RuleClass.TURING_UNIVERSAL,
    # the square list skips 23; it only gets the oracle, like 2 and 24
    "23": RuleClass.TURING_UNIVERSAL,
    "1": RuleClass.FRACTAL_GROWING, "13": RuleClass.FRACTAL_GROWING,
    "14": RuleClass.FRACTAL_GROWING, "134": RuleClass.FRACTAL_GROWING,
}


def classify(r: Rule) -> RuleClass:
    if not r.quiescent:
        return RuleClass.NON_QUIESCENT
    table = _TRI if r.grid_kind is Kind.TRIANGULAR else _SQ
    return table[r.name]


def all_rules(grid: Kind) -> list[Rule]:
    top = 3 if grid is Kind.TRIANGULAR else 4
    out = []
    for mask in range(1 << (top + 1)):
        out.append(Rule(grid, frozenset(s for s in range(top + 1) if mask >> s & 1)))
    return out
