from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Union


class Method(str, enum.Enum):
    ORACLE = "Oracle"
    TRIVIAL = "Trivial"
    TWO_CORE = "TwoCore"
    TREE_DEPTH = "TreeDepth"
    THREE_CORE = "ThreeCore"
    SEMI_PLANE = "SemiPlane"
    DIAGONAL_OR = "DiagonalOr"
    CORRIDOR_124 = "Corridor124"


@dataclass(frozen=True)
class StabilityVerdict:
    """Answer to "is u stable?".

    ``activation_time`` is an int when exact, a frozenset of candidate
    times when only bounded, and None for stable cells or when the method
    does not compute it.
    """
    stable: bool
    activation_time: Optional[Union[int, frozenset]]
    method: Method

    def __post_init__(self):
        if self.stable and self.activation_time is not None:
            raise ValueError("a stable cell has no activation time")

    @classmethod
    def stable_by(cls, method: Method) -> "StabilityVerdict":
        return cls(True, None, method)

    @classmethod
    def active_at(cls, t, method: Method) -> "StabilityVerdict":
        return cls(False, t, method)

    def same_answer(self, other: "StabilityVerdict") -> bool:
        """Verdicts agree, and exact times agree when both are exact."""
        if self.stable != other.stable:
            return False
        a, b = self.activation_time, other.activation_time
        if isinstance(a, int) and isinstance(b, int):
            return a == b
        if isinstance(a, frozenset) and isinstance(b, int):
            return b in a
        if isinstance(b, frozenset) and isinstance(a, int):
            return a in b
        return True
