"""Configurations: dense 0/1 arrays on a torus, text I/O, random draws, D(x)."""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .errors import BadDimensions, BadHeader, BadSymbol
from .grid import Cell, Kind, Topology

_HEADER = re.compile(r"(SQ|TRI) ([1-9][0-9]*)")


@dataclass(frozen=True, eq=False)
class Configuration:
    topology: Topology
    states: np.ndarray
    doubled: bool = field(default=False, compare=False)  # odd TRI input tiled twice

    def __post_init__(self):
        a = np.ascontiguousarray(self.states, dtype=np.uint8)
        if a.shape != self.topology.shape:
            raise BadDimensions(f"state shape {a.shape} != {self.topology.shape}")
        if a.size and a.max() > 1:
            raise BadSymbol("states must be 0 or 1")
        if a is self.states:
            a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "states", a)

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return self.topology == other.topology and np.array_equal(self.states, other.states)

    def __hash__(self):
        return hash((self.topology, self.states.tobytes()))

    def __getitem__(self, cell: Cell) -> int:
        return int(self.states[self.topology.canonical(cell)])

    @property
    def flat(self) -> np.ndarray:
        return self.states.ravel()

    def active_count(self) -> int:
        return int(self.states.sum())

    def with_cells(self, cells, value: int = 1) -> "Configuration":
        a = self.states.copy()
        for c in cells:
            a[self.topology.canonical(c)] = value
        return Configuration(self.topology, a)


def zeros(t: Topology) -> Configuration:
    return Configuration(t, np.zeros(t.shape, np.uint8))


def from_array(kind: Kind, a) -> Configuration:
    a = np.asarray(a, dtype=np.uint8)
    return Configuration(Topology(kind, *a.shape), a)


def parse(text) -> Configuration:
    """Read the ``SQ n`` / ``TRI n`` text format.

    Odd triangular inputs are stacked twice vertically (same periodic
    configuration, consistent orientations) and flagged ``doubled``.
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError as e:
            raise BadSymbol(str(e)) from None
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise BadHeader("empty input")
    m = _HEADER.fullmatch(lines[0])
    if not m:
        raise BadHeader(f"bad header line {lines[0]!r}")
    kind = Kind.SQUARE if m.group(1) == "SQ" else Kind.TRIANGULAR
    n = int(m.group(2))
    width = n if kind is Kind.SQUARE else 2 * n
    body = lines[1:]
    if len(body) != n:
        raise BadDimensions(f"expected {n} rows, got {len(body)}")
    rows = []
    for i, line in enumerate(body):
        bad = set(line) - {"0", "1"}
        if bad:
            raise BadSymbol(f"row {i}: unexpected {sorted(bad)!r}")
        if len(line) != width:
            raise BadDimensions(f"row {i}: expected {width} symbols, got {len(line)}")
        rows.append([ch == "1" for ch in line])
    a = np.array(rows, dtype=np.uint8).reshape(n, width)
    if kind is Kind.TRIANGULAR and n % 2:
        return Configuration(Topology(kind, 2 * n, width), np.vstack([a, a]), doubled=True)
    return Configuration(Topology(kind, n, width), a)


def serialize(c: Configuration) -> str:
    t = c.topology
    a = c.states
    if t.kind is Kind.SQUARE:
        head = f"SQ {t.rows}"
    elif t.cols == 2 * t.rows:
        head = f"TRI {t.rows}"
    elif t.rows == t.cols and (t.rows // 2) % 2 and np.array_equal(a[: t.rows // 2], a[t.rows // 2:]):
        a = a[: t.rows // 2]
        head = f"TRI {a.shape[0]}"
    else:
        raise BadDimensions(f"{t.rows}x{t.cols} triangular array has no text form")
    body = ["".join("1" if v else "0" for v in row) for row in a]
    return "\n".join([head, *body]) + "\n"


def random(t: Topology, density: float, seed: int) -> Configuration:
    """Independent Bernoulli cells drawn from numpy's PCG64 stream.

    The cell (r, c) takes the (r*cols + c)-th double of
    ``Generator(PCG64(seed)).random`` and is active iff it is below density.
    """
    if not 0.0 <= density <= 1.0:
        raise ValueError("density must lie in [0, 1]")
    rng = np.random.Generator(np.random.PCG64(seed))
    a = rng.random(t.size) < density
    return Configuration(t, a.reshape(t.shape).astype(np.uint8))


@dataclass(frozen=True)
class PaddedConfiguration:
    base: Configuration
    padded: Configuration
    origin_offset: tuple[int, int]
    border_width: int

    def image(self, cell: Cell) -> Cell:
        return (self.origin_offset[0] + cell[0], self.origin_offset[1] + cell[1])

    def border_mask(self) -> np.ndarray:
        m = self.padded.topology.rows
        b = self.border_width
        mask = np.ones((m, m), bool)
        mask[b: m - b, b: m - b] = False
        return mask


def padded_size(n: int) -> int:
    return 2 * n * n + 3 * n


def build_padded(x: Configuration, u: Cell | None = None) -> PaddedConfiguration:
    """D(x): (2n+1) x (2n+1) copies of x inside an n-wide inactive frame.

    The copy holding the original cells sits in the centre of the block of
    copies, so coordinates -n^2 .. n^2+n of the figure become
    n .. 2n^2+2n here.
    """
    t = x.topology
    if t.kind is not Kind.SQUARE:
        raise ValueError("D(x) is defined for square configurations")
    if u is not None and x[u]:
        raise ValueError("the query cell must be inactive")
    n = t.rows
    m = padded_size(n)
    a = np.zeros((m, m), np.uint8)
    k = 2 * n + 1
    a[n: n + k * n, n: n + k * n] = np.tile(x.states, (k, k))
    off = n + n * n
    return PaddedConfiguration(x, Configuration(Topology.square(m), a), (off, off), n)
