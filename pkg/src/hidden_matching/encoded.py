"""The encoded-RS product: an RS graph with a bit matrix routed through it.

Each host vertex v gets two representatives a_v and b_v. Edge i of matching j
becomes two parallel edges (a-a, b-b) when X[i, j] = 0 and two crossed edges
(a-b, b-a) when X[i, j] = 1. Ids: a_v = v and b_v = v + n on both sides.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .graph import BipartiteGraph, Edge, Matching
from .rs import RSGraph
from .textio import LineReader


@dataclass(frozen=True, eq=False)
class BitMatrix:
    bits: np.ndarray  # shape (rows, cols), dtype uint8

    def __post_init__(self):
        arr = np.array(self.bits, dtype=np.uint8)
        if arr.ndim != 2:
            raise ValueError("bit matrix must be two-dimensional")
        if np.any(arr > 1):
            raise ValueError("bit matrix entries must be 0 or 1")
        arr.setflags(write=False)
        object.__setattr__(self, "bits", arr)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def random(cls, rows: int, cols: int, rng: np.random.Generator) -> "BitMatrix":
        return cls(rng.integers(0, 2, size=(rows, cols), dtype=np.uint8))

    @property
    def rows(self) -> int:
        return self.bits.shape[0]

    @property
    def cols(self) -> int:
        return self.bits.shape[1]

    def __getitem__(self, key):
        return int(self.bits[key])

    def __eq__(self, other) -> bool:
        return isinstance(other, BitMatrix) and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.bits.shape, self.bits.tobytes()))

    def flipped(self, i: int, j: int) -> "BitMatrix":
        arr = self.bits.copy()
        arr[i, j] ^= 1
        return BitMatrix(arr)


@dataclass(frozen=True, eq=False)
class EncodedRS:
    host: RSGraph
    x: BitMatrix
    graph: BipartiteGraph
    rep_matchings: tuple[tuple[Edge, ...], ...]

    @property
    def n(self) -> int:
        """Host vertices per side (the encoded graph has 2n per side)."""
        return self.host.n

    def a(self, v: int) -> int:
        return v

    def b(self, v: int) -> int:
        return v + self.host.n

    def rep(self, v: int) -> tuple[int, int]:
        return (v, v + self.host.n)

    def as_rs(self) -> RSGraph:
        return RSGraph(self.graph, self.rep_matchings, 2 * self.host.r, self.host.t)

    @cached_property
    def rep_mates(self) -> tuple[dict[int, int], ...]:
        return tuple({u: v for u, v in m} for m in self.rep_matchings)


def encode_rs(host: RSGraph, x: BitMatrix) -> EncodedRS:
    if (x.rows, x.cols) != (host.r, host.t):
        raise ValueError(f"bit matrix is {x.rows}x{x.cols}, host needs {host.r}x{host.t}")
    n = host.n
    reps = []
    for j, block in enumerate(host.matchings):
        if len(block) != host.r:
            raise ValueError(f"host matching {j} has {len(block)} edges, expected r={host.r}")
        rep = []
        for i, (u, v) in enumerate(block):
            if x.bits[i, j]:
                rep.append((u, v + n))
                rep.append((u + n, v))
            else:
                rep.append((u, v))
                rep.append((u + n, v + n))
        reps.append(tuple(rep))
    graph = BipartiteGraph.from_edges(2 * n, 2 * n, (e for rep in reps for e in rep))
    return EncodedRS(host, x, graph, tuple(reps))


def rep_matching(h: EncodedRS, j: int) -> Matching:
    if not 0 <= j < len(h.rep_matchings):
        raise IndexError(f"matching index {j} outside [0, {len(h.rep_matchings)})")
    return Matching.of(h.rep_matchings[j])


# -- bit matrix file format ------------------------------------------------------

def format_bitmatrix(x: BitMatrix) -> str:
    lines = [f"bitmatrix {x.rows} {x.cols}"]
    lines.extend("".join(str(int(b)) for b in row) for row in x.bits)
    return "\n".join(lines) + "\n"


def read_bitmatrix(reader: LineReader) -> BitMatrix:
    rows, cols = reader.header("bitmatrix", 2)
    data = np.zeros((rows, cols), dtype=np.uint8)
    for i in range(rows):
        line = reader.next_line(f"bit matrix row {i}").strip()
        if len(line) != cols:
            raise reader.error(f"row {i} has {len(line)} bits, expected {cols}")
        for c, ch in enumerate(line):
            if ch not in "01":
                raise reader.error(f"bit must be 0 or 1, got {ch!r}", c + 1)
            data[i, c] = ch == "1"
    return BitMatrix(data)


def parse_bitmatrix(text: str, source: str | None = None) -> BitMatrix:
    reader = LineReader(text, source)
    x = read_bitmatrix(reader)
    if reader.peek() is not None:
        next(reader)
        raise reader.error("trailing content after bit matrix")
    return x
