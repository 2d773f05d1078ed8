"""Ruzsa-Szemeredi graphs: constructions, a verifier, and the RS file format.

An (r, t)-RS graph is a bipartite graph whose edges split into t induced
matchings of r edges each. Matchings are kept as ordered edge tuples: the
position of an edge inside its matching is the row index used by bit-matrix
encodings, so the order is part of the object and is serialized.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .graph import BipartiteGraph, DuplicateEdgeError, Edge, Matching
from .textio import LineReader

MAX_RS_EDGES = 10**7
BRUTE_FORCE_AP_LIMIT = 24
MAX_BEHREND_CANDIDATES = 2_000_000


@dataclass(frozen=True)
class RSGraph:
    """A bipartite graph plus a claimed partition into induced matchings.

    Construction does not certify anything; run :func:`verify_rs`.
    """

    graph: BipartiteGraph
    matchings: tuple[tuple[Edge, ...], ...]
    r: int
    t: int

    @classmethod
    def from_matchings(cls, n: int, matchings: Sequence[Sequence[Edge]]) -> "RSGraph":
        blocks = tuple(tuple((int(u), int(v)) for u, v in m) for m in matchings)
        edges = [e for m in blocks for e in m]
        graph = BipartiteGraph.from_edges(n, n, edges)
        r = len(blocks[0]) if blocks else 0
        return cls(graph, blocks, r, len(blocks))

    @property
    def n(self) -> int:
        return self.graph.left_count

    def matching(self, j: int) -> Matching:
        self._check_index(j)
        return Matching.of(self.matchings[j])

    def _check_index(self, j: int) -> None:
        if not 0 <= j < len(self.matchings):
            raise IndexError(f"matching index {j} outside [0, {len(self.matchings)})")

    def row_of_left(self, j: int) -> dict[int, int]:
        """Left vertex of M_j -> its edge position (row index) in M_j."""
        self._check_index(j)
        return {u: i for i, (u, _) in enumerate(self.matchings[j])}

    @cached_property
    def mates(self) -> tuple[dict[int, int], ...]:
        return tuple({u: v for u, v in m} for m in self.matchings)


@dataclass(frozen=True)
class Finding:
    kind: str
    detail: str
    matching: int | None = None
    witness: Edge | None = None

    def as_dict(self) -> dict:
        out = {"kind": self.kind, "detail": self.detail}
        if self.matching is not None:
            out["matching"] = self.matching
        if self.witness is not None:
            out["witness"] = list(self.witness)
        return out


@dataclass
class RSReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.findings

    def kinds(self) -> set[str]:
        return {f.kind for f in self.findings}


def verify_rs(c: RSGraph) -> RSReport:
    """Check every RS invariant and report all violations; never raises."""
    report = RSReport()
    add = report.findings.append
    g = c.graph

    if g.left_count != g.right_count:
        add(Finding("shape", f"sides differ: {g.left_count} vs {g.right_count}"))
    if len(c.matchings) != c.t:
        add(Finding("count", f"declared t={c.t} but {len(c.matchings)} matchings listed"))

    owner: dict[Edge, int] = {}
    # matching indices each vertex appears in, per side
    left_in: dict[int, list[int]] = {}
    right_in: dict[int, list[int]] = {}
    for j, block in enumerate(c.matchings):
        if len(block) != c.r:
            add(Finding("size", f"matching {j} has {len(block)} edges, expected {c.r}", j,
                        block[0] if block else None))
        lefts: set[int] = set()
        rights: set[int] = set()
        for e in block:
            u, v = e
            if e not in g.edges:
                add(Finding("partition", f"edge {e} of matching {j} is not in the graph", j, e))
            if e in owner:
                add(Finding("partition", f"edge {e} listed in matchings {owner[e]} and {j}", j, e))
            else:
                owner[e] = j
            if u in lefts or v in rights:
                add(Finding("not-a-matching", f"matching {j} reuses an endpoint of {e}", j, e))
            lefts.add(u)
            rights.add(v)
        for u in lefts:
            left_in.setdefault(u, []).append(j)
        for v in rights:
            right_in.setdefault(v, []).append(j)

    for e in sorted(g.edges - owner.keys()):
        add(Finding("partition", f"graph edge {e} belongs to no matching", None, e))

    members = [set(block) for block in c.matchings]
    for e in sorted(g.edges):
        js = left_in.get(e[0])
        if not js:
            continue
        rj = right_in.get(e[1])
        if not rj:
            continue
        for j in set(js).intersection(rj):
            if e not in members[j]:
                add(Finding("induced", f"edge {e} joins two vertices of matching {j}", j, e))
    return report


def disjoint_blocks_rs(r: int, t: int) -> RSGraph:
    """t vertex-disjoint blocks, block j a perfect matching on its own r+r vertices."""
    if r < 1 or t < 1:
        raise ValueError("need r >= 1 and t >= 1")
    if r * t > MAX_RS_EDGES:
        raise OverflowError(f"r*t = {r * t} exceeds the {MAX_RS_EDGES} edge limit")
    blocks = [[(j * r + i, j * r + i) for i in range(r)] for j in range(t)]
    return RSGraph.from_matchings(r * t, blocks)


@dataclass(frozen=True)
class APFreeSet:
    universe_bound: int
    members: tuple[int, ...]

    def __post_init__(self):
        if list(self.members) != sorted(set(self.members)):
            raise ValueError("members must be strictly increasing")
        if self.members and not (1 <= self.members[0] and self.members[-1] <= self.universe_bound):
            raise ValueError("members must lie in [1, universe_bound]")
        witness = find_three_ap(self.members)
        if witness is not None:
            raise ValueError(f"set contains the 3-term progression {witness}")

    def __len__(self) -> int:
        return len(self.members)


def find_three_ap(members: Iterable[int]) -> tuple[int, int, int] | None:
    ms = sorted(members)
    present = set(ms)
    for a, b in itertools.combinations(ms, 2):
        if 2 * b - a in present:
            return (a, b, 2 * b - a)
    return None


def brute_force_ap_free(k_max: int) -> APFreeSet:
    """Largest 3-AP-free subset of [1, k_max]; lexicographically least among ties.

    Include-first depth-first search: the first maximum-size set reached is
    the lexicographically least one, and later branches only replace it when
    strictly larger.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    if k_max > BRUTE_FORCE_AP_LIMIT:
        raise ValueError(f"exhaustive search is limited to k_max <= {BRUTE_FORCE_AP_LIMIT}")

    best: list[int] = []
    chosen: list[int] = []

    def search(x: int, forbidden: int) -> None:
        nonlocal best
        if len(chosen) + (k_max - x + 1) <= len(best):
            return
        if x > k_max:
            best = list(chosen)
            return
        if not (forbidden >> x) & 1:
            # x completes no progression; taking it forbids 2x - a for every chosen a
            extra = 0
            for a in chosen:
                c = 2 * x - a
                if c <= k_max:
                    extra |= 1 << c
            chosen.append(x)
            search(x + 1, forbidden | extra)
            chosen.pop()
        search(x + 1, forbidden)

    search(1, 0)
    return APFreeSet(k_max, tuple(best))


def behrend_ap_free(k_max: int) -> APFreeSet:
    """Behrend-style 3-AP-free set in [1, k_max].

    For each digit bound d, integers whose base-(2d-1) digits all lie in
    [0, d-1] add without carries, so a progression among them is a
    progression of digit vectors; on a sphere (fixed sum of squared digits)
    that forces the three vectors to coincide. Every norm shell is scanned and
    the largest shell, shifted by +1 into [1, k_max], is returned.
    """
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    best: tuple[int, ...] = (1, 2)
    limit = k_max - 1  # values v in [0, limit] map to members v + 1
    d = 2
    while 2 * d - 1 <= k_max:
        base = 2 * d - 1
        width = 1
        while base**width <= limit:
            width += 1
        if width <= 2 and d > 64:
            break  # planar shells hold few lattice points; nothing left to gain
        top = min(d - 1, limit // base ** (width - 1))
        if d ** (width - 1) * (top + 1) <= MAX_BEHREND_CANDIDATES:
            values = np.zeros(1, dtype=np.int64)
            norms = np.zeros(1, dtype=np.int64)
            for pos in range(width):
                digits = np.arange((top if pos == width - 1 else d - 1) + 1, dtype=np.int64)
                values = (values[:, None] + digits[None, :] * base**pos).ravel()
                norms = (norms[:, None] + digits[None, :] ** 2).ravel()
            keep = values <= limit
            values, norms = values[keep], norms[keep]
            shells, counts = np.unique(norms, return_counts=True)
            pick = int(np.argmax(counts))  # first maximum: smallest norm on ties
            shell = shells[pick]
            if counts[pick] > len(best):
                best = tuple(int(v) + 1 for v in np.sort(values[norms == shell]))
        d += 1
    return APFreeSet(k_max, best)


def ap_rs(m: int, s: APFreeSet) -> RSGraph:
    """RS graph from an AP-free set: M_x = {(x+s, x+2s) : s in S} for x in [1, m].

    Vertex labels run over [1, m + 2 max(S)] on both sides; label ``a`` is
    stored as id ``a - 1``. Edges within a matching follow ascending s.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if not s.members:
        raise ValueError("S must be nonempty")
    n = m + 2 * max(s.members)
    blocks = [[(x + a - 1, x + 2 * a - 1) for a in s.members] for x in range(1, m + 1)]
    try:
        return RSGraph.from_matchings(n, blocks)
    except DuplicateEdgeError as exc:
        raise AssertionError(f"AP-free set produced colliding edges: {exc}") from None


def bipartite_double_cover(n: int, edges: Iterable[tuple[int, int]]) -> BipartiteGraph:
    """Edge {u, v} of a simple graph on n vertices becomes (u, v) and (v, u)."""
    out = []
    for u, v in edges:
        if u == v:
            raise ValueError(f"self-loop at {u}")
        out.append((u, v))
        out.append((v, u))
    return BipartiteGraph.from_edges(n, n, out)


def double_cover_rs(n: int, matchings: Sequence[Sequence[tuple[int, int]]]) -> RSGraph:
    """Double cover of a general (r, t)-RS graph, as a (2r, t) bipartite RS graph."""
    blocks = [[e for u, v in m for e in ((u, v), (v, u))] for m in matchings]
    bipartite_double_cover(n, [e for m in matchings for e in m])  # validates simplicity
    return RSGraph.from_matchings(n, blocks)


# -- RS file format ------------------------------------------------------------

def format_rs(c: RSGraph) -> str:
    lines = [f"rsgraph {c.n} {c.r} {c.t}"]
    for j, block in enumerate(c.matchings):
        lines.append(f"matching {j}")
        lines.extend(f"{u} {v}" for u, v in block)
    return "\n".join(lines) + "\n"


def read_rs(reader: LineReader) -> RSGraph:
    n, r, t = reader.header("rsgraph", 3)
    blocks: list[list[Edge]] = []
    while len(blocks) < t:
        line = reader.next_line(f"'matching {len(blocks)}'")
        parts = line.split()
        if parts[:1] != ["matching"]:
            raise reader.error(f"expected 'matching {len(blocks)}', got {line.strip()!r}")
        (j,) = reader.ints(" ".join(parts[1:]), 1, "matching index")
        if j != len(blocks):
            raise reader.error(f"matching blocks out of order: got {j}, expected {len(blocks)}")
        block: list[Edge] = []
        while True:
            nxt = reader.peek()
            if nxt is None or not nxt.split()[0].lstrip("-").isdigit():
                break
            u, v = reader.ints(reader.next_line("edge"), 2, "edge")
            if not (0 <= u < n and 0 <= v < n):
                raise reader.error(f"edge ({u}, {v}) out of range for n={n}")
            block.append((u, v))
        blocks.append(block)
    edges = {e for b in blocks for e in b}
    graph = BipartiteGraph(n, n, frozenset(edges))
    return RSGraph(graph, tuple(tuple(b) for b in blocks), r, t)


def parse_rs(text: str, source: str | None = None) -> RSGraph:
    reader = LineReader(text, source)
    rs = read_rs(reader)
    extra = reader.peek()
    if extra is not None:
        next(reader)
        raise reader.error(f"trailing content after {rs.t} matchings: {extra.strip()!r}")
    return rs
