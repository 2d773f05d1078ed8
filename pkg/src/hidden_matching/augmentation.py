"""Augmenting edges and paths, augmentation graphs, and their certificates.

Vertex layout of an augmentation graph built on an encoded host with n
vertices per side, r edges per matching and ell sequences:

* left  ``[0, 2n)``          encoded-graph left vertices
* left  ``[2n, 4n-2r)``      P vertices, paired with right encoded vertices
                              left uncovered by rep(M_j)
* right ``[0, 2n)``          encoded-graph right vertices
* right ``[2n, 4n-2r)``      P vertices, paired with left encoded vertices
                              left uncovered by rep(M_j)
* right ``[4n-2r, 4n-2r+ell)`` Q vertices; Q_i is paired with the start of path i

Sequences are written over host left-vertex ids of M_j. The a-end of path i
is the a-copy of the host right mate of the sequence's last vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .encoded import BitMatrix, EncodedRS, encode_rs, format_bitmatrix, read_bitmatrix
from .graph import BipartiteGraph, Edge, Matching, VertexCover, is_vertex_cover
from .rng import as_generator
from .rs import RSGraph, format_rs, read_rs
from .textio import LineReader

DEFAULT_DELTA = 0.1


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class SequenceFamily:
    j: int
    k: int
    sequences: tuple[tuple[int, ...], ...]

    @property
    def ell(self) -> int:
        return len(self.sequences)

    @classmethod
    def of(cls, j: int, k: int, sequences: Sequence[Sequence[int]]) -> "SequenceFamily":
        return cls(j, k, tuple(tuple(int(u) for u in s) for s in sequences))


def check_capacity(k: int, ell: int, r: int, delta: float = DEFAULT_DELTA) -> None:
    # small slack so k*ell == (1-delta)*r passes despite float rounding
    if k * ell > (1 - delta) * r + 1e-9:
        raise FamilyError(f"capacity violated: k*ell = {k * ell} > (1-delta)*r = {(1 - delta) * r:g}")


def check_family(host: RSGraph, family: SequenceFamily, delta: float = DEFAULT_DELTA) -> None:
    if not 0 <= family.j < host.t:
        raise FamilyError(f"matching index {family.j} outside [0, {host.t})")
    if family.k < 1:
        raise FamilyError("sequence length k must be >= 1")
    lefts = host.row_of_left(family.j)
    seen: set[int] = set()
    for i, seq in enumerate(family.sequences):
        if len(seq) != family.k:
            raise FamilyError(f"sequence {i} has length {len(seq)}, expected k={family.k}")
        for u in seq:
            if u not in lefts:
                raise FamilyError(f"vertex {u} of sequence {i} is not in L(M_{family.j})")
            if u in seen:
                raise FamilyError(f"vertex {u} used twice; sequences must be vertex-disjoint")
            seen.add(u)
    check_capacity(family.k, family.ell, host.r, delta)


def _check_sequence(encoded: EncodedRS, j: int, seq: Sequence[int]) -> dict[int, int]:
    mates = encoded.host.mates[j] if 0 <= j < encoded.host.t else None
    if mates is None:
        raise IndexError(f"matching index {j} outside [0, {encoded.host.t})")
    if len(set(seq)) != len(seq):
        raise FamilyError("sequence vertices must be distinct")
    for u in seq:
        if u not in mates:
            raise FamilyError(f"vertex {u} is not in L(M_{j})")
    return mates


def aug_edges(encoded: EncodedRS, j: int, seq: Sequence[int]) -> list[Edge]:
    """Edges a_{v_i} - a_{u_{i+1}} and b_{v_i} - b_{u_{i+1}}, as (left, right) pairs."""
    mates = _check_sequence(encoded, j, seq)
    n = encoded.n
    out = []
    for u_prev, u_next in zip(seq, seq[1:]):
        v = mates[u_prev]
        out.append((u_next, v))
        out.append((u_next + n, v + n))
    for e in out:
        assert e not in encoded.graph.edges, f"augmenting edge {e} already in the encoded graph"
    return out


@dataclass(frozen=True)
class AugPath:
    edges: tuple[Edge, ...]  # in path order, as (left, right) pairs
    start: int  # left id of a_{u_1}
    end: int  # right id, a_{v_k} or b_{v_k}
    ends_at_a: bool

    def left_vertices(self) -> list[int]:
        return [u for u, _ in self.edges[::2]]


def aug_path(encoded: EncodedRS, j: int, seq: Sequence[int]) -> AugPath:
    """Walk rep(M_j) and augmenting edges alternately from a_{u_1}."""
    ae = aug_edges(encoded, j, seq)
    return _trace(encoded, j, seq, ae)


def _trace(encoded: EncodedRS, j: int, seq: Sequence[int], ae: Sequence[Edge]) -> AugPath:
    rep_mate = encoded.rep_mates[j]
    ae_from_right = {v: u for u, v in ae}
    edges: list[Edge] = []
    x = encoded.a(seq[0])
    while True:
        y = rep_mate[x]
        edges.append((x, y))
        nxt = ae_from_right.get(y)
        if nxt is None:
            break
        edges.append((nxt, y))
        x = nxt
    assert len(edges) == 2 * len(seq) - 1, "augmenting path has the wrong length"
    return AugPath(tuple(edges), encoded.a(seq[0]), y, y < encoded.n)


def path_end_parity(column_bits: Sequence[int]) -> str:
    """'a' when the XOR of the bits is 0, else 'b'."""
    acc = 0
    for bit in column_bits:
        acc ^= int(bit)
    return "b" if acc else "a"


def column_bits(host: RSGraph, x: BitMatrix, j: int, seq: Sequence[int]) -> list[int]:
    rows = host.row_of_left(j)
    return [x[rows[u], j] for u in seq]


@dataclass(frozen=True)
class HBar:
    """Edges outside the encoded graph; they depend on (host, j, family) only."""

    ae_edges: tuple[Edge, ...]
    p_edges: tuple[Edge, ...]
    q_edges: tuple[Edge, ...]

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self.ae_edges + self.p_edges + self.q_edges


def h_bar_edges(host: RSGraph, family: SequenceFamily) -> HBar:
    n, r, j = host.n, host.r, family.j
    mates = host.mates[j]
    ae: list[Edge] = []
    for seq in family.sequences:
        for u_prev, u_next in zip(seq, seq[1:]):
            v = mates[u_prev]
            ae.append((u_next, v))
            ae.append((u_next + n, v + n))
    covered_left = {u for u in mates} | {u + n for u in mates}
    covered_right = {v for v in mates.values()} | {v + n for v in mates.values()}
    free_left = [x for x in range(2 * n) if x not in covered_left]
    free_right = [y for y in range(2 * n) if y not in covered_right]
    assert len(free_left) == len(free_right) == 2 * (n - r)
    p_edges = [(2 * n + i, y) for i, y in enumerate(free_right)]
    p_edges += [(x, 2 * n + i) for i, x in enumerate(free_left)]
    q_base = 4 * n - 2 * r
    q_edges = [(seq[0], q_base + i) for i, seq in enumerate(family.sequences)]
    return HBar(tuple(ae), tuple(p_edges), tuple(q_edges))


@dataclass(frozen=True, eq=False)
class AugGraph:
    encoded: EncodedRS
    family: SequenceFamily
    hbar: HBar
    paths: tuple[AugPath, ...]
    aug: frozenset[int]
    baug: frozenset[int]

    @property
    def j(self) -> int:
        return self.family.j

    @property
    def n(self) -> int:
        return self.encoded.n

    @property
    def r(self) -> int:
        return self.encoded.host.r

    @property
    def ell(self) -> int:
        return self.family.ell

    @property
    def left_count(self) -> int:
        return 4 * self.n - 2 * self.r

    @property
    def right_count(self) -> int:
        return 4 * self.n - 2 * self.r + self.ell

    @property
    def vertex_count(self) -> int:
        return self.left_count + self.right_count

    @property
    def p_left_ids(self) -> range:
        return range(2 * self.n, self.left_count)

    @property
    def p_right_ids(self) -> range:
        return range(2 * self.n, self.left_count)

    @property
    def q_ids(self) -> range:
        return range(self.left_count, self.right_count)

    @property
    def h_bar(self) -> tuple[Edge, ...]:
        return self.hbar.edges

    def end_a_vertex(self, i: int) -> int:
        """a_{v_{i,k}}: the a-copy of the host right mate of sequence i's last vertex."""
        u_last = self.family.sequences[i][-1]
        return self.encoded.host.mates[self.j][u_last]

    @cached_property
    def graph(self) -> BipartiteGraph:
        return BipartiteGraph.from_edges(
            self.left_count, self.right_count, list(self.encoded.graph.edges) + list(self.h_bar)
        )


def build_aug_graph(encoded: EncodedRS, family: SequenceFamily, delta: float = DEFAULT_DELTA) -> AugGraph:
    host = encoded.host
    check_family(host, family, delta)
    hbar = h_bar_edges(host, family)
    paths = []
    aug, baug = set(), set()
    n_ae = 0
    for i, seq in enumerate(family.sequences):
        ae = hbar.ae_edges[n_ae:n_ae + 2 * (len(seq) - 1)]
        n_ae += len(ae)
        path = _trace(encoded, family.j, seq, ae)
        a_end = host.mates[family.j][seq[-1]]
        expected = path_end_parity(column_bits(host, encoded.x, family.j, seq))
        assert path.ends_at_a == (expected == "a"), "traversal disagrees with the XOR rule"
        (aug if path.ends_at_a else baug).add(a_end)
        paths.append(path)
    for e in hbar.ae_edges:
        assert e not in encoded.graph.edges, f"augmenting edge {e} already in the encoded graph"
    return AugGraph(encoded, family, hbar, tuple(paths), frozenset(aug), frozenset(baug))


def build_m_star(a: AugGraph) -> Matching:
    """Matching of size 4n - 2r leaving every Aug vertex unmatched.

    rep(M_j) flipped along each Q-edge + augmenting path, plus the P-matching.
    """
    current = set(a.encoded.rep_matchings[a.j])
    for q_edge, path in zip(a.hbar.q_edges, a.paths):
        outside = [q_edge, *path.edges[1::2]]
        inside = path.edges[0::2]
        for e in inside:
            assert e in current, f"flip revisits edge {e}"
            current.remove(e)
        for e in outside:
            assert e not in current, f"flip revisits edge {e}"
            current.add(e)
    current.update(a.hbar.p_edges)
    m = Matching(frozenset(current))
    assert len(m) == 4 * a.n - 2 * a.r
    assert not (m.right_vertices & a.aug), "M* matches an Aug vertex"
    return m


def build_v_star(a: AugGraph) -> VertexCover:
    """Vertex cover of size 4n - 2r containing BarAug and avoiding Aug."""
    n = a.n
    rep = a.encoded.rep_matchings[a.j]
    rep_left = {u for u, _ in rep}
    rep_right = {v for _, v in rep}
    left = {x for x in range(2 * n) if x not in rep_left}
    right = {y for y in range(2 * n) if y not in rep_right}
    on_paths: set[Edge] = set()
    for path in a.paths:
        left.update(path.left_vertices())
        on_paths.update(path.edges[0::2])
    right.update(v for u, v in rep if (u, v) not in on_paths)
    cover = VertexCover(frozenset(left), frozenset(right))
    assert is_vertex_cover(a.graph, cover), "V* leaves an edge uncovered"
    assert len(cover) == 4 * n - 2 * a.r
    assert a.baug <= cover.right_ids and not (a.aug & cover.right_ids)
    return cover


# -- sampling ----------------------------------------------------------------------

def sample_family(host: RSGraph, j: int, ell: int, k: int, rng) -> SequenceFamily:
    """Uniform ordered family of ell vertex-disjoint k-sequences on L(M_j)."""
    rng = as_generator(rng, "family")
    block = host.matchings[j]
    rows = rng.permutation(len(block))[: k * ell]
    seqs = [tuple(block[int(rows[i * k + p])][0] for p in range(k)) for i in range(ell)]
    return SequenceFamily(j, k, tuple(seqs))


def sample_consistent_x(host: RSGraph, family: SequenceFamily, y: Sequence[int], rng) -> BitMatrix:
    """Uniform X subject to: column-j XOR over sequence i equals y_i.

    Draw X uniformly, then fix each sequence's parity through its last bit;
    the map is two-to-one onto the consistent set, hence uniform on it.
    """
    rng = as_generator(rng, "matrix")
    bits = rng.integers(0, 2, size=(host.r, host.t), dtype=np.uint8)
    rows = host.row_of_left(family.j)
    for seq, want in zip(family.sequences, y):
        parity = 0
        for u in seq:
            parity ^= int(bits[rows[u], family.j])
        if parity != int(want):
            bits[rows[seq[-1]], family.j] ^= 1
    return BitMatrix(bits)


def sample_aug_graph(host: RSGraph, y: Sequence[int], k: int, seed, delta: float = DEFAULT_DELTA) -> AugGraph:
    """Draw from the augmentation-graph distribution for target parities ``y``.

    j is uniform; the family is uniform; X is uniform among matrices whose
    path ends match y (a-end where y_i = 0). ``seed`` is an int or Generator.
    """
    y = [int(b) for b in y]
    if any(b not in (0, 1) for b in y):
        raise ValueError("y must be a bit string")
    check_capacity(k, len(y), host.r, delta)
    rng = as_generator(seed, "aug-graph")
    j = int(rng.integers(host.t))
    family = sample_family(host, j, len(y), k, rng)
    x = sample_consistent_x(host, family, y, rng)
    return build_aug_graph(encode_rs(host, x), family, delta)


# -- serialization -----------------------------------------------------------------

def format_aug_graph(a: AugGraph) -> str:
    lines = [f"auggraph {a.j} {a.family.k} {a.ell}", format_rs(a.encoded.host).rstrip("\n"),
             format_bitmatrix(a.encoded.x).rstrip("\n"), "sequences"]
    lines.extend(" ".join(map(str, s)) for s in a.family.sequences)
    lines.append("aug " + " ".join(map(str, sorted(a.aug))))
    lines.append("baug " + " ".join(map(str, sorted(a.baug))))
    return "\n".join(lines) + "\n"


def read_aug_graph(reader: LineReader, delta: float = DEFAULT_DELTA) -> AugGraph:
    """Parse, rebuild from (host, X, j, family), and check the stored partition."""
    j, k, ell = reader.header("auggraph", 3)
    host = read_rs(reader)
    x = read_bitmatrix(reader)
    if reader.next_line("'sequences'").strip() != "sequences":
        raise reader.error("expected 'sequences'")
    seqs = [reader.ints(reader.next_line("sequence"), k, "sequence") for _ in range(ell)]
    stored = {}
    for key in ("aug", "baug"):
        parts = reader.next_line(key).split()
        if parts[:1] != [key]:
            raise reader.error(f"expected '{key} ...'")
        stored[key] = frozenset(reader.ints(" ".join(parts[1:]), len(parts) - 1, key)) if len(parts) > 1 else frozenset()
    try:
        a = build_aug_graph(encode_rs(host, x), SequenceFamily.of(j, k, seqs), delta)
    except (FamilyError, ValueError, IndexError) as exc:
        raise reader.error(f"invalid augmentation graph: {exc}") from None
    if a.aug != stored["aug"] or a.baug != stored["baug"]:
        raise reader.error("stored aug/baug partition disagrees with the re-derived one")
    return a


def parse_aug_graph(text: str, source: str | None = None, delta: float = DEFAULT_DELTA) -> AugGraph:
    return read_aug_graph(LineReader(text, source), delta)
