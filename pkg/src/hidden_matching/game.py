"""Hidden-Matching instances: sampling, certificates, streams, and formulas.

Union-graph layout (n = 8 n2 - 4 r2 + 2 n1 vertices per side)::

    left  [0, n1)                 L(G_A)       host ids of the first RS graph
    left  [n1, n1 + B)            A_L left     B = 4 n2 - 2 r2
    left  [n1 + B, n)             A_R right    (A_R is mirrored)
    right [0, n1)                 R(G_A)
    right [n1, n1 + B + n1)       A_L right
    right [n1 + B + n1, n)        A_R left

M_L joins left vertex i of G_A to the a-end of A_L's i-th path; M_R joins
right vertex i of G_A to the a-end of A_R's i-th path. Mirroring A_R is what
keeps the union bipartite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .augmentation import (AugGraph, FamilyError, build_m_star, build_v_star,
                           format_aug_graph, read_aug_graph, sample_aug_graph)
from .graph import (BipartiteGraph, Edge, Matching, VertexCover, hopcroft_karp,
                    is_bipartite_two_colorable, is_matching, is_vertex_cover)
from .rng import check_seed, substream
from .rs import RSGraph, format_rs, read_rs
from .textio import FormatError, LineReader


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class GameParams:
    n1: int
    r1: int
    t1: int
    n2: int
    r2: int
    t2: int
    k: int
    delta: float = 0.1

    def __post_init__(self):
        if not 0 <= self.delta < 0.25:
            raise ParameterError(f"delta must lie in [0, 1/4), got {self.delta}")
        if self.k < 1:
            raise ParameterError("k must be >= 1")
        if not (0 <= self.r1 <= self.n1 and 0 <= self.r2 <= self.n2):
            raise ParameterError("need r1 <= n1 and r2 <= n2")
        if self.t1 < 1 or self.t2 < 1:
            raise ParameterError("need t1, t2 >= 1")
        if self.k * self.n1 > (1 - self.delta) * self.r2 + 1e-9:
            raise ParameterError(
                f"capacity: k*n1 = {self.k * self.n1} exceeds (1-delta)*r2 = {(1 - self.delta) * self.r2:g}"
            )

    @classmethod
    def from_rs(cls, rs1: RSGraph, rs2: RSGraph, k: int, delta: float = 0.1) -> "GameParams":
        return cls(rs1.n, rs1.r, rs1.t, rs2.n, rs2.r, rs2.t, k, delta)

    def check_rs(self, rs1: RSGraph, rs2: RSGraph) -> None:
        if (rs1.n, rs1.r, rs1.t) != (self.n1, self.r1, self.t1):
            raise ParameterError(f"first RS graph is ({rs1.n},{rs1.r},{rs1.t}), params say "
                                 f"({self.n1},{self.r1},{self.t1})")
        if (rs2.n, rs2.r, rs2.t) != (self.n2, self.r2, self.t2):
            raise ParameterError(f"second RS graph is ({rs2.n},{rs2.r},{rs2.t}), params say "
                                 f"({self.n2},{self.r2},{self.t2})")

    @property
    def n(self) -> int:
        return 8 * self.n2 - 4 * self.r2 + 2 * self.n1

    def as_dict(self) -> dict:
        return {"n1": self.n1, "r1": self.r1, "t1": self.t1, "n2": self.n2, "r2": self.r2,
                "t2": self.t2, "k": self.k, "delta": self.delta}


@dataclass(frozen=True)
class Layout:
    """Public id layout of the union graph; a function of the parameters only."""

    n1: int
    n2: int
    r2: int

    @property
    def block(self) -> int:
        return 4 * self.n2 - 2 * self.r2

    @property
    def n(self) -> int:
        return 2 * self.n1 + 2 * self.block

    @property
    def al_left(self) -> int:
        return self.n1

    @property
    def al_right(self) -> int:
        return self.n1

    @property
    def ar_right(self) -> int:  # offset of A_R's right side, placed on the union left
        return self.n1 + self.block

    @property
    def ar_left(self) -> int:  # offset of A_R's left side, placed on the union right
        return 2 * self.n1 + self.block

    def map_left_aug(self, e: Edge) -> Edge:
        return (self.al_left + e[0], self.al_right + e[1])

    def map_right_aug(self, e: Edge) -> Edge:
        return (self.ar_right + e[1], self.ar_left + e[0])

    def ranges(self) -> dict[str, tuple[str, int, int]]:
        n1, b = self.n1, self.block
        return {
            "ga_left": ("left", 0, n1),
            "ga_right": ("right", 0, n1),
            "al_left": ("left", n1, n1 + b),
            "al_right": ("right", n1, 2 * n1 + b),
            "ar_right": ("left", n1 + b, self.n),
            "ar_left": ("right", 2 * n1 + b, self.n),
        }


@dataclass(frozen=True, eq=False)
class GameInstance:
    params: GameParams
    rs1: RSGraph
    rs2: RSGraph
    seed: int
    j1: int
    dropped: tuple[Edge, ...]
    a_l: AugGraph
    a_r: AugGraph

    @cached_property
    def layout(self) -> Layout:
        return Layout(self.params.n1, self.params.n2, self.params.r2)

    @property
    def n(self) -> int:
        return self.layout.n

    @cached_property
    def g_a(self) -> tuple[Edge, ...]:
        gone = set(self.dropped)
        return tuple(e for e in sorted(self.rs1.graph.edges) if e not in gone)

    @cached_property
    def hidden(self) -> frozenset[Edge]:
        return frozenset(self.rs1.matchings[self.j1])

    @cached_property
    def surviving_hidden(self) -> frozenset[Edge]:
        return self.hidden & frozenset(self.g_a)

    @cached_property
    def y_l(self) -> tuple[int, ...]:
        lefts = {u for u, _ in self.rs1.matchings[self.j1]}
        return tuple(int(i in lefts) for i in range(self.params.n1))

    @cached_property
    def y_r(self) -> tuple[int, ...]:
        rights = {v for _, v in self.rs1.matchings[self.j1]}
        return tuple(int(i in rights) for i in range(self.params.n1))

    @cached_property
    def g_b(self) -> tuple[Edge, ...]:
        lay = self.layout
        out = [lay.map_left_aug(e) for e in sorted(self.a_l.encoded.graph.edges)]
        out += [lay.map_right_aug(e) for e in sorted(self.a_r.encoded.graph.edges)]
        return tuple(sorted(out))

    @cached_property
    def m_l(self) -> tuple[Edge, ...]:
        lay = self.layout
        return tuple((i, lay.al_right + self.a_l.end_a_vertex(i)) for i in range(self.params.n1))

    @cached_property
    def m_r(self) -> tuple[Edge, ...]:
        lay = self.layout
        return tuple((lay.ar_right + self.a_r.end_a_vertex(i), i) for i in range(self.params.n1))

    @cached_property
    def g2(self) -> tuple[Edge, ...]:
        lay = self.layout
        out = list(self.m_l) + list(self.m_r)
        out += [lay.map_left_aug(e) for e in self.a_l.h_bar]
        out += [lay.map_right_aug(e) for e in self.a_r.h_bar]
        return tuple(sorted(out))

    @cached_property
    def union_graph(self) -> BipartiteGraph:
        return BipartiteGraph.from_edges(self.n, self.n, self.g_a + self.g_b + self.g2)

    def map_cover(self, side: str, cover: VertexCover) -> tuple[set[int], set[int]]:
        """Union (left, right) ids of an augmentation-graph cover."""
        lay = self.layout
        if side == "L":
            return ({lay.al_left + u for u in cover.left_ids}, {lay.al_right + v for v in cover.right_ids})
        return ({lay.ar_right + v for v in cover.right_ids}, {lay.ar_left + u for u in cover.left_ids})

    def map_matching(self, side: str, m: Matching) -> list[Edge]:
        lay = self.layout
        f = lay.map_left_aug if side == "L" else lay.map_right_aug
        return [f(e) for e in m.edges]


def assemble_instance(params: GameParams, rs1: RSGraph, rs2: RSGraph, seed: int, j1: int,
                      dropped: Iterable[Edge], a_l: AugGraph, a_r: AugGraph) -> GameInstance:
    params.check_rs(rs1, rs2)
    if not 0 <= j1 < rs1.t:
        raise ParameterError(f"j1={j1} outside [0, {rs1.t})")
    inst = GameInstance(params, rs1, rs2, seed, j1, tuple(sorted(dropped)), a_l, a_r)
    if list(inst.y_l) != [1 - int(a_l.end_a_vertex(i) in a_l.aug) for i in range(params.n1)]:
        raise ParameterError("left augmentation graph does not realize Y_L")
    if list(inst.y_r) != [1 - int(a_r.end_a_vertex(i) in a_r.aug) for i in range(params.n1)]:
        raise ParameterError("right augmentation graph does not realize Y_R")
    return inst


def sample_drop(rs1: RSGraph, delta: float, rng) -> list[Edge]:
    coins = rng.random(len(rs1.graph.edges))
    return [e for e, c in zip(rs1.graph.sorted_edges, coins) if c < delta]


def sample_instance(params: GameParams, rs1: RSGraph, rs2: RSGraph, seed: int,
                    drop_seed: int | None = None) -> GameInstance:
    """Sample a Hidden-Matching instance.

    Labeled substreams: ``drop`` (edge removals in G_A), ``j1``, ``aug-L`` and
    ``aug-R``. ``drop_seed`` reseeds only the removals, which leaves
    G_B and G_2 untouched.
    """
    seed = check_seed(seed)
    params.check_rs(rs1, rs2)
    dropped = sample_drop(rs1, params.delta, substream(seed if drop_seed is None else drop_seed, "drop"))
    j1 = int(substream(seed, "j1").integers(rs1.t))
    lefts = {u for u, _ in rs1.matchings[j1]}
    rights = {v for _, v in rs1.matchings[j1]}
    y_l = [int(i in lefts) for i in range(params.n1)]
    y_r = [int(i in rights) for i in range(params.n1)]
    a_l = sample_aug_graph(rs2, y_l, params.k, substream(seed, "aug-L"), params.delta)
    a_r = sample_aug_graph(rs2, y_r, params.k, substream(seed, "aug-R"), params.delta)
    return assemble_instance(params, rs1, rs2, seed, j1, dropped, a_l, a_r)


def check_instance(inst: GameInstance) -> list[str]:
    """Structural invariants of an instance; returns violated ones (empty if fine)."""
    bad: list[str] = []
    p = inst.params
    if inst.n != p.n or inst.n != 8 * p.n2 - 4 * p.r2 + 2 * p.n1:
        bad.append(f"size formula: n={inst.n}, expected {8 * p.n2 - 4 * p.r2 + 2 * p.n1}")
    for name, a in (("A_L", inst.a_l), ("A_R", inst.a_r)):
        if a.vertex_count != 8 * p.n2 - 4 * p.r2 + p.n1:
            bad.append(f"{name} has {a.vertex_count} vertices, expected 8n2-4r2+n1")

    # 2-color the union over component-local names; sides must agree with the layout
    names: dict[tuple, int] = {}

    def vid(name: tuple) -> int:
        return names.setdefault(name, len(names))

    local_edges = []
    for u, v in inst.g_a:
        local_edges.append((vid(("GA", "L", u)), vid(("GA", "R", v))))
    for tag, a in (("AL", inst.a_l), ("AR", inst.a_r)):
        for u, v in a.graph.edges:
            local_edges.append((vid((tag, "L", u)), vid((tag, "R", v))))
    for i in range(p.n1):
        local_edges.append((vid(("GA", "L", i)), vid(("AL", "R", inst.a_l.end_a_vertex(i)))))
        local_edges.append((vid(("GA", "R", i)), vid(("AR", "R", inst.a_r.end_a_vertex(i)))))
    if not is_bipartite_two_colorable(len(names), local_edges):
        bad.append("union graph is not bipartite")

    try:
        g = inst.union_graph
    except ValueError as exc:
        bad.append(f"union graph invalid: {exc}")
        return bad
    if len(g.edges) != len(inst.g_a) + len(inst.g_b) + len(inst.g2):
        bad.append("phases overlap")
    if not set(inst.g_a) <= inst.rs1.graph.edges:
        bad.append("G_A is not a subgraph of the first RS graph")
    for side, a, y, m in (("L", inst.a_l, inst.y_l, inst.m_l), ("R", inst.a_r, inst.y_r, inst.m_r)):
        if not is_matching(m):
            bad.append(f"M_{side} is not a matching")
        for i in range(p.n1):
            in_baug = a.end_a_vertex(i) in a.baug
            if in_baug != bool(y[i]):
                bad.append(f"Y_{side}[{i}]={y[i]} but path {i} of A_{side} ends on the "
                           f"{'b' if in_baug else 'a'} side")
    return bad


def certified_large_matching(inst: GameInstance) -> Matching:
    """The large matching: M*_L, M*_R, M_L/M_R onto non-hidden vertices, surviving hidden edges."""
    edges = inst.map_matching("L", build_m_star(inst.a_l)) + inst.map_matching("R", build_m_star(inst.a_r))
    edges += [e for e, y in zip(inst.m_l, inst.y_l) if not y]
    edges += [e for e, y in zip(inst.m_r, inst.y_r) if not y]
    edges += sorted(inst.surviving_hidden)
    m = Matching.of(edges)
    p = inst.params
    expected = 2 * (4 * p.n2 - 2 * p.r2) + 2 * (p.n1 - p.r1) + len(inst.surviving_hidden)
    assert len(m) == expected, f"certified matching has {len(m)} edges, expected {expected}"
    assert m.in_graph(inst.union_graph)
    return m


def certified_threshold(params: GameParams) -> float:
    return params.n - (1 + 2 * params.delta) * params.r1


@dataclass(frozen=True)
class Avoidance:
    size: int
    bound: int
    cover: VertexCover

    @property
    def holds(self) -> bool:
        return self.size <= self.bound


def max_matching_avoiding_hidden(inst: GameInstance) -> Avoidance:
    """Maximum matching of the union minus M_{j1}, with the explicit n - 2 r1 cover."""
    g_hat = inst.union_graph.without(inst.hidden)
    size = len(hopcroft_karp(g_hat))
    left, right = inst.map_cover("L", build_v_star(inst.a_l))
    l2, r2 = inst.map_cover("R", build_v_star(inst.a_r))
    left |= l2
    right |= r2
    hidden_left = {u for u, _ in inst.hidden}
    hidden_right = {v for _, v in inst.hidden}
    left |= {i for i in range(inst.params.n1) if i not in hidden_left}
    right |= {i for i in range(inst.params.n1) if i not in hidden_right}
    cover = VertexCover(frozenset(left), frozenset(right))
    bound = inst.n - 2 * inst.params.r1
    assert len(cover) == bound, f"cover has {len(cover)} vertices, expected {bound}"
    assert is_vertex_cover(g_hat, cover), "explicit cover misses an edge of G minus M_j1"
    assert size <= bound, f"matching avoiding the hidden matching has size {size} > {bound}"
    return Avoidance(size, bound, cover)


def evaluate_output(inst: GameInstance, edges: Iterable[Edge]) -> int:
    """0 if any edge lies outside G_A; else the number of hidden edges output."""
    edges = {(int(u), int(v)) for u, v in edges}
    if not edges <= set(inst.g_a):
        return 0
    return len(edges & inst.hidden)


# -- closed-form calculators ----------------------------------------------------

@dataclass(frozen=True)
class Threshold:
    beta: float
    target: float  # (1 - beta)(n - (1 + 2 delta) r1)
    identity_residual: float


def approx_threshold(n: int, r1: int, delta: float) -> Threshold:
    """beta = (1-4 delta) r1 / (n - (1+2 delta) r1) and the matching size it forces."""
    if not 0 <= delta < 0.25:
        raise ParameterError("delta must lie in [0, 1/4)")
    denom = n - (1 + 2 * delta) * r1
    if denom <= 0:
        raise ParameterError("n - (1+2 delta) r1 must be positive")
    beta = (1 - 4 * delta) * r1 / denom
    target = (1 - beta) * denom
    residual = target - (n - 2 * r1 + 2 * delta * r1)
    if abs(residual) > 1e-9 * max(1.0, abs(n)):
        raise ArithmeticError(f"threshold identity off by {residual}")
    return Threshold(beta, target, residual)


def rs_lower_bound_ratio(alpha: float, beta: float) -> float:
    """1 - alpha / (16/(alpha beta) - 8/beta + 2 - alpha), dropping the 1 - o(1) factor."""
    if not (0 < alpha <= 1 and 0 < beta <= 1):
        raise ParameterError("need 0 < alpha <= 1 and 0 < beta <= 1")
    denom = 16 / (alpha * beta) - 8 / beta + 2 - alpha
    if denom == 0:
        raise ZeroDivisionError("ratio denominator vanishes")
    return 1 - alpha / denom


def ratio_bound_parameters(big_n: int, alpha: float, beta: float, delta: float) -> dict:
    """Game parameters used to turn an (alpha N, N^beta)-RS family into a ratio bound."""
    k = 2 / ((1 - delta) * beta)
    n1, r1, t1 = big_n, alpha * big_n, big_n**beta
    n2 = (k + delta) * big_n / alpha
    r2 = (k + delta) * big_n
    t2 = n2**beta
    n = 8 * n2 - 4 * r2 + 2 * n1
    return {"k": k, "n1": n1, "r1": r1, "t1": t1, "n2": n2, "r2": r2, "t2": t2, "n": n,
            "ratio_exact": 1 - (1 - 4 * delta) * r1 / (n - (1 + 2 * delta) * r1),
            "ratio_limit": rs_lower_bound_ratio(alpha, beta)}


def required_r2(n1: int, k: int, delta: float) -> dict:
    """Both couplings of r2 to (k, n1): the game's (k+delta) n1 and the capacity k n1/(1-delta)."""
    return {"r2_game": (k + delta) * n1, "r2_capacity": k * n1 / (1 - delta),
            "r2_min_integer": math.ceil(k * n1 / (1 - delta) - 1e-9)}


# -- edge streams -------------------------------------------------------------------

PHASES = ("PHASE1_A", "PHASE1_B", "PHASE2")


@dataclass(frozen=True)
class EdgeStream:
    n: int
    edges: tuple[Edge, ...]
    boundaries: tuple[int, int]  # ends of G_A and of G_B inside ``edges``

    @classmethod
    def plain(cls, n: int, edges) -> "EdgeStream":
        """A stream without game structure; every edge sits in the first phase."""
        edges = tuple((int(u), int(v)) for u, v in edges)
        return cls(n, edges, (len(edges), len(edges)))

    def phases(self) -> list[tuple[str, tuple[Edge, ...]]]:
        a, b = self.boundaries
        return [(PHASES[0], self.edges[:a]), (PHASES[1], self.edges[a:b]), (PHASES[2], self.edges[b:])]


def assemble_stream(inst: GameInstance, order_seed: int) -> EdgeStream:
    """G_A, then G_B, then G_2; each phase uniformly shuffled under ``order_seed``."""
    order_seed = check_seed(order_seed)
    parts = []
    for name, edges in zip(PHASES, (inst.g_a, inst.g_b, inst.g2)):
        perm = substream(order_seed, f"order/{name}").permutation(len(edges))
        parts.append([edges[int(i)] for i in perm])
    a = len(parts[0])
    b = a + len(parts[1])
    return EdgeStream(inst.n, tuple(parts[0] + parts[1] + parts[2]), (a, b))


def format_stream(s: EdgeStream) -> str:
    lines = [f"stream {s.n} {len(s.edges)}"]
    for name, edges in s.phases():
        lines.append(f"phase {name} {len(edges)}")
        lines.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"


def parse_stream(text: str, source: str | None = None) -> EdgeStream:
    reader = LineReader(text, source)
    n, total = reader.header("stream", 2)
    chunks = []
    for name in PHASES:
        line = reader.next_line(f"phase {name}")
        parts = line.split()
        if parts[:2] != ["phase", name] or len(parts) != 3:
            raise reader.error(f"expected 'phase {name} <count>'")
        (count,) = reader.ints(parts[2], 1, "phase size")
        chunks.append([tuple(reader.ints(reader.next_line("edge"), 2, "edge")) for _ in range(count)])
    if sum(map(len, chunks)) != total:
        raise reader.error("phase sizes do not add up to the header count")
    a = len(chunks[0])
    return EdgeStream(n, tuple(e for c in chunks for e in c), (a, a + len(chunks[1])))


# -- instance file -------------------------------------------------------------------

def format_instance(inst: GameInstance) -> str:
    p, lay = inst.params, inst.layout
    out = ["[PARAMS]"]
    out += [f"{key}={value!r}" if isinstance(value, float) else f"{key}={value}"
            for key, value in p.as_dict().items()]
    out += [f"n={inst.n}", f"seed={inst.seed}"]
    for name, edges in zip(PHASES, (inst.g_a, inst.g_b, inst.g2)):
        out.append(f"[{name}]")
        out.extend(f"{u} {v}" for u, v in edges)
    out += ["[HIDDEN]", f"j1={inst.j1}", "surviving"]
    out.extend(f"{u} {v}" for u, v in sorted(inst.surviving_hidden))
    out.append("[MAPS]")
    for name, (side, lo, hi) in lay.ranges().items():
        out.append(f"{name} {side} {lo} {hi}")
    out.append("ml " + " ".join(str(v) for _, v in inst.m_l))
    out.append("mr " + " ".join(str(u) for u, _ in inst.m_r))
    out.append("[WITNESS]")
    out.append(format_rs(inst.rs1).rstrip("\n"))
    dropped = set(inst.dropped)
    out.append("dropped " + ("".join("1" if e in dropped else "0" for e in inst.rs1.graph.sorted_edges) or "-"))
    out.append(format_aug_graph(inst.a_l).rstrip("\n"))
    out.append(format_aug_graph(inst.a_r).rstrip("\n"))
    return "\n".join(out) + "\n"


@dataclass
class InstanceFile:
    params: dict[str, str]
    phases: dict[str, list[Edge]]
    j1: int
    surviving: list[Edge]
    maps: dict[str, list[str]]
    rs1: RSGraph
    dropped_bits: str
    a_l: AugGraph
    a_r: AugGraph
    line_of: dict[str, int] = field(default_factory=dict)


def _section(reader: LineReader, name: str) -> None:
    line = reader.next_line(f"[{name}]")
    if line.strip() != f"[{name}]":
        raise reader.error(f"expected section [{name}], got {line.strip()!r}")


def _edges_until_section(reader: LineReader) -> list[Edge]:
    out = []
    while (nxt := reader.peek()) is not None and not nxt.lstrip().startswith("["):
        out.append(tuple(reader.ints(reader.next_line("edge"), 2, "edge")))
    return out


def read_instance_file(text: str, source: str | None = None) -> InstanceFile:
    reader = LineReader(text, source)
    _section(reader, "PARAMS")
    params: dict[str, str] = {}
    while (nxt := reader.peek()) is not None and not nxt.lstrip().startswith("["):
        line = reader.next_line("key=value")
        if "=" not in line:
            raise reader.error(f"expected key=value, got {line.strip()!r}")
        key, value = line.split("=", 1)
        params[key.strip()] = value.strip()
    phases = {}
    for name in PHASES:
        _section(reader, name)
        phases[name] = _edges_until_section(reader)
    _section(reader, "HIDDEN")
    line = reader.next_line("j1=")
    if not line.startswith("j1="):
        raise reader.error("expected j1=<index>")
    (j1,) = reader.ints(line[3:], 1, "j1")
    if reader.next_line("'surviving'").strip() != "surviving":
        raise reader.error("expected 'surviving'")
    surviving = _edges_until_section(reader)
    _section(reader, "MAPS")
    maps = {}
    while (nxt := reader.peek()) is not None and not nxt.lstrip().startswith("["):
        parts = reader.next_line("map").split()
        maps[parts[0]] = parts[1:]
    _section(reader, "WITNESS")
    rs1 = read_rs(reader)
    parts = reader.next_line("dropped").split()
    if len(parts) != 2 or parts[0] != "dropped" or not set(parts[1]) <= set("01-"):
        raise reader.error("expected 'dropped <bits>'")
    delta = float(params.get("delta", "0.1"))
    a_l = read_aug_graph(reader, delta)
    a_r = read_aug_graph(reader, delta)
    if reader.peek() is not None:
        next(reader)
        raise reader.error("trailing content after [WITNESS]")
    return InstanceFile(params, phases, j1, surviving, maps, rs1, parts[1].strip("-"), a_l, a_r)


def instance_from_file(f: InstanceFile) -> GameInstance:
    """Rebuild the instance from its witness section (certificates re-derived)."""
    try:
        p = f.params
        params = GameParams(int(p["n1"]), int(p["r1"]), int(p["t1"]), int(p["n2"]), int(p["r2"]),
                            int(p["t2"]), int(p["k"]), float(p["delta"]))
        seed = int(p["seed"])
    except KeyError as exc:
        raise FormatError(f"[PARAMS] lacks {exc.args[0]}", 1) from None
    except ValueError as exc:
        raise FormatError(f"[PARAMS]: {exc}", 1) from None
    edges = f.rs1.graph.sorted_edges
    if len(f.dropped_bits) != len(edges):
        raise FormatError("dropped mask length differs from the first RS graph's edge count", 1)
    dropped = [e for e, bit in zip(edges, f.dropped_bits) if bit == "1"]
    rs2 = f.a_l.encoded.host
    try:
        return assemble_instance(params, f.rs1, rs2, seed, f.j1, dropped, f.a_l, f.a_r)
    except (ParameterError, FamilyError) as exc:
        raise FormatError(f"inconsistent witness: {exc}", 1) from None


def parse_instance(text: str, source: str | None = None) -> GameInstance:
    return instance_from_file(read_instance_file(text, source))


def public_stream_from_file(f: InstanceFile) -> EdgeStream:
    """The stream as written in the phase sections, without touching HIDDEN/WITNESS."""
    n = int(f.params["n"])
    a = f.phases[PHASES[0]]
    b = f.phases[PHASES[1]]
    return EdgeStream(n, tuple(a + b + f.phases[PHASES[2]]), (len(a), len(a) + len(b)))


@dataclass
class InstanceReport:
    violations: list[str] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_instance_file(f: InstanceFile) -> InstanceReport:
    """Re-derive the instance from the witness and check every invariant and claim."""
    report = InstanceReport()
    bad = report.violations
    try:
        inst = instance_from_file(f)
    except FormatError as exc:
        bad.append(str(exc))
        return report
    for name, edges in zip(PHASES, (inst.g_a, inst.g_b, inst.g2)):
        listed = f.phases[name]
        if len(set(listed)) != len(listed):
            bad.append(f"[{name}] lists a duplicate edge")
        if set(listed) != set(edges):
            missing = sorted(set(edges) - set(listed))[:3]
            extra = sorted(set(listed) - set(edges))[:3]
            bad.append(f"[{name}] differs from the re-derived phase (missing {missing}, unexpected {extra})")
    if set(f.surviving) != set(inst.surviving_hidden):
        bad.append("[HIDDEN] surviving edges differ from G_A intersect M_j1")
    if f.params.get("n") != str(inst.n):
        bad.append(f"[PARAMS] n={f.params.get('n')} but the layout gives {inst.n}")
    bad.extend(check_instance(inst))
    if bad:
        return report
    try:
        for side, a in (("L", inst.a_l), ("R", inst.a_r)):
            m, c = build_m_star(a), build_v_star(a)
            report.info[f"m_star_{side}"] = len(m)
            report.info[f"v_star_{side}"] = len(c)
        avoid = max_matching_avoiding_hidden(inst)
        cert = certified_large_matching(inst)
    except AssertionError as exc:
        bad.append(f"certificate check failed: {exc}")
        return report
    report.info.update({
        "n": inst.n,
        "avoiding_hidden_max": avoid.size,
        "avoiding_hidden_bound": avoid.bound,
        "certified_matching": len(cert),
        "certified_threshold": certified_threshold(inst.params),
        "certified_meets_threshold": len(cert) >= certified_threshold(inst.params),
        "surviving_hidden": len(inst.surviving_hidden),
    })
    return report
