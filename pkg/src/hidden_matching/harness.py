"""Multi-pass streaming runs with metered memory, plus baseline algorithms.

An algorithm implements ``begin(n, passes, store)``, ``observe(edge)``,
``end_pass()`` and ``finish() -> edges``; it may also define
``begin_phase(name)``. All state that grows while the stream is read must live
in the ``MeteredStore`` handed to ``begin``. Accounting unit: one stored edge
is one word, one scalar counter is one word.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Protocol

import numpy as np

from .game import PHASES, EdgeStream, GameInstance, Layout, evaluate_output
from .graph import BipartiteGraph, Edge, hopcroft_karp, is_matching


class MeteringViolation(RuntimeError):
    """The algorithm kept state outside the metered store."""


class MeteredStore:
    """Named edge buckets with endpoint indexes, and named scalar counters."""

    def __init__(self):
        self._buckets: dict[str, set[Edge]] = {}
        self._by_left: dict[str, dict[int, set[Edge]]] = {}
        self._by_right: dict[str, dict[int, set[Edge]]] = {}
        self._counters: dict[str, int] = {}
        self.stored_edges = 0
        self.peak_edges = 0
        self.peak_words = 0

    @property
    def words(self) -> int:
        return self.stored_edges + len(self._counters)

    def _touch(self) -> None:
        self.peak_edges = max(self.peak_edges, self.stored_edges)
        self.peak_words = max(self.peak_words, self.words)

    def _bucket(self, name: str) -> set[Edge]:
        if name not in self._buckets:
            self._buckets[name] = set()
            self._by_left[name] = {}
            self._by_right[name] = {}
        return self._buckets[name]

    def add(self, bucket: str, edge: Edge) -> bool:
        edge = (int(edge[0]), int(edge[1]))
        b = self._bucket(bucket)
        if edge in b:
            return False
        b.add(edge)
        self._by_left[bucket].setdefault(edge[0], set()).add(edge)
        self._by_right[bucket].setdefault(edge[1], set()).add(edge)
        self.stored_edges += 1
        self._touch()
        return True

    def remove(self, bucket: str, edge: Edge) -> None:
        self._buckets[bucket].remove(edge)
        for index, key in ((self._by_left, edge[0]), (self._by_right, edge[1])):
            group = index[bucket][key]
            group.discard(edge)
            if not group:
                del index[bucket][key]
        self.stored_edges -= 1

    def has(self, bucket: str, edge: Edge) -> bool:
        return edge in self._buckets.get(bucket, ())

    def edges(self, bucket: str) -> frozenset[Edge]:
        return frozenset(self._buckets.get(bucket, ()))

    def at_left(self, bucket: str, u: int) -> frozenset[Edge]:
        return frozenset(self._by_left.get(bucket, {}).get(u, ()))

    def at_right(self, bucket: str, v: int) -> frozenset[Edge]:
        return frozenset(self._by_right.get(bucket, {}).get(v, ()))

    def size(self, bucket: str) -> int:
        return len(self._buckets.get(bucket, ()))

    def all_edges(self) -> frozenset[Edge]:
        return frozenset(e for b in self._buckets.values() for e in b)

    def set_counter(self, name: str, value: int) -> None:
        self._counters[name] = int(value)
        self._touch()

    def counter(self, name: str) -> int:
        return self._counters[name]


class StreamingAlgorithm(Protocol):
    def begin(self, n: int, passes: int, store: MeteredStore) -> None: ...
    def observe(self, edge: Edge) -> None: ...
    def end_pass(self) -> None: ...
    def finish(self) -> Iterable[Edge]: ...


@dataclass(frozen=True)
class AlgorithmRun:
    passes: int
    peak_stored_edges: int
    peak_stored_words: int
    output: frozenset[Edge]
    snapshots: tuple[tuple[str, int], ...]  # (boundary label, stored words)
    streaming: bool  # every output edge was observed in the stream
    trace: tuple[tuple[int, int], ...] = field(default=(), compare=False, repr=False)

    def snapshot(self, label: str) -> int:
        return dict(self.snapshots)[label]

    @property
    def protocol_snapshots(self) -> dict[str, int]:
        """Memory handed over in the simulation: after G_A (pass 1), G_B (pass 1), G_A (pass 2)."""
        table = dict(self.snapshots)
        out = {"A1": table.get(f"pass1:{PHASES[0]}"), "B1": table.get(f"pass1:{PHASES[1]}")}
        if self.passes >= 2:
            out["A2"] = table.get(f"pass2:{PHASES[0]}")
        return out

    @property
    def cost(self) -> int:
        return max([v for v in self.protocol_snapshots.values() if v is not None], default=0)


_CONTAINERS = (list, dict, set, frozenset, tuple, deque, bytearray, np.ndarray)


def _fingerprint(alg) -> dict[str, str]:
    out = {}
    for name, value in vars(alg).items():
        if isinstance(value, _CONTAINERS):
            out[name] = repr(sorted(value) if isinstance(value, (set, frozenset)) else value)
    return out


def _audit(alg, baseline: dict[str, str], when: str) -> None:
    now = _fingerprint(alg)
    for name, fp in now.items():
        if baseline.get(name) != fp:
            raise MeteringViolation(f"{type(alg).__name__}.{name} changed {when} outside the metered store")


def run_stream(alg: StreamingAlgorithm, stream: EdgeStream, passes: int, audit: bool = True,
               trace: bool = False) -> AlgorithmRun:
    """Replay ``stream`` ``passes`` times through ``alg`` with memory metering.

    With ``audit`` on, any container attribute of ``alg`` that differs from its
    state right after ``begin`` is a violation, and the output must be a subset
    of the stored edges.
    """
    if passes not in (1, 2):
        raise ValueError("passes must be 1 or 2")
    store = MeteredStore()
    alg.begin(stream.n, passes, store)
    baseline = _fingerprint(alg) if audit else {}
    seen: set[Edge] = set()
    snapshots = []
    steps = []
    hook = getattr(alg, "begin_phase", None)
    for p in range(1, passes + 1):
        for name, edges in stream.phases():
            if hook is not None:
                hook(name)
            for e in edges:
                seen.add(e)
                alg.observe(e)
                if trace:
                    steps.append((p, store.words))
            snapshots.append((f"pass{p}:{name}", store.words))
        alg.end_pass()
        if audit:
            _audit(alg, baseline, f"during pass {p}")
    output = frozenset((int(u), int(v)) for u, v in alg.finish())
    if audit:
        _audit(alg, baseline, "in finish")
        missing = output - store.all_edges()
        if missing:
            raise MeteringViolation(f"output edge {min(missing)} is not in metered storage")
    return AlgorithmRun(passes, store.peak_edges, store.peak_words, output, tuple(snapshots),
                        output <= seen, tuple(steps))


# -- baselines ----------------------------------------------------------------------

class GreedyMatching:
    """One pass: keep an edge iff both endpoints are still free."""

    def begin(self, n: int, passes: int, store: MeteredStore) -> None:
        self.store = store
        store.set_counter("pass", 1)

    def observe(self, edge: Edge) -> None:
        s = self.store
        if s.counter("pass") != 1:
            return
        u, v = edge
        if not s.at_left("M", u) and not s.at_right("M", v):
            s.add("M", edge)

    def end_pass(self) -> None:
        self.store.set_counter("pass", self.store.counter("pass") + 1)

    def finish(self) -> frozenset[Edge]:
        return self.store.edges("M")


def greedy_matching() -> GreedyMatching:
    return GreedyMatching()


class TwoPassAugment(GreedyMatching):
    """Greedy in pass 1; pass 2 collects wings of 3-augmenting paths.

    For a matched edge (x, y), a left wing is (a, y) with a free and a right
    wing is (x, b) with b free. Each matched edge keeps at most one wing of each
    kind and each free vertex serves at most one wing, so completed pairs are
    vertex-disjoint augmenting paths.
    """

    def observe(self, edge: Edge) -> None:
        s = self.store
        if s.counter("pass") == 1:
            super().observe(edge)
            return
        u, v = edge
        u_matched = bool(s.at_left("M", u))
        v_matched = bool(s.at_right("M", v))
        if not u_matched and v_matched:
            if not s.at_right("wing_l", v) and not s.at_left("wing_l", u):
                s.add("wing_l", edge)
        elif u_matched and not v_matched:
            if not s.at_left("wing_r", u) and not s.at_right("wing_r", v):
                s.add("wing_r", edge)

    def finish(self) -> frozenset[Edge]:
        s = self.store
        out = set(s.edges("M"))
        for x, y in sorted(s.edges("M")):
            left = s.at_right("wing_l", y)
            right = s.at_left("wing_r", x)
            if left and right:
                out.discard((x, y))
                out |= left | right
        return frozenset(out)


def two_pass_augment() -> TwoPassAugment:
    return TwoPassAugment()


class Clairvoyant:
    """Cheating baseline that is told the hidden matching out of band.

    Pass 1 keeps the hidden edges that survive in G_A and all of G_2. P-edges
    in G_2 (public ids) mark every H vertex outside rep(M_j); in pass 2 the
    G_B edges avoiding those vertices are exactly rep(M_j) of both sides. The
    output is the hidden survivors plus a maximum matching of the rest of the
    stored edges on the remaining vertices.
    """

    def __init__(self, hidden: Iterable[Edge], layout: Layout, n1: int, n2: int, r2: int):
        self.hidden = frozenset(hidden)
        self.layout = layout
        self.n2 = n2
        self.r2 = r2

    def begin(self, n: int, passes: int, store: MeteredStore) -> None:
        if passes != 2:
            raise ValueError("the clairvoyant baseline needs two passes")
        self.n = n
        self.store = store
        self.phase = ""  # scalar state, not a container
        store.set_counter("pass", 1)

    def begin_phase(self, name: str) -> None:
        self.phase = name

    def _p_marked(self, left: bool, vid: int) -> bool:
        """True when union vertex ``vid`` is an H vertex paired with a P vertex."""
        lay, s = self.layout, self.store
        two_n2, block = 2 * self.n2, lay.block
        if left:
            # A_L left H block, its P partners sit on the union right
            if lay.al_left <= vid < lay.al_left + two_n2:
                return any(lay.al_right + two_n2 <= v < lay.al_right + block for _, v in s.at_left("g2", vid))
            if lay.ar_right <= vid < lay.ar_right + two_n2:
                return any(lay.ar_left + two_n2 <= v < lay.ar_left + block for _, v in s.at_left("g2", vid))
            return False
        if lay.al_right <= vid < lay.al_right + two_n2:
            return any(lay.al_left + two_n2 <= u < lay.al_left + block for u, _ in s.at_right("g2", vid))
        if lay.ar_left <= vid < lay.ar_left + two_n2:
            return any(lay.ar_right + two_n2 <= u < lay.ar_right + block for u, _ in s.at_right("g2", vid))
        return False

    def observe(self, edge: Edge) -> None:
        s = self.store
        first = s.counter("pass") == 1
        if self.phase == PHASES[0]:
            if first and edge in self.hidden:
                s.add("hidden", edge)
        elif self.phase == PHASES[2]:
            if first:
                s.add("g2", edge)
        elif not first and not self._p_marked(True, edge[0]) and not self._p_marked(False, edge[1]):
            s.add("rep", edge)

    def end_pass(self) -> None:
        self.store.set_counter("pass", self.store.counter("pass") + 1)

    def finish(self) -> frozenset[Edge]:
        s = self.store
        blocked_l = {u for u, _ in self.hidden}
        blocked_r = {v for _, v in self.hidden}
        rest = [e for e in s.edges("g2") | s.edges("rep") if e[0] not in blocked_l and e[1] not in blocked_r]
        m = hopcroft_karp(BipartiteGraph(self.n, self.n, frozenset(rest)))
        return frozenset(m.edges) | s.edges("hidden")


def clairvoyant(inst: GameInstance) -> Clairvoyant:
    p = inst.params
    return Clairvoyant(inst.hidden, inst.layout, p.n1, p.n2, p.r2)


ALGORITHMS = {"greedy": greedy_matching, "twopass": two_pass_augment}


# -- reduction bookkeeping --------------------------------------------------------------

@dataclass(frozen=True)
class GameRunReport:
    algorithm: str
    output_size: int
    optimum: int
    ratio: float
    value: int
    surviving_hidden: int
    cost_words: int
    run: AlgorithmRun

    def as_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "passes": self.run.passes,
            "output_size": self.output_size,
            "optimum": self.optimum,
            "ratio": self.ratio,
            "value": self.value,
            "surviving_hidden": self.surviving_hidden,
            "cost_words": self.cost_words,
            "peak_stored_edges": self.run.peak_stored_edges,
            "peak_stored_words": self.run.peak_stored_words,
            "snapshots": dict(self.run.snapshots),
            "protocol_snapshots": self.run.protocol_snapshots,
            "streaming": self.run.streaming,
            "space_unit": "word = one stored edge or one scalar counter",
        }


def run_on_instance(name: str, inst: GameInstance, stream: EdgeStream, passes: int,
                    optimum: int | None = None) -> GameRunReport:
    """Run a named algorithm; value is evaluate_output on the output's hidden part."""
    alg = clairvoyant(inst) if name == "clairvoyant" else ALGORITHMS[name]()
    run = run_stream(alg, stream, passes)
    if not is_matching(run.output):
        raise AssertionError(f"{name} produced a non-matching")
    if optimum is None:
        optimum = len(hopcroft_karp(inst.union_graph))
    value = evaluate_output(inst, run.output & inst.hidden)
    return GameRunReport(name, len(run.output), optimum, len(run.output) / optimum if optimum else 1.0,
                         value, len(inst.surviving_hidden), run.cost, run)
