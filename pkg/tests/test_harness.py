import random

import pytest
from hypothesis import given, strategies as st

from hidden_matching.game import EdgeStream, GameParams, assemble_stream, sample_instance
from hidden_matching.graph import BipartiteGraph, hopcroft_karp, is_matching
from hidden_matching.harness import (MeteredStore, MeteringViolation, clairvoyant, greedy_matching,
                                     run_on_instance, run_stream, two_pass_augment)
from hidden_matching.rs import ap_rs, brute_force_ap_free, disjoint_blocks_rs

from oracles import max_matching_size


def test_greedy_hand_example():
    # a2-b1, a1-b1, a2-b2 with a_i -> i-1, b_i -> i-1
    stream = EdgeStream.plain(2, [(1, 0), (0, 0), (1, 1)])
    run = run_stream(greedy_matching(), stream, 1)
    assert run.output == {(1, 0)}
    assert max_matching_size(2, 2, stream.edges) == 2


def test_two_pass_hand_example():
    stream = EdgeStream.plain(2, [(1, 0), (0, 0), (1, 1)])
    run = run_stream(two_pass_augment(), stream, 2)
    assert run.output == {(0, 0), (1, 1)}


def test_perfect_matching_stream_kept_whole():
    edges = [(i, (i * 3) % 7) for i in range(7)]
    for alg in (greedy_matching(), two_pass_augment()):
        run = run_stream(alg, EdgeStream.plain(7, edges), 2)
        assert run.output == set(edges)


@st.composite
def edge_streams(draw):
    n = draw(st.integers(1, 7))
    pairs = [(u, v) for u in range(n) for v in range(n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True))
    return EdgeStream.plain(n, edges)


@given(edge_streams())
def test_greedy_and_two_pass_against_optimum(stream):
    opt = max_matching_size(stream.n, stream.n, stream.edges)
    g = run_stream(greedy_matching(), stream, 1)
    t = run_stream(two_pass_augment(), stream, 2)
    assert is_matching(g.output) and is_matching(t.output)
    assert 2 * len(g.output) >= opt
    assert len(g.output) <= len(t.output) <= opt
    assert g.peak_stored_edges <= stream.n
    # maximality: every edge touches a greedy edge
    lefts = {u for u, _ in g.output}
    rights = {v for _, v in g.output}
    assert all(u in lefts or v in rights for u, v in stream.edges)
    assert g.streaming and t.streaming


def test_runs_are_deterministic():
    rs1 = disjoint_blocks_rs(3, 2)
    rs2 = disjoint_blocks_rs(14, 2)
    params = GameParams.from_rs(rs1, rs2, 2, 0.1)
    inst = sample_instance(params, rs1, rs2, 5)
    s = assemble_stream(inst, 1)
    for name in ("greedy", "twopass", "clairvoyant"):
        a = run_on_instance(name, inst, s, 2)
        b = run_on_instance(name, inst, s, 2)
        assert a.as_dict() == b.as_dict() and a.run == b.run


def test_append_only_snapshots_monotone():
    rnd = random.Random(3)
    edges = list({(rnd.randrange(30), rnd.randrange(30)) for _ in range(200)})
    run = run_stream(greedy_matching(), EdgeStream.plain(30, edges), 1, trace=True)
    words = [w for _, w in run.trace]
    assert words == sorted(words)
    assert [w for _, w in run.snapshots] == sorted(w for _, w in run.snapshots)


class Hoarder:
    """Keeps every edge in a plain list; the audit must catch it."""

    def begin(self, n, passes, store):
        self.seen = []

    def observe(self, edge):
        self.seen.append(edge)

    def end_pass(self):
        pass

    def finish(self):
        return self.seen[:1]


class Forger:
    """Outputs an edge it never stored."""

    def begin(self, n, passes, store):
        self.store = store

    def observe(self, edge):
        pass

    def end_pass(self):
        pass

    def finish(self):
        return [(0, 0)]


def test_audit_catches_unmetered_state():
    stream = EdgeStream.plain(3, [(0, 0), (1, 1)])
    with pytest.raises(MeteringViolation):
        run_stream(Hoarder(), stream, 1)
    with pytest.raises(MeteringViolation):
        run_stream(Forger(), stream, 1)
    run = run_stream(Forger(), stream, 1, audit=False)
    assert run.output == {(0, 0)}


def test_pass_count_checked():
    with pytest.raises(ValueError):
        run_stream(greedy_matching(), EdgeStream.plain(1, []), 3)


def test_store_accounting():
    s = MeteredStore()
    s.add("a", (0, 1))
    s.add("a", (0, 1))
    s.add("b", (0, 1))
    s.set_counter("c", 4)
    assert (s.stored_edges, s.words) == (2, 3)
    s.remove("a", (0, 1))
    assert s.at_left("a", 0) == frozenset() and s.at_left("b", 0) == {(0, 1)}
    assert (s.peak_edges, s.peak_words) == (2, 3)


def test_clairvoyant_on_instances():
    rs1 = ap_rs(4, brute_force_ap_free(5))
    rs2 = disjoint_blocks_rs(32, 2)
    params = GameParams.from_rs(rs1, rs2, 2, 0.1)
    for seed in range(5):
        inst = sample_instance(params, rs1, rs2, seed)
        rep = run_on_instance("clairvoyant", inst, assemble_stream(inst, seed), 2)
        s = len(inst.surviving_hidden)
        assert rep.value == s
        assert rep.output_size >= inst.n - 2 * params.r1 + s
        assert rep.run.peak_stored_edges <= 3 * inst.n
        assert rep.output_size <= rep.optimum


def test_clairvoyant_delta_zero_near_optimum():
    rs1 = disjoint_blocks_rs(3, 2)
    rs2 = disjoint_blocks_rs(14, 2)
    params = GameParams.from_rs(rs1, rs2, 2, 0.0)
    inst = sample_instance(params, rs1, rs2, 2)
    rep = run_on_instance("clairvoyant", inst, assemble_stream(inst, 2), 2)
    assert rep.output_size >= inst.n - params.r1


def test_clairvoyant_needs_two_passes():
    rs1 = disjoint_blocks_rs(3, 2)
    rs2 = disjoint_blocks_rs(14, 2)
    inst = sample_instance(GameParams.from_rs(rs1, rs2, 2, 0.1), rs1, rs2, 2)
    with pytest.raises(ValueError):
        run_stream(clairvoyant(inst), assemble_stream(inst, 1), 1)


def test_two_pass_not_worse_on_graph_family():
    g = BipartiteGraph.from_edges(4, 4, [(0, 1), (1, 0), (0, 0), (1, 2), (2, 1), (3, 3)])
    opt = len(hopcroft_karp(g))
    s = EdgeStream.plain(4, g.sorted_edges)
    assert len(run_stream(two_pass_augment(), s, 2).output) >= len(run_stream(greedy_matching(), s, 1).output)
    assert opt == 4
