import itertools

import pytest
from hypothesis import given, strategies as st

from hidden_matching.graph import BipartiteGraph, is_induced_matching
from hidden_matching.rs import (APFreeSet, RSGraph, ap_rs, behrend_ap_free, bipartite_double_cover,
                                brute_force_ap_free, disjoint_blocks_rs, double_cover_rs,
                                find_three_ap, format_rs, parse_rs, verify_rs)
from hidden_matching.textio import FormatError

from oracles import all_ap_free_sets, has_three_ap, largest_ap_free_size, rs_is_valid
from rs_mutations import additions, deletions, moves, with_edges


def test_blocks_shapes():
    one = disjoint_blocks_rs(1, 1)
    assert (one.n, one.r, one.t) == (1, 1, 1) and one.graph.edges == {(0, 0)}
    two_three = disjoint_blocks_rs(2, 3)
    assert two_three.n == 6 and len(two_three.graph) == 6
    assert verify_rs(disjoint_blocks_rs(3, 2)).valid
    for j, block in enumerate(two_three.matchings):
        assert {u for u, _ in block} == {2 * j, 2 * j + 1}


def test_blocks_argument_errors():
    with pytest.raises(ValueError):
        disjoint_blocks_rs(0, 3)
    with pytest.raises(OverflowError):
        disjoint_blocks_rs(10**4, 10**4)


def test_verifier_reports_added_cross_edge():
    rs = disjoint_blocks_rs(2, 3)
    # M_0 = {(0,0), (1,1)}; join its left 0 to its other right vertex 1
    bad = with_edges(rs, rs.graph.edges | {(0, 1)}, rs.matchings)
    report = verify_rs(bad)
    assert not report.valid
    assert any(f.kind == "induced" and f.witness == (0, 1) and f.matching == 0 for f in report.findings)


def test_verifier_reports_moved_edge():
    rs = disjoint_blocks_rs(2, 3)
    blocks = [list(b) for b in rs.matchings]
    blocks[1].append(blocks[0].pop())
    report = verify_rs(with_edges(rs, rs.graph.edges, blocks))
    assert "size" in report.kinds()


@pytest.mark.parametrize("r, t", [(2, 2), (3, 2), (1, 4)])
def test_every_mutation_rejected_with_witness(r, t):
    rs = disjoint_blocks_rs(r, t)
    for _, bad in itertools.chain(additions(rs), deletions(rs), moves(rs)):
        report = verify_rs(bad)
        assert not report.valid
        # an emptied matching has no edge to show; its index is the witness then
        assert any(f.witness is not None or f.matching is not None for f in report.findings)


def test_verifier_agrees_with_definition_on_random_listings():
    # random graphs listed as random equal-size groups; the verifier and the
    # plain definition must agree on every one
    import random
    rnd = random.Random(5)
    agree = 0
    for _ in range(400):
        n = rnd.randint(1, 5)
        pairs = [(u, v) for u in range(n) for v in range(n)]
        r, t = rnd.randint(1, 3), rnd.randint(1, 3)
        if r * t > len(pairs):
            continue
        chosen = rnd.sample(pairs, r * t)
        blocks = [chosen[i * r:(i + 1) * r] for i in range(t)]
        rs = RSGraph(BipartiteGraph(n, n, frozenset(chosen)), tuple(map(tuple, blocks)), r, t)
        assert verify_rs(rs).valid == rs_is_valid(n, blocks, chosen)
        agree += 1
    assert agree > 250


@pytest.mark.parametrize("k_max, size", [(1, 1), (5, 4), (9, 5)])
def test_brute_force_examples(k_max, size):
    s = brute_force_ap_free(k_max)
    assert len(s) == size
    assert not has_three_ap(s.members)


def test_brute_force_examples_members():
    assert brute_force_ap_free(5).members == (1, 2, 4, 5)
    assert brute_force_ap_free(9).members == (1, 2, 4, 8, 9)


def test_brute_force_matches_oracle_sizes():
    for k_max in range(1, 17):
        assert len(brute_force_ap_free(k_max)) == largest_ap_free_size(k_max)


def test_brute_force_limit():
    with pytest.raises(ValueError):
        brute_force_ap_free(25)


@given(st.integers(2, 3000))
def test_behrend_is_ap_free(k_max):
    s = behrend_ap_free(k_max)
    assert len(s) >= 2
    assert find_three_ap(s.members) is None
    assert s.members[-1] <= k_max


def test_behrend_never_beats_brute_force():
    for k_max in range(2, 25):
        assert len(behrend_ap_free(k_max)) <= len(brute_force_ap_free(k_max))


def test_ap_free_set_rejects_progression():
    with pytest.raises(ValueError):
        APFreeSet(10, (1, 2, 3))


def test_ap_rs_small_example():
    rs = ap_rs(2, APFreeSet(2, (1, 2)))
    # labels M_1 = {(2,3), (3,5)}, M_2 = {(3,4), (4,6)}, stored as label - 1
    assert rs.matchings == (((1, 2), (2, 4)), ((2, 3), (3, 5)))
    assert verify_rs(rs).valid
    assert ap_rs(1, APFreeSet(1, (1,))).graph.edges == {(1, 2)}
    rs3 = ap_rs(3, brute_force_ap_free(5))
    assert (rs3.r, rs3.t) == (4, 3) and verify_rs(rs3).valid


def test_ap_rs_matchings_induced_exhaustive():
    for members in all_ap_free_sets(12):
        s = APFreeSet(12, members)
        for m in (1, 7, 20):
            rs = ap_rs(m, s)
            for j in range(rs.t):
                assert is_induced_matching(rs.graph, rs.matching(j))


def test_double_cover_examples():
    assert bipartite_double_cover(2, [(0, 1)]).edges == {(0, 1), (1, 0)}
    tri = bipartite_double_cover(3, [(0, 1), (1, 2), (0, 2)])
    assert len(tri) == 6
    assert all(sum(1 for e in tri.edges if e[0] == u) == 2 for u in range(3))
    assert len(bipartite_double_cover(3, [])) == 0


def test_double_cover_of_general_rs():
    # matching {01, 23} and {02, 13}... then induced-ness on the general graph:
    # two disjoint edges as separate induced matchings on 4 vertices
    rs = double_cover_rs(4, [[(0, 1)], [(2, 3)]])
    assert verify_rs(rs).valid and rs.r == 2


def test_rs_round_trip_and_errors():
    rs = ap_rs(3, brute_force_ap_free(5))
    assert parse_rs(format_rs(rs)) == rs
    with pytest.raises(FormatError):
        parse_rs("rsgraph 2 1 1\nmatching 1\n0 0\n")
    with pytest.raises(FormatError) as info:
        parse_rs("rsgraph 2 1 1\nmatching 0\n0 9\n")
    assert info.value.line == 3
    with pytest.raises(FormatError):
        parse_rs(format_rs(rs) + "junk\n")
