"""Single-edge mutations of an RS graph that break the claimed structure."""

from __future__ import annotations

from hidden_matching.graph import BipartiteGraph
from hidden_matching.rs import RSGraph


def with_edges(rs: RSGraph, edges, matchings) -> RSGraph:
    return RSGraph(BipartiteGraph(rs.n, rs.n, frozenset(edges)), tuple(tuple(m) for m in matchings), rs.r, rs.t)


def additions(rs: RSGraph):
    """Graph gains one non-edge that no matching lists."""
    for u in range(rs.n):
        for v in range(rs.n):
            if (u, v) not in rs.graph.edges:
                yield (u, v), with_edges(rs, rs.graph.edges | {(u, v)}, rs.matchings)


def deletions(rs: RSGraph):
    """One edge disappears from the graph and from its matching."""
    for j, block in enumerate(rs.matchings):
        for e in block:
            blocks = [list(b) for b in rs.matchings]
            blocks[j].remove(e)
            yield e, with_edges(rs, rs.graph.edges - {e}, blocks)


def moves(rs: RSGraph):
    """One edge is relisted under a different matching."""
    for j, block in enumerate(rs.matchings):
        for e in block:
            for j2 in range(rs.t):
                if j2 == j:
                    continue
                blocks = [list(b) for b in rs.matchings]
                blocks[j].remove(e)
                blocks[j2].append(e)
                yield e, with_edges(rs, rs.graph.edges, blocks)
