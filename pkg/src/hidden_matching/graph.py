"""Bipartite graphs and the exact matching / vertex-cover oracles.

Vertices are dense 0-based integer ids on each side. An edge is a
``(left_id, right_id)`` pair. Everything here is deterministic: Hopcroft-Karp
visits neighbors in ascending id order, so the same graph always yields the
same matching.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .textio import LineReader

Edge = tuple[int, int]


class DuplicateEdgeError(ValueError):
    pass


class NotMaximumError(ValueError):
    """Raised when a matching handed to the König construction is not maximum."""


@dataclass(frozen=True)
class BipartiteGraph:
    left_count: int
    right_count: int
    edges: frozenset[Edge]

    def __post_init__(self):
        if self.left_count < 0 or self.right_count < 0:
            raise ValueError("vertex counts must be nonnegative")
        for u, v in self.edges:
            if not (0 <= u < self.left_count and 0 <= v < self.right_count):
                raise ValueError(
                    f"edge ({u}, {v}) outside [0,{self.left_count}) x [0,{self.right_count})"
                )

    @classmethod
    def from_edges(cls, left_count: int, right_count: int, edges: Iterable[Edge]) -> "BipartiteGraph":
        """Build a graph, failing loudly on a repeated edge."""
        seen: set[Edge] = set()
        for u, v in edges:
            e = (int(u), int(v))
            if e in seen:
                raise DuplicateEdgeError(f"duplicate edge {e}")
            seen.add(e)
        return cls(left_count, right_count, frozenset(seen))

    def __len__(self) -> int:
        return len(self.edges)

    @cached_property
    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    @cached_property
    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.left_count)]
        for u, v in self.sorted_edges:
            adj[u].append(v)
        return adj

    def without(self, edges: Iterable[Edge]) -> "BipartiteGraph":
        return BipartiteGraph(self.left_count, self.right_count, self.edges - frozenset(edges))


@dataclass(frozen=True)
class Matching:
    edges: frozenset[Edge]

    def __post_init__(self):
        lefts = set()
        rights = set()
        for u, v in self.edges:
            if u in lefts or v in rights:
                raise ValueError(f"edge ({u}, {v}) shares an endpoint with another matching edge")
            lefts.add(u)
            rights.add(v)

    @classmethod
    def of(cls, edges: Iterable[Edge]) -> "Matching":
        return cls(frozenset((int(u), int(v)) for u, v in edges))

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(sorted(self.edges))

    @cached_property
    def left_vertices(self) -> frozenset[int]:
        return frozenset(u for u, _ in self.edges)

    @cached_property
    def right_vertices(self) -> frozenset[int]:
        return frozenset(v for _, v in self.edges)

    def mate_of_left(self) -> dict[int, int]:
        return {u: v for u, v in self.edges}

    def in_graph(self, g: BipartiteGraph) -> bool:
        return self.edges <= g.edges


@dataclass(frozen=True)
class VertexCover:
    left_ids: frozenset[int] = field(default_factory=frozenset)
    right_ids: frozenset[int] = field(default_factory=frozenset)

    def __len__(self) -> int:
        return len(self.left_ids) + len(self.right_ids)


def is_matching(edges: Iterable[Edge]) -> bool:
    lefts, rights = set(), set()
    for u, v in edges:
        if u in lefts or v in rights:
            return False
        lefts.add(u)
        rights.add(v)
    return True


def hopcroft_karp(g: BipartiteGraph) -> Matching:
    """Maximum-cardinality matching of ``g``.

    Layered BFS from all free left vertices, then iterative DFS along the
    layers; both scan neighbors in ascending id order.
    """
    adj = g.adjacency
    n_left = g.left_count
    mate_l = [-1] * n_left
    mate_r = [-1] * g.right_count
    inf = n_left + 1

    # cheap greedy start; same fixed order, so still deterministic
    for u in range(n_left):
        for v in adj[u]:
            if mate_r[v] == -1:
                mate_l[u] = v
                mate_r[v] = u
                break

    while True:
        dist = [inf] * n_left
        queue = deque()
        for u in range(n_left):
            if mate_l[u] == -1:
                dist[u] = 0
                queue.append(u)
        found_free = inf
        while queue:
            u = queue.popleft()
            if dist[u] >= found_free:
                continue
            for v in adj[u]:
                w = mate_r[v]
                if w == -1:
                    if found_free == inf:
                        found_free = dist[u] + 1
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if found_free == inf:
            break

        pos = [0] * n_left
        for root in range(n_left):
            if mate_l[root] != -1:
                continue
            stack = [root]
            path_r: list[int] = []
            while stack:
                u = stack[-1]
                advanced = False
                nbrs = adj[u]
                while pos[u] < len(nbrs):
                    v = nbrs[pos[u]]
                    pos[u] += 1
                    w = mate_r[v]
                    if w == -1:
                        if dist[u] + 1 == found_free:
                            path_r.append(v)
                            # flip the alternating path recorded on the stack
                            for uu, vv in zip(stack, path_r):
                                mate_l[uu] = vv
                                mate_r[vv] = uu
                            stack = []
                            advanced = True
                            break
                    elif dist[w] == dist[u] + 1:
                        path_r.append(v)
                        stack.append(w)
                        advanced = True
                        break
                if not stack:
                    break
                if not advanced:
                    dist[u] = inf
                    stack.pop()
                    if path_r:
                        path_r.pop()

    return Matching(frozenset((u, mate_l[u]) for u in range(n_left) if mate_l[u] != -1))


def konig_vertex_cover(g: BipartiteGraph, m: Matching) -> VertexCover:
    """Minimum vertex cover from a maximum matching (König's construction).

    Let Z be the vertices reachable from free left vertices by alternating
    paths; the cover is (L minus Z) plus (R intersect Z).
    """
    if not m.in_graph(g):
        raise ValueError("matching is not contained in the graph")
    mate_l = m.mate_of_left()
    mate_r = {v: u for u, v in m.edges}
    adj = g.adjacency
    seen_l = [False] * g.left_count
    seen_r = [False] * g.right_count
    queue = deque(u for u in range(g.left_count) if u not in mate_l)
    for u in queue:
        seen_l[u] = True
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if seen_r[v] or mate_l.get(u) == v:
                continue
            seen_r[v] = True
            w = mate_r.get(v)
            if w is not None and not seen_l[w]:
                seen_l[w] = True
                queue.append(w)
    cover = VertexCover(
        frozenset(u for u in range(g.left_count) if not seen_l[u]),
        frozenset(v for v in range(g.right_count) if seen_r[v]),
    )
    if len(cover) != len(m) or not is_vertex_cover(g, cover):
        raise NotMaximumError("matching is not maximum: König construction leaves an edge uncovered")
    return cover


def is_induced_matching(g: BipartiteGraph, m: Matching) -> bool:
    """True iff the subgraph of ``g`` on the vertices of ``m`` is ``m`` itself.

    Raises ``ValueError`` when ``m`` is not a matching inside ``g``; that is a
    precondition failure, not a negative verdict.
    """
    if not m.in_graph(g):
        raise ValueError("precondition: matching edges must belong to the graph")
    lefts, rights = m.left_vertices, m.right_vertices
    for e in g.edges:
        if e[0] in lefts and e[1] in rights and e not in m.edges:
            return False
    return True


def induced_violation(g: BipartiteGraph, m: Matching) -> Edge | None:
    """The smallest graph edge spoiling induced-ness of ``m``, if any."""
    lefts, rights = m.left_vertices, m.right_vertices
    bad = [e for e in g.edges if e[0] in lefts and e[1] in rights and e not in m.edges]
    return min(bad) if bad else None


def is_vertex_cover(g: BipartiteGraph, c: VertexCover) -> bool:
    return all(u in c.left_ids or v in c.right_ids for u, v in g.edges)


def is_bipartite_two_colorable(num_vertices: int, edges: Iterable[tuple[int, int]]) -> bool:
    """2-coloring check on an undirected graph given over global ids."""
    adj: list[list[int]] = [[] for _ in range(num_vertices)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    color = [-1] * num_vertices
    for s in range(num_vertices):
        if color[s] != -1:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if color[y] == -1:
                    color[y] = 1 - color[x]
                    queue.append(y)
                elif color[y] == color[x]:
                    return False
    return True


# -- text format -------------------------------------------------------------

def format_graph(g: BipartiteGraph) -> str:
    lines = [f"bipartite {g.left_count} {g.right_count} {len(g.edges)}"]
    lines.extend(f"{u} {v}" for u, v in g.sorted_edges)
    return "\n".join(lines) + "\n"


def parse_graph(text: str, source: str | None = None) -> BipartiteGraph:
    reader = LineReader(text, source)
    left, right, count = reader.header("bipartite", 3)
    edges = []
    for line in reader:
        u, v = reader.ints(line, 2, "edge")
        if not (0 <= u < left and 0 <= v < right):
            raise reader.error(f"edge ({u}, {v}) out of range")
        edges.append((u, v))
    if len(edges) != count:
        raise reader.error(f"header promises {count} edges, found {len(edges)}")
    if edges != sorted(edges):
        raise reader.error("edges must be listed in ascending lexicographic order")
    try:
        return BipartiteGraph.from_edges(left, right, edges)
    except DuplicateEdgeError as exc:
        raise reader.error(str(exc)) from None
