"""Slow, obviously-correct reference implementations used as test oracles."""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np


def max_matching_size(left_count: int, right_count: int, edges) -> int:
    """Exact maximum matching by memoized search over (left index, used-right bitmask)."""
    adj = [[] for _ in range(left_count)]
    for u, v in edges:
        adj[u].append(v)

    @lru_cache(maxsize=None)
    def best(u: int, used: int) -> int:
        if u == left_count:
            return 0
        out = best(u + 1, used)
        for v in adj[u]:
            if not used >> v & 1:
                out = max(out, 1 + best(u + 1, used | 1 << v))
        return out

    return best(0, 0)


def min_vertex_cover_size(left_count: int, right_count: int, edges) -> int:
    """Smallest vertex set touching every edge, by increasing-size enumeration."""
    verts = [("L", u) for u in range(left_count)] + [("R", v) for v in range(right_count)]
    edges = list(edges)
    for size in range(len(verts) + 1):
        for chosen in itertools.combinations(verts, size):
            c = set(chosen)
            if all(("L", u) in c or ("R", v) in c for u, v in edges):
                return size
    raise AssertionError("unreachable")


def has_three_ap(values) -> bool:
    s = set(values)
    return any(2 * b - a in s for a in s for b in s if b > a)


def largest_ap_free_size(k_max: int) -> int:
    for size in range(k_max, 0, -1):
        for combo in itertools.combinations(range(1, k_max + 1), size):
            if not has_three_ap(combo):
                return size
    return 0


def all_ap_free_sets(k_max: int):
    for size in range(1, k_max + 1):
        for combo in itertools.combinations(range(1, k_max + 1), size):
            if not has_three_ap(combo):
                yield combo


def rs_is_valid(n: int, matchings, edges) -> bool:
    """Direct check of the RS definition: partition into equal induced matchings."""
    edges = set(edges)
    listed = [e for m in matchings for e in m]
    if len(listed) != len(set(listed)) or set(listed) != edges:
        return False
    sizes = {len(m) for m in matchings}
    if len(sizes) > 1:
        return False
    for m in matchings:
        lefts = [u for u, _ in m]
        rights = [v for _, v in m]
        if len(set(lefts)) != len(m) or len(set(rights)) != len(m):
            return False
        for (u1, v1), (u2, v2) in itertools.permutations(m, 2):
            if (u1, v2) in edges:
                return False
    return True


def naive_fourier(values: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(1 << n)
    for s in range(1 << n):
        total = 0.0
        for x in range(1 << n):
            total += values[x] * (-1) ** bin(s & x).count("1")
        out[s] = total / (1 << n)
    return out


def naive_xor_bias(members, r_prime: int, k: int) -> float:
    biases = []
    for subset in itertools.combinations(range(r_prime), k):
        mask = sum(1 << i for i in subset)
        even = sum(1 for z in members if bin(z & mask).count("1") % 2 == 0)
        biases.append(abs(2 * even - len(members)) / len(members))
    return sum(biases) / len(biases)


def walk_augmenting_path(edges, n: int, block, seq):
    """Follow the path from a_{u_1}: matched edge, then the augmenting edge on the same copy.

    ``edges`` is the encoded graph's edge set; the matched edge at a left
    vertex is the one whose host projection is the row's host edge.
    Returns the final right vertex.
    """
    mate = dict(block)
    cur = seq[0]  # a-copy of u_1
    end = None
    for idx, u in enumerate(seq):
        v = mate[u]
        options = [w for w in (v, v + n) if (cur, w) in edges]
        assert len(options) == 1
        end = options[0]
        if idx + 1 < len(seq):
            # augmenting edge (u_{i+1} copy, v_i copy) keeps the copy of the right endpoint
            cur = seq[idx + 1] + (end // n) * n
    return end


def naive_hiding_tvd(host, k: int, ell: int, encode, y1, y2, phi):
    """Conditional H-bar laws by plain enumeration of (j, ordered family, X).

    ``encode`` maps a tuple-of-rows bit matrix to a hashable code.
    """
    from hidden_matching.augmentation import SequenceFamily, h_bar_edges

    r, t = host.r, host.t
    laws = ({}, {})
    for j in range(t):
        for perm in itertools.permutations(range(r), k * ell):
            rows = [perm[i * k:(i + 1) * k] for i in range(ell)]
            fam = SequenceFamily(j, k, tuple(tuple(host.matchings[j][p][0] for p in seq) for seq in rows))
            key = h_bar_edges(host, fam).edges
            for bits in itertools.product((0, 1), repeat=r * t):
                x = tuple(bits[i * t:(i + 1) * t] for i in range(r))
                if encode(x) != phi:
                    continue
                for law, y in zip(laws, (y1, y2)):
                    if all(sum(x[p][j] for p in seq) % 2 == yb for seq, yb in zip(rows, y)):
                        law[key] = law.get(key, 0) + 1
    za, zb = sum(laws[0].values()), sum(laws[1].values())
    if za == 0 or zb == 0:
        return None
    keys = set(laws[0]) | set(laws[1])
    return 0.5 * sum(abs(laws[0].get(h, 0) / za - laws[1].get(h, 0) / zb) for h in keys)
