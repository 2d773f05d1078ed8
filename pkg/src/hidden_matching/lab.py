"""Small exact experiments on parity bias and on how well H-bar hides Y."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .augmentation import DEFAULT_DELTA, SequenceFamily, check_capacity, h_bar_edges
from .fourier import hadamard
from .rng import as_generator, substream
from .rs import RSGraph

EXACT_BIAS_MAX_DIM = 20
TOY_MAX_BITS = 20


@dataclass(frozen=True, eq=False)
class SupportSet:
    """A nonempty set of r'-bit strings, stored as sorted integer codes."""

    r_prime: int
    members: np.ndarray

    def __post_init__(self):
        if not 1 <= self.r_prime <= 24:
            raise ValueError("r' must lie in [1, 24]")
        m = np.unique(np.asarray(self.members, dtype=np.int64))
        if m.size == 0:
            raise ValueError("support must be nonempty")
        if m[0] < 0 or m[-1] >= 1 << self.r_prime:
            raise ValueError("member outside {0,1}^r'")
        m.setflags(write=False)
        object.__setattr__(self, "members", m)

    def __len__(self) -> int:
        return self.members.size

    @classmethod
    def full(cls, r_prime: int) -> "SupportSet":
        return cls(r_prime, np.arange(1 << r_prime))

    @classmethod
    def even_parity(cls, r_prime: int) -> "SupportSet":
        x = np.arange(1 << r_prime, dtype=np.int64)
        return cls(r_prime, x[(np.bitwise_count(x) & 1) == 0])

    @classmethod
    def random_with_deficiency(cls, r_prime: int, missing: int, rng) -> "SupportSet":
        rng = as_generator(rng, "support")
        removed = rng.choice(1 << r_prime, size=missing, replace=False)
        keep = np.ones(1 << r_prime, dtype=bool)
        keep[removed] = False
        return cls(r_prime, np.flatnonzero(keep))

    def indicator(self) -> np.ndarray:
        out = np.zeros(1 << self.r_prime)
        out[self.members] = 1.0
        return out


@dataclass(frozen=True)
class XorBias:
    r_prime: int
    k: int
    support_size: int
    mode: str
    subsets: int
    mean_abs_bias: float
    mean_sq_bias: float
    stderr: float
    bound_ratio: dict = field(default_factory=dict)  # c -> mean_sq / (c log(2^r'/|s|)/r')^k
    bound_sqrt: dict = field(default_factory=dict)  # c -> sqrt((c log(2^r'/|s|)/r')^k)

    def as_dict(self) -> dict:
        return {"r_prime": self.r_prime, "k": self.k, "support_size": self.support_size,
                "mode": self.mode, "subsets": self.subsets, "mean_abs_bias": self.mean_abs_bias,
                "mean_sq_bias": self.mean_sq_bias, "stderr": self.stderr,
                "bound_ratio": {str(c): v for c, v in self.bound_ratio.items()},
                "bound_sqrt": {str(c): v for c, v in self.bound_sqrt.items()}}


BOUND_CONSTANTS = (1, 2, 4)


def _bounds(r_prime: int, k: int, size: int, mean_sq: float) -> tuple[dict, dict]:
    deficiency = math.log2((1 << r_prime) / size)
    ratio, root = {}, {}
    for c in BOUND_CONSTANTS:
        b = (c * deficiency / r_prime) ** k
        root[c] = math.sqrt(b)
        ratio[c] = mean_sq / b if b > 0 else (0.0 if mean_sq == 0 else math.inf)
    return ratio, root


def _subset_masks(r_prime: int, k: int) -> np.ndarray:
    x = np.arange(1 << r_prime, dtype=np.int64)
    return x[np.bitwise_count(x) == k]


def xor_bias(s: SupportSet, k: int, mode: str = "exact", trials: int = 100_000, seed=None) -> XorBias:
    """Mean over k-subsets S of |Pr(xor_S z = 0) - Pr(xor_S z = 1)|, z uniform on s.

    Exact mode reads every bias off one Walsh-Hadamard transform of the
    indicator of s. Sampled mode draws uniform k-subsets and evaluates parities
    directly on the members.
    """
    r = s.r_prime
    if not 1 <= k <= r:
        raise ValueError("need 1 <= k <= r'")
    size = len(s)
    if mode == "exact":
        if r > EXACT_BIAS_MAX_DIM:
            raise ValueError(f"exact mode enumerates 2^r' subsets; r' <= {EXACT_BIAS_MAX_DIM}")
        masks = _subset_masks(r, k)
        biases = np.abs(hadamard(s.indicator())[masks]) / size
        stderr = 0.0
    elif mode == "sampled":
        if seed is None:
            raise ValueError("sampled mode needs a seed")
        rng = as_generator(seed, "xor-bias")
        picks = np.argsort(rng.random((trials, r)), axis=1)[:, :k]
        masks = (np.int64(1) << picks.astype(np.int64)).sum(axis=1)
        biases = np.empty(trials)
        chunk = max(1, 4_000_000 // size)
        for lo in range(0, trials, chunk):
            m = masks[lo:lo + chunk]
            odd = np.bitwise_count(s.members[None, :] & m[:, None]) & 1
            biases[lo:lo + chunk] = np.abs(1.0 - 2.0 * odd.mean(axis=1))
        stderr = float(biases.std(ddof=1) / math.sqrt(trials)) if trials > 1 else math.inf
    else:
        raise ValueError("mode must be 'exact' or 'sampled'")
    mean_sq = float((biases**2).mean())
    ratio, root = _bounds(r, k, size, mean_sq)
    return XorBias(r, k, size, mode, int(biases.size), float(biases.mean()), mean_sq, stderr, ratio, root)


def bias_trend(missing: int, k: int, r_values: Sequence[int], seed: int) -> dict:
    """Exact mean |bias| for supports of fixed deficiency as r' grows."""
    rows = []
    for r in r_values:
        s = SupportSet.random_with_deficiency(r, missing, substream(seed, f"trend/{r}"))
        rows.append(xor_bias(s, k).as_dict())
    means = [row["mean_abs_bias"] for row in rows]
    return {"missing": missing, "k": k, "seed": seed, "rows": rows,
            "non_increasing": all(b <= a + 1e-12 for a, b in zip(means, means[1:]))}


# -- toy hiding experiment ------------------------------------------------------------

Encoder = Callable[[np.ndarray], np.ndarray]  # (N, r, t) uint8 -> (N,) int64 codes


def _flat_codes(xs: np.ndarray) -> np.ndarray:
    flat = xs.reshape(xs.shape[0], -1).astype(np.int64)
    weights = np.int64(1) << np.arange(flat.shape[1], dtype=np.int64)
    return flat @ weights


def constant_encoder() -> Encoder:
    return lambda xs: np.zeros(xs.shape[0], dtype=np.int64)


def identity_encoder() -> Encoder:
    return _flat_codes


def column_parity_encoder() -> Encoder:
    return lambda xs: _flat_codes((xs.sum(axis=1, dtype=np.int64) & 1)[:, None, :])


def first_bits_encoder(bits: int) -> Encoder:
    return lambda xs: _flat_codes(xs.reshape(xs.shape[0], -1)[:, :bits][:, None, :])


def random_hash_encoder(bits: int, seed: int, total_bits: int) -> Encoder:
    table = substream(seed, "encoder").integers(0, 1 << bits, size=1 << total_bits, dtype=np.int64)
    return lambda xs: table[_flat_codes(xs)]


def make_encoder(name: str, r: int, t: int, bits: int = 1, seed: int | None = None) -> Encoder:
    if name == "constant":
        return constant_encoder()
    if name == "identity":
        return identity_encoder()
    if name == "column-parity":
        return column_parity_encoder()
    if name == "first-bits":
        return first_bits_encoder(bits)
    if name == "random-hash":
        if seed is None:
            raise ValueError("random-hash encoder needs a seed")
        return random_hash_encoder(bits, seed, r * t)
    raise ValueError(f"unknown encoder {name!r}")


ENCODER_NAMES = ("constant", "identity", "column-parity", "first-bits", "random-hash")


def all_matrices(r: int, t: int) -> np.ndarray:
    """Every r x t bit matrix; row i of the result has code i under ``_flat_codes``."""
    codes = np.arange(1 << (r * t), dtype=np.int64)
    bits = (codes[:, None] >> np.arange(r * t, dtype=np.int64)) & 1
    return bits.astype(np.uint8).reshape(-1, r, t)


class HidingExperiment:
    """Exact law of H-bar given an observed encoding phi(X), under two targets y1, y2.

    The sampler draws j uniformly, an ordered family uniformly, and X uniformly
    among matrices consistent with y; H-bar is a function of (j, family). The
    conditional law given phi(X) = phi comes from the joint over all
    consistent (j, family, X) triples.
    """

    def __init__(self, host: RSGraph, k: int, ell: int, encoder: Encoder, y1: Sequence[int],
                 y2: Sequence[int], delta: float = DEFAULT_DELTA):
        if host.r * host.t > TOY_MAX_BITS:
            raise ValueError(f"r*t = {host.r * host.t} exceeds the enumeration bound {TOY_MAX_BITS}")
        if len(y1) != ell or len(y2) != ell:
            raise ValueError("y1 and y2 must have length ell")
        check_capacity(k, ell, host.r, delta)
        self.host, self.k, self.ell = host, k, ell
        self.y1 = np.array(y1, dtype=np.uint8)
        self.y2 = np.array(y2, dtype=np.uint8)
        self.xs = all_matrices(host.r, host.t)
        self.codes = np.asarray(encoder(self.xs), dtype=np.int64)
        self.families = []  # (j, rows per sequence, H-bar key)
        for j in range(host.t):
            block = host.matchings[j]
            for perm in itertools.permutations(range(host.r), k * ell):
                rows = tuple(perm[i * k:(i + 1) * k] for i in range(ell))
                fam = SequenceFamily(j, k, tuple(tuple(block[p][0] for p in seq) for seq in rows))
                self.families.append((j, rows, h_bar_edges(host, fam).edges))
        # each (j, family) has probability 1/(t * #families for that j); all j have equally many
        self.family_weight = 1.0 / len(self.families)

    def _law(self, xs: np.ndarray, y: np.ndarray) -> dict:
        law: dict = {}
        for j, rows, key in self.families:
            ok = np.ones(xs.shape[0], dtype=bool)
            for seq, bit in zip(rows, y):
                ok &= (np.bitwise_xor.reduce(xs[:, list(seq), j], axis=1) == bit)
            count = int(ok.sum())
            if count:
                law[key] = law.get(key, 0.0) + self.family_weight * count
        return law

    def tvd(self, phi: int) -> float | None:
        """TVD of the two conditional H-bar laws; None if phi is impossible under y1 or y2."""
        xs = self.xs[self.codes == phi]
        p, q = self._law(xs, self.y1), self._law(xs, self.y2)
        zp, zq = sum(p.values()), sum(q.values())
        if zp == 0 or zq == 0:
            return None
        keys = set(p) | set(q)
        return 0.5 * sum(abs(p.get(h, 0.0) / zp - q.get(h, 0.0) / zq) for h in keys)

    def campaign(self, trials: int, seed: int) -> dict:
        """TVDs at phi = phi(X) for X uniform, drawn ``trials`` times."""
        rng = substream(seed, "hiding-campaign")
        picks = rng.integers(0, self.xs.shape[0], size=trials)
        cache: dict[int, float | None] = {}
        values = []
        for i in picks:
            phi = int(self.codes[i])
            if phi not in cache:
                cache[phi] = self.tvd(phi)
            values.append(cache[phi])
        defined = [v for v in values if v is not None]
        return {"trials": trials, "seed": seed, "undefined": len(values) - len(defined),
                "distinct_phi": len(cache),
                "mean_tvd": float(np.mean(defined)) if defined else None,
                "max_tvd": float(np.max(defined)) if defined else None,
                "tvds": [None if v is None else float(v) for v in values]}


def toy_hiding_tvd(host: RSGraph, k: int, ell: int, encoder: Encoder, y1: Sequence[int],
                   y2: Sequence[int], phi: int, delta: float = DEFAULT_DELTA) -> float | None:
    return HidingExperiment(host, k, ell, encoder, y1, y2, delta).tvd(phi)
