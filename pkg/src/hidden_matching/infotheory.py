"""Finite distributions: entropy, KL divergence, total variation, and two checks.

All logarithms are base 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FiniteDistribution:
    probs: np.ndarray
    outcomes: tuple[Hashable, ...] | None = None

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise ValueError("need a nonempty 1-d probability vector")
        if np.any(p < 0):
            raise ValueError("negative probability")
        if abs(p.sum() - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
        if self.outcomes is not None and len(self.outcomes) != p.size:
            raise ValueError("outcome labels and probabilities differ in length")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @classmethod
    def from_weights(cls, weights: Sequence[float], outcomes=None) -> "FiniteDistribution":
        w = np.asarray(weights, dtype=float)
        if np.any(w < 0) or w.sum() <= 0:
            raise ValueError("weights must be nonnegative with a positive total")
        return cls(w / w.sum(), None if outcomes is None else tuple(outcomes))

    @classmethod
    def uniform(cls, size: int) -> "FiniteDistribution":
        return cls(np.full(size, 1.0 / size))

    @classmethod
    def from_mapping(cls, table: dict) -> "FiniteDistribution":
        keys = tuple(table)
        return cls.from_weights([table[k] for k in keys], keys)

    def __len__(self) -> int:
        return self.probs.size

    @property
    def support_size(self) -> int:
        return int(np.count_nonzero(self.probs))


def _aligned(mu: FiniteDistribution, nu: FiniteDistribution) -> tuple[np.ndarray, np.ndarray]:
    if mu.outcomes is None or nu.outcomes is None:
        if len(mu) != len(nu):
            raise ValueError("unlabeled distributions must have equal length")
        return mu.probs, nu.probs
    keys = list(dict.fromkeys(mu.outcomes + nu.outcomes))
    a = dict(zip(mu.outcomes, mu.probs))
    b = dict(zip(nu.outcomes, nu.probs))
    return np.array([a.get(k, 0.0) for k in keys]), np.array([b.get(k, 0.0) for k in keys])


def entropy(d: FiniteDistribution) -> float:
    p = d.probs[d.probs > 0]
    return float(-(p * np.log2(p)).sum())


def binary_entropy(p: float) -> float:
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    if p in (0, 1):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def kl(mu: FiniteDistribution, nu: FiniteDistribution) -> float:
    """D(mu || nu) in bits; ``math.inf`` when supp(mu) is not inside supp(nu)."""
    p, q = _aligned(mu, nu)
    on = p > 0
    if np.any(q[on] == 0):
        return math.inf
    return float((p[on] * np.log2(p[on] / q[on])).sum())


def tvd(mu: FiniteDistribution, nu: FiniteDistribution) -> float:
    p, q = _aligned(mu, nu)
    return float(0.5 * np.abs(p - q).sum())


def pinsker_check(mu: FiniteDistribution, nu: FiniteDistribution) -> bool:
    """tvd <= sqrt(kl / 2); with kl in bits this is implied by the natural-log form."""
    d = kl(mu, nu)
    return math.isinf(d) or tvd(mu, nu) <= math.sqrt(d / 2) + 1e-12


@dataclass(frozen=True)
class PairUniformOutcome:
    hypothesis: bool
    conclusion: bool

    @property
    def holds(self) -> bool:
        return (not self.hypothesis) or self.conclusion


def pair_uniform_outcome(d: FiniteDistribution, eps: float) -> PairUniformOutcome:
    """Pairwise conditionals within (1 +- eps)/2 should force masses within (1 +- 2 eps)/|supp|.

    x/(x+y) is monotone, so the extreme pair (min, max) decides the hypothesis.
    """
    if not 0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    p = d.probs[d.probs > 0]
    lo, hi = float(p.min()), float(p.max())
    hypothesis = lo / (lo + hi) >= (1 - eps) / 2 - 1e-12 if p.size > 1 else True
    size = p.size
    conclusion = bool(lo >= (1 - 2 * eps) / size - 1e-12 and hi <= (1 + 2 * eps) / size + 1e-12)
    return PairUniformOutcome(bool(hypothesis), conclusion)


def pair_uniform_check(d: FiniteDistribution, eps: float) -> bool:
    """True unless the hypothesis holds and the conclusion fails."""
    return pair_uniform_outcome(d, eps).holds
