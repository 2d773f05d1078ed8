"""Fourier analysis of functions on {0,1}^n.

A point x is an integer whose bit i is x_i. The character of a set S (also a
bitmask) is X_S(x) = (-1)^{|S & x|}, and f^(S) = 2^-n sum_x f(x) X_S(x).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_DIMENSION = 24


@dataclass(frozen=True, eq=False)
class BooleanFunction:
    n: int
    values: np.ndarray

    def __post_init__(self):
        if not 0 <= self.n <= MAX_DIMENSION:
            raise ValueError(f"dimension must lie in [0, {MAX_DIMENSION}]")
        v = np.asarray(self.values, dtype=float)
        if v.shape != (1 << self.n,):
            raise ValueError(f"need {1 << self.n} values, got shape {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def support_size(self) -> int:
        return int(np.count_nonzero(self.values))

    def is_ternary(self) -> bool:
        return bool(np.all(np.isin(self.values, (-1.0, 0.0, 1.0))))


def hadamard(a: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform of a length-2^n vector."""
    a = np.array(a, dtype=float)
    size = a.size
    h = 1
    while h < size:
        blocks = a.reshape(-1, 2, h)
        lo, hi = blocks[:, 0, :], blocks[:, 1, :]
        a = np.stack((lo + hi, lo - hi), axis=1).reshape(size)
        h *= 2
    return a


def walsh_fourier(f: BooleanFunction) -> np.ndarray:
    """All 2^n coefficients f^(S), indexed by the bitmask of S."""
    return hadamard(f.values) / (1 << f.n)


def inverse_walsh(coeffs: np.ndarray) -> BooleanFunction:
    coeffs = np.asarray(coeffs, dtype=float)
    n = coeffs.size.bit_length() - 1
    if coeffs.size != 1 << n:
        raise ValueError("coefficient table length must be a power of two")
    return BooleanFunction(n, hadamard(coeffs))


def character(n: int, s: int) -> BooleanFunction:
    x = np.arange(1 << n, dtype=np.int64)
    return BooleanFunction(n, 1.0 - 2.0 * (np.bitwise_count(x & s) & 1))


def subset_sizes(n: int) -> np.ndarray:
    return np.bitwise_count(np.arange(1 << n, dtype=np.int64)).astype(np.int64)


@dataclass(frozen=True)
class KKLOutcome:
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + 1e-10


def kkl_sides(f: BooleanFunction, gamma: float) -> KKLOutcome:
    """sum_S gamma^|S| f^(S)^2 against (|supp f| / 2^n)^(2 / (1 + gamma))."""
    if not 0 < gamma < 1:
        raise ValueError("gamma must lie in (0, 1)")
    if not f.is_ternary():
        raise ValueError("the inequality is stated for functions into {-1, 0, 1}")
    coeffs = walsh_fourier(f)
    lhs = float((gamma ** subset_sizes(f.n) * coeffs**2).sum())
    rhs = (f.support_size / (1 << f.n)) ** (2 / (1 + gamma))
    return KKLOutcome(lhs, rhs)


def kkl_check(f: BooleanFunction, gamma: float) -> bool:
    return kkl_sides(f, gamma).holds
