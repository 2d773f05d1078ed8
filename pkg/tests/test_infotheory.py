import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hidden_matching.infotheory import (FiniteDistribution, binary_entropy, entropy, kl, pair_uniform_check,
                                        pair_uniform_outcome, pinsker_check, tvd)


def test_entropy_examples():
    assert entropy(FiniteDistribution.uniform(4)) == pytest.approx(2.0)
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0) == 0.0 and binary_entropy(1) == 0.0
    assert binary_entropy(0.1) == pytest.approx(0.468996, abs=5e-7)
    assert entropy(FiniteDistribution([1.0, 0.0])) == 0.0


def test_validation():
    with pytest.raises(ValueError):
        FiniteDistribution([0.5, 0.6])
    with pytest.raises(ValueError):
        FiniteDistribution([1.5, -0.5])
    with pytest.raises(ValueError):
        binary_entropy(1.2)
    FiniteDistribution([0.5, 0.5 + 5e-13])


def test_tvd_and_kl_examples():
    point = FiniteDistribution([1.0, 0.0])
    half = FiniteDistribution.uniform(2)
    assert tvd(point, half) == 0.5
    assert kl(point, half) == pytest.approx(1.0)
    assert math.isinf(kl(half, point))
    mu = FiniteDistribution.from_weights([1, 2, 3])
    assert kl(mu, mu) == 0.0 and tvd(mu, mu) == 0.0


def test_labelled_outcomes_align():
    a = FiniteDistribution.from_mapping({"x": 1, "y": 1})
    b = FiniteDistribution.from_mapping({"y": 1, "z": 1})
    assert tvd(a, b) == pytest.approx(0.5)
    assert math.isinf(kl(a, b))


def test_pinsker_random_pairs():
    rng = np.random.default_rng(11)
    for _ in range(2000):
        size = int(rng.integers(2, 9))
        mu = FiniteDistribution.from_weights(rng.dirichlet(np.ones(size)))
        nu = FiniteDistribution.from_weights(rng.dirichlet(np.ones(size)))
        assert pinsker_check(mu, nu)
        assert tvd(mu, nu) <= math.sqrt(kl(mu, nu) * math.log(2) / 2) + 1e-12


@given(st.lists(st.floats(0.01, 1.0), min_size=2, max_size=8))
def test_kl_nonnegative_and_entropy_bounded(weights):
    d = FiniteDistribution.from_weights(weights)
    u = FiniteDistribution.uniform(len(weights))
    assert kl(d, u) >= -1e-12
    assert entropy(d) == pytest.approx(math.log2(len(weights)) - kl(d, u), abs=1e-9)


def test_pair_uniform_examples():
    for eps in (0.05, 0.2, 0.45):
        assert pair_uniform_check(FiniteDistribution.uniform(5), eps)
    out = pair_uniform_outcome(FiniteDistribution([0.3, 0.7]), 0.1)
    assert not out.hypothesis and out.holds
    with pytest.raises(ValueError):
        pair_uniform_check(FiniteDistribution.uniform(2), 0.5)


def test_pair_uniform_near_uniform_sweep():
    rng = np.random.default_rng(5)
    tested = 0
    for _ in range(1000):
        size = int(rng.integers(2, 12))
        eps = float(rng.uniform(0.01, 0.49))
        w = 1 + rng.uniform(-eps, eps, size)
        d = FiniteDistribution.from_weights(w)
        out = pair_uniform_outcome(d, eps)
        tested += out.hypothesis
        assert out.holds
    assert tested > 500
