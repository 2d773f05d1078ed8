import numpy as np
import pytest

from hidden_matching.fourier import (BooleanFunction, character, inverse_walsh, kkl_check, kkl_sides,
                                     walsh_fourier)

from oracles import naive_fourier


def test_constant_and_characters():
    c = walsh_fourier(BooleanFunction(3, np.ones(8)))
    assert c[0] == 1 and not c[1:].any()
    for t in range(16):
        c = walsh_fourier(character(4, t))
        expected = np.zeros(16)
        expected[t] = 1
        assert np.array_equal(c, expected)


def test_matches_naive_transform():
    rng = np.random.default_rng(2)
    for n in range(0, 6):
        v = rng.normal(size=1 << n)
        assert np.allclose(walsh_fourier(BooleanFunction(n, v)), naive_fourier(v, n), atol=1e-12)


def test_inverse_and_parseval():
    rng = np.random.default_rng(3)
    for n in range(1, 13):
        v = rng.normal(size=1 << n)
        c = walsh_fourier(BooleanFunction(n, v))
        assert np.allclose(inverse_walsh(c).values, v, atol=1e-10)
        assert (c**2).sum() == pytest.approx((v**2).mean(), abs=1e-10)


def test_bounds_and_shapes():
    with pytest.raises(ValueError):
        BooleanFunction(2, np.ones(3))
    with pytest.raises(ValueError):
        BooleanFunction(25, np.ones(1))
    with pytest.raises(ValueError):
        inverse_walsh(np.ones(6))


def test_kkl_examples():
    for t in (0, 1, 5, 15):
        out = kkl_sides(character(4, t), 0.5)
        assert out.lhs == pytest.approx(0.5 ** bin(t).count("1"))
        assert out.rhs == 1.0 and out.holds
    zero = kkl_sides(BooleanFunction(3, np.zeros(8)), 0.3)
    assert zero.lhs == 0 and zero.rhs == 0 and zero.holds
    with pytest.raises(ValueError):
        kkl_check(BooleanFunction(1, [0.5, 1]), 0.5)
    with pytest.raises(ValueError):
        kkl_check(BooleanFunction(1, [0, 1]), 1.0)


def test_kkl_random_sparse():
    rng = np.random.default_rng(4)
    for _ in range(100):
        n = int(rng.integers(1, 11))
        density = rng.uniform(0.01, 0.5)
        v = np.where(rng.random(1 << n) < density, rng.choice([-1.0, 1.0], 1 << n), 0.0)
        f = BooleanFunction(n, v)
        for gamma in (0.1, 0.5, 0.9):
            assert kkl_check(f, gamma)
