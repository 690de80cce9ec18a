from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from swarmsched.halton import (
    HaltonConfig,
    first_primes,
    halton_point,
    halton_points,
    init_populations,
    radical_inverse,
    radical_inverse_array,
)


def digit_reversal(index: int, base: int) -> Fraction:
    """Independent oracle: sum of digit_k * base^-(k+1) as an exact fraction."""
    value, scale = Fraction(0), Fraction(1, base)
    while index:
        value += (index % base) * scale
        index //= base
        scale /= base
    return value


def test_radical_inverse_examples():
    assert radical_inverse(0, 2) == 0.0
    assert [radical_inverse(i, 2) for i in (1, 2, 3)] == [0.5, 0.25, 0.75]
    assert radical_inverse(1, 3) == pytest.approx(1 / 3)
    assert radical_inverse(2, 3) == pytest.approx(2 / 3)


@given(st.integers(0, 10**9), st.sampled_from(first_primes(30)))
def test_radical_inverse_matches_exact_oracle(index, base):
    assert radical_inverse(index, base) == float(digit_reversal(index, base))


@given(st.lists(st.integers(0, 10**6), min_size=1, max_size=50), st.sampled_from([2, 3, 5, 7, 97]))
def test_array_version_matches_scalar(indices, base):
    out = radical_inverse_array(np.array(indices), base)
    assert out.tolist() == [radical_inverse(i, base) for i in indices]


def test_radical_inverse_injective_within_precision():
    for base in (2, 3, 5):
        values = radical_inverse_array(np.arange(base**6), base)
        assert len(np.unique(values)) == base**6


def test_radical_inverse_rejects_bad_input():
    with pytest.raises(ValueError):
        radical_inverse(-1, 2)
    with pytest.raises(ValueError):
        radical_inverse(1, 1)


def test_first_primes_beyond_25():
    primes = first_primes(40)
    assert primes[:5] == [2, 3, 5, 7, 11]
    assert primes[24] == 97 and primes[25] == 101 and primes[39] == 173
    assert HaltonConfig(dims=40, lb=0, ub=1).bases == tuple(primes)


def test_halton_point_examples():
    cfg = HaltonConfig(dims=2, lb=0, ub=31)
    assert halton_point(0, cfg).tolist() == [0.0, 0.0]
    assert halton_point(1, cfg) == pytest.approx([15.5, 31 / 3])


@given(st.integers(0, 10**6), st.integers(1, 30))
def test_halton_point_in_range(index, dims):
    cfg = HaltonConfig(dims=dims, lb=-2.0, ub=5.0)
    p = halton_point(index, cfg)
    assert np.all((p >= -2.0) & (p < 5.0))
    assert np.array_equal(halton_points([index], cfg)[0], p)


def test_config_validation():
    with pytest.raises(ValueError):
        HaltonConfig(dims=0, lb=0, ub=1)
    with pytest.raises(ValueError):
        HaltonConfig(dims=1, lb=1, ub=1)
    with pytest.raises(ValueError):
        HaltonConfig(dims=2, lb=0, ub=1, bases=(2,))


def test_init_populations_examples():
    whales, gulls = init_populations(1, HaltonConfig(dims=1, lb=0, ub=1))
    assert whales.tolist() == [[0.5]] and gulls.tolist() == [[0.25]]
    whales, gulls = init_populations(50, HaltonConfig(dims=6, lb=0, ub=31))
    allpts = np.vstack([whales, gulls])
    assert len(np.unique(allpts, axis=0)) == 100


@given(st.integers(1, 60), st.integers(1, 4))
def test_populations_disjoint(n, dims):
    whales, gulls = init_populations(n, HaltonConfig(dims=dims, lb=0, ub=10))
    assert not set(map(tuple, whales)) & set(map(tuple, gulls))
    with pytest.raises(ValueError):
        init_populations(0, HaltonConfig(dims=dims, lb=0, ub=10))
