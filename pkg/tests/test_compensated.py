import math

import numpy as np
from hypothesis import given, settings, strategies as st

from nicolas_lab.compensated import (CompensatedSum, compensated_prefix, compensated_suffix,
                                     compensated_total)

EPS = 2.0**-52
finite = st.floats(-1e12, 1e12, allow_nan=False, allow_infinity=False)


@settings(max_examples=200)
@given(st.lists(finite, max_size=200))
def test_add_error_bound(terms):
    acc = CompensatedSum()
    for t in terms:
        acc.add(t)
    exact = math.fsum(terms)
    assert abs(acc.value - exact) <= 2 * EPS * sum(abs(t) for t in terms)


@given(st.lists(finite, max_size=300))
def test_total_error_bound(terms):
    assert abs(compensated_total(terms) - math.fsum(terms)) <= 2 * EPS * sum(map(abs, terms))


def test_catastrophic_cancellation():
    assert compensated_total([1e16, 1.0, -1e16]) == 1.0
    acc = CompensatedSum()
    for t in (1.0, 1e100, 1.0, -1e100):
        acc.add(t)
    assert acc.value == 2.0


@given(st.lists(finite, max_size=50), st.lists(finite, max_size=50))
def test_merge(a, b):
    left = CompensatedSum().extend(a) if a else CompensatedSum()
    right = CompensatedSum().extend(b) if b else CompensatedSum()
    left.merge(right)
    exact = math.fsum(a + b)
    assert abs(left.value - exact) <= 4 * EPS * (sum(map(abs, a + b)) + abs(exact))


def test_prefix_matches_fsum():
    rng = np.random.default_rng(7)
    t = rng.uniform(-1, 1, 5000) * 10.0 ** rng.integers(-8, 8, 5000)
    out, carry = compensated_prefix(t, block=256)
    assert out[0] == 0.0 and len(out) == 5001
    mags = np.cumsum(np.abs(t))
    for k in (1, 255, 256, 257, 1000, 4999, 5000):
        assert abs(out[k] - math.fsum(t[:k].tolist())) <= 2 * EPS * mags[k - 1] + 256 * EPS * mags[k - 1]
    assert abs(carry.value - math.fsum(t.tolist())) <= 2 * EPS * mags[-1]


@settings(max_examples=60, deadline=None)
@given(n=st.integers(0, 3000), split=st.integers(0, 3000), block=st.sampled_from([4, 64, 1024]))
def test_carried_prefix_is_bit_identical(n, split, block):
    rng = np.random.default_rng(n)
    t = rng.standard_normal(n)
    split = min(split, n)
    whole, _ = compensated_prefix(t, block=block)
    first, carry = compensated_prefix(t[:split], block=block)
    second, _ = compensated_prefix(t[split:], start=carry, block=block)
    joined = np.concatenate([first, second[1:]])
    assert np.array_equal(joined, whole)


def test_prefix_start_value():
    out, _ = compensated_prefix([1.0, 2.0], start=CompensatedSum(10.0))
    assert out.tolist() == [10.0, 11.0, 13.0]


def test_suffix():
    s = compensated_suffix([1.0, 2.0, 3.0])
    assert s.tolist() == [6.0, 5.0, 3.0, 0.0]
