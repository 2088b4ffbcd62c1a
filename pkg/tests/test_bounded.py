import pytest
from hypothesis import given, strategies as st

from nicolas_lab.bounded import BoundedReal

vals = st.floats(-1e6, 1e6)
rads = st.floats(0, 1e3)


def test_basic():
    b = BoundedReal(1.0, 0.5)
    assert (b.lower, b.upper) == (0.5, 1.5)
    assert b.contains(1.5) and not b.contains(1.6)
    assert b.contains(1.6, slack=0.1)
    assert b.sign() == 1
    assert BoundedReal(-1.0, 0.5).sign() == -1
    assert BoundedReal(0.1, 0.5).sign() is None
    assert BoundedReal(0.0).sign() == 0
    with pytest.raises(ValueError):
        BoundedReal(1.0, -1.0)
    with pytest.raises(ValueError):
        BoundedReal(1.0, float("nan"))


@given(vals, rads, vals, rads, st.floats(0, 1), st.floats(0, 1))
def test_sum_encloses(a, ra, b, rb, ta, tb):
    x = a - ra + 2 * ra * ta
    y = b - rb + 2 * rb * tb
    s = BoundedReal(a, ra) + BoundedReal(b, rb)
    d = BoundedReal(a, ra) - BoundedReal(b, rb)
    assert s.contains(x + y, slack=1e-6)
    assert d.contains(x - y, slack=1e-6)


@given(vals, rads, st.floats(-100, 100))
def test_scalar(a, r, k):
    b = BoundedReal(a, r)
    assert (k * b).radius == pytest.approx(abs(k) * r)
    assert (b + k).radius == r
    assert (k - b).value == pytest.approx(k - a)
    assert (-b).value == -a


def test_overlaps():
    assert BoundedReal(0, 1).overlaps(BoundedReal(1.5, 0.5))
    assert not BoundedReal(0, 1).overlaps(BoundedReal(2.5, 0.5))
