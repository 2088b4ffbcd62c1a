import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from nicolas_lab import prime_zeta as pz
from nicolas_lab.constants import GAMMA_MINUS_B, MERTENS_B
from nicolas_lab.errors import DomainError, PrecisionError, RangeError
from nicolas_lab.summatory import primes_to


@given(st.floats(1e-12, 0.5))
def test_log1m_plus(u):
    with mpmath.workdps(40):
        exact = float(mpmath.log(1 - mpmath.mpf(u)) + mpmath.mpf(u))
    got = float(pz.log1m_plus(np.array([u]))[0])
    # The series branch is relatively accurate; above 1/16 the direct
    # form cancels and is only absolutely accurate.
    tol = 4e-16 * abs(exact) if u < 1 / 16 else 4e-16 * u
    assert abs(got - exact) <= tol


@given(st.floats(0.0, 0.5), st.integers(2, 60))
def test_zeta_series_terms(u, n):
    exact = math.fsum(u**k / k for k in range(2, n + 1))
    assert float(pz.zeta_series_terms(np.array([u]), n)[0]) == pytest.approx(exact, rel=1e-14, abs=1e-300)


def test_prime_zeta_examples():
    assert pz.prime_zeta_partial(2, 10) == pytest.approx(0.42151927437641723356, rel=1e-15)
    assert pz.prime_zeta_partial(1, 10) == pytest.approx(1 / 2 + 1 / 3 + 1 / 5 + 1 / 7)
    assert pz.prime_zeta_partial(3, 1) == 0.0
    with pytest.raises(DomainError):
        pz.prime_zeta_partial(0, 10)


@pytest.mark.parametrize("n, x", [(2, 10), (2, 100), (3, 10), (5, 7.5), (2, 2)])
def test_tail_bound_is_sound(n, x):
    with mpmath.workdps(30):
        full = float(mpmath.primezeta(n))
    assert full - pz.prime_zeta_partial(n, x) <= pz.prime_zeta_tail_bound(n, x)
    with pytest.raises(DomainError):
        pz.prime_zeta_tail_bound(1, x)


def test_tail_example():
    true_tail = 0.030728145664648264946
    assert pz.prime_zeta_tail_bound(2, 10) >= true_tail


def test_zeta_series_partial():
    z = pz.zeta_series_partial(3)
    assert z.contains(0.26527895533477635806)
    assert z.radius < 1e-12
    with pytest.raises(DomainError):
        pz.zeta_series_partial(1)


def test_closed_form_agrees_with_series():
    for x in (10, 1000, 10**5):
        z = pz.zeta_series_partial(x)
        assert z.contains(pz.per_prime_closed_form(x), slack=1e-13)


def test_mertens_b_route1():
    r = pz.mertens_b_via_zeta(10**6)
    assert r.contains(MERTENS_B)
    assert r.radius <= 1.1e-6
    with pytest.raises(PrecisionError):
        pz.mertens_b_via_zeta(1000)


def test_mertens_b_intervals_nest():
    r5, r6 = pz.mertens_b_via_zeta(10**5), pz.mertens_b_via_zeta(10**6)
    assert r6.radius < r5.radius
    assert r5.overlaps(r6)


def test_B_values():
    b10 = pz.B(10, 10**7)
    assert b10.contains(-0.016002408434788515873)
    assert b10.value < 0
    assert pz.B(2, 10**7).contains(-0.12257127149394476743)
    with pytest.raises(RangeError):
        pz.B(100, 50)
    with pytest.raises(DomainError):
        pz.B(1, 50)


def test_B_monotone():
    vals = [pz.B(x, 10**6).value for x in (2, 10, 100, 1000, 10**4)]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    assert all(v < 0 for v in vals)


@pytest.mark.parametrize("x", [10, 100, 1000, 10**4])
def test_bridge(x):
    res, rad = pz.bridge_residual(x, 10**7)
    assert abs(res) <= rad
    assert abs(res) <= 1e-8


def test_prime_power_interpretations():
    b = pz.prime_power_log_sum(10**5, 40, "B")
    a = pz.prime_power_log_sum(10**5, 40, "A")
    assert abs(b - 0.753365132271) <= 1e-9
    assert a < b
    with pytest.raises(DomainError):
        pz.prime_power_log_sum(100, 10, "C")


def test_prime_power_limit_is_upper_envelope():
    lim = pz.prime_power_log_limit(10**5)
    assert pz.prime_power_log_sum(10**5, 40, "B") < lim < math.pi**2 / 6
    assert lim - GAMMA_MINUS_B > 0
