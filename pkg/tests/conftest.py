import math

import mpmath
import numpy as np
import pytest

from nicolas_lab.constants import EULER_GAMMA_STR, MERTENS_B_STR


def trial_division_flags(limit: int) -> np.ndarray:
    """Boolean primality flags for 0..limit by vectorised trial division."""
    n = np.arange(limit + 1, dtype=np.int64)
    flags = n >= 2
    for d in range(2, math.isqrt(limit) + 1):
        flags &= ~((n % d == 0) & (n > d))
    return flags


def is_prime_td(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@pytest.fixture(scope="session")
def td_primes_1e5():
    return np.flatnonzero(trial_division_flags(10**5))


@pytest.fixture(scope="session")
def mp_constants():
    with mpmath.workdps(40):
        return mpmath.mpf(EULER_GAMMA_STR), mpmath.mpf(MERTENS_B_STR)
