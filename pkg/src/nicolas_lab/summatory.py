"""Chebyshev functions and the other prime sums, with compensated accumulation.

Every "p <= x" bound is inclusive and accepts real x (effective bound
floor(x)). Fractional parts {x/d} are formed as (x mod d)/d from exact
integers.

Note on the Mangoldt decomposition: for integer x the exact identity is

    sum_{d<=x} Lambda(d)/d - log x = -1 + O1(x)/x + F(x),

with F(x) = sum_{d<=x} {x/d} Lambda(d) / x. The "-1" is needed to make the
bracketed remainder land near -0.415 = 0.585 - 1; see :func:`o2_decomposition`.
"""

from __future__ import annotations

import math

import numpy as np

from . import primes as _primes
from .compensated import CompensatedSum, compensated_total
from .errors import DomainError, RangeError


def _floor(x) -> int:
    if isinstance(x, (int, np.integer)):
        return int(x)
    return math.floor(x)


def primes_to(x) -> np.ndarray:
    """Primes <= floor(x); RangeError above the sieve cap."""
    n = _floor(x)
    if n > _primes.hard_cap():
        raise RangeError(f"x = {x} beyond sieve limit {_primes.hard_cap()}")
    return _primes.prime_table(n)


def iroot(n: int, k: int) -> int:
    """Largest integer r with r**k <= n."""
    if n < 1:
        return 0
    r = int(round(n ** (1.0 / k)))
    while r > 0 and r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def higher_prime_powers(x) -> tuple[np.ndarray, np.ndarray]:
    """All p**k <= x with k >= 2, sorted, and the matching log p."""
    n = _floor(x)
    vals, logs = [], []
    k = 2
    while 2**k <= n:
        ps = primes_to(iroot(n, k))
        vals.append(ps**k)
        logs.append(np.log(ps.astype(np.float64)))
        k += 1
    if not vals:
        return np.zeros(0, dtype=np.int64), np.zeros(0)
    v = np.concatenate(vals)
    lg = np.concatenate(logs)
    order = np.argsort(v, kind="stable")
    return v[order], lg[order]


def prime_powers(x) -> tuple[np.ndarray, np.ndarray]:
    """Every prime power d <= x (k >= 1), sorted, with Lambda(d) = log p."""
    ps = primes_to(x)
    hv, hl = higher_prime_powers(x)
    v = np.concatenate([ps, hv])
    lg = np.concatenate([np.log(ps.astype(np.float64)), hl])
    order = np.argsort(v, kind="stable")
    return v[order], lg[order]


def mangoldt(n: int) -> float:
    if n < 1:
        raise DomainError(f"Lambda(n) needs n >= 1, got {n}")
    if n == 1:
        return 0.0
    p = None
    if n % 2 == 0:
        p = 2
    else:
        q = 3
        while q * q <= n:
            if n % q == 0:
                p = q
                break
            q += 2
        if p is None:
            return math.log(n)
    m = n
    while m % p == 0:
        m //= p
    return math.log(p) if m == 1 else 0.0


def theta(x) -> float:
    """theta(x) = sum_{p<=x} log p (= log of the primorial N_x)."""
    ps = primes_to(x)
    return compensated_total(np.log(ps.astype(np.float64)))


def psi(x) -> float:
    """psi(x) = sum_{p^k<=x} log p, built as theta(x) plus the higher powers."""
    ps = primes_to(x)
    acc = CompensatedSum().extend(np.log(ps.astype(np.float64)))
    _, hl = higher_prime_powers(x)
    acc.extend(hl)
    return acc.value


def prime_reciprocal_sum(x) -> float:
    """S(x) = sum_{p<=x} 1/p."""
    ps = primes_to(x).astype(np.float64)
    return compensated_total(1.0 / ps)


def R(x) -> float:
    """R(x) = sum_{p<=x} log p / p - log x."""
    if x < 2:
        raise DomainError("R(x) needs x >= 2")
    ps = primes_to(x).astype(np.float64)
    acc = CompensatedSum().extend(np.log(ps) / ps)
    acc.add(-math.log(x))
    return acc.value


def sum_log_n(x: int) -> float:
    """sum_{n<=x} log n = log(floor(x)!)."""
    n = _floor(x)
    if n < 1:
        raise DomainError("sum_log_n needs x >= 1")
    return math.lgamma(n + 1)


def O1(x: int) -> float:
    """Remainder in sum log n = x log x - x + O1(x)."""
    n = _floor(x)
    if n < 1:
        raise DomainError("O1 needs x >= 1")
    # lgamma(n+1) - (n log n - n) via Stirling's series when n is large to
    # avoid cancelling two ~n log n numbers.
    if n >= 64:
        inv = 1.0 / n
        inv2 = inv * inv
        series = inv / 12.0 - inv * inv2 / 360.0 + inv * inv2 * inv2 / 1260.0
        return 0.5 * math.log(2.0 * math.pi * n) + series
    return math.lgamma(n + 1) - (n * math.log(n) - n)


def mangoldt_over_d_sum(x: int) -> float:
    """sum_{d<=x} Lambda(d)/d."""
    if x < 2:
        raise DomainError("mangoldt_over_d_sum needs x >= 2")
    d, lg = prime_powers(x)
    return compensated_total(lg / d.astype(np.float64))


def chebyshev_floor_sum(x: int) -> float:
    """sum_{d<=x} Lambda(d) floor(x/d); equals sum_{n<=x} log n exactly."""
    n = _floor(x)
    d, lg = prime_powers(n)
    return compensated_total(lg * (n // d).astype(np.float64))


def frac_mangoldt_numerator(x: int) -> float:
    n = _floor(x)
    d, lg = prime_powers(n)
    rem = (n % d).astype(np.float64)
    return compensated_total(rem / d.astype(np.float64) * lg)


def frac_mangoldt_ratio(x: int) -> float:
    """F(x) = sum_{d<=x} {x/d} Lambda(d) / x for integer x >= 2."""
    if int(x) != x or x < 2:
        raise DomainError(f"frac_mangoldt_ratio needs integer x >= 2, got {x}")
    return frac_mangoldt_numerator(int(x)) / int(x)


def o2_decomposition(x: int) -> dict:
    """Both sides of the Mangoldt decomposition at integer x.

    ``lhs`` is sum Lambda(d)/d - log x, ``rhs`` is -1 + O1(x)/x + F(x).
    The displayed form without the -1 term is reported as ``rhs_without_minus_one``.
    """
    n = int(x)
    lhs = mangoldt_over_d_sum(n) - math.log(n)
    o1x = O1(n) / n
    f = frac_mangoldt_ratio(n)
    return {"x": n, "lhs": lhs, "rhs": -1.0 + o1x + f, "O1_over_x": o1x, "F": f,
            "rhs_without_minus_one": o1x + f}
