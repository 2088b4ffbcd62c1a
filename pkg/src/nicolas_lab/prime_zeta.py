"""Prime-zeta partial sums, certified tails, and the constants gamma and b.

For each prime the full series sum_{n>=2} p^-n / n equals -log(1-1/p) - 1/p;
that closed form is used whenever convergence in n is wanted. Truncated
double sums are kept for reproducing truncated published figures.
"""

from __future__ import annotations

import math

import numpy as np

from .bounded import BoundedReal
from .compensated import CompensatedSum, compensated_total
from .constants import EULER_GAMMA, GAMMA_MINUS_B, MERTENS_B
from .errors import DomainError, PrecisionError, RangeError
from .summatory import iroot, primes_to


def log1m_plus(u: np.ndarray) -> np.ndarray:
    """log(1 - u) + u, accurate for small u (series below u = 1/16)."""
    u = np.asarray(u, dtype=np.float64)
    out = np.log1p(-u) + u
    small = u < 1.0 / 16.0
    if small.any():
        us = u[small]
        acc = np.full_like(us, 1.0 / 26.0)
        for n in range(25, 1, -1):
            acc = 1.0 / n + us * acc
        out[small] = -(us * us) * acc
    return out


def zeta_series_terms(u: np.ndarray, n_max: int) -> np.ndarray:
    """sum_{n=2}^{n_max} u^n / n elementwise, by Horner's rule."""
    u = np.asarray(u, dtype=np.float64)
    acc = np.full_like(u, 1.0 / n_max)
    for n in range(n_max - 1, 1, -1):
        acc = 1.0 / n + u * acc
    return u * u * acc


def default_n_max(count: int) -> int:
    """Smallest n with count * 2^-n / n < 1e-13."""
    n = 2
    while count * 2.0**-n / n >= 1e-13:
        n += 1
    return n


def prime_zeta_partial(n: int, x) -> float:
    """P_x(n) = sum_{p<=x} p^-n."""
    if n < 1:
        raise DomainError(f"prime zeta order must be >= 1, got {n}")
    if x < 2:
        return 0.0
    ps = primes_to(x).astype(np.float64)
    # Smallest terms first.
    return compensated_total(ps[::-1] ** -float(n))


def prime_zeta_tail_bound(n: int, x) -> float:
    """Upper bound for P(n) - P_x(n) from sum_{m > x} m^-n <= floor(x)^(1-n)/(n-1)."""
    if n < 2:
        raise DomainError("tail of the prime zeta series diverges for n < 2")
    if x < 2:
        raise DomainError("tail bound needs x >= 2")
    m = math.floor(x)
    return m ** (1.0 - n) / (n - 1)


def zeta_series_partial(x, n_max: int | None = None) -> BoundedReal:
    """sum_{n=2}^{n_max} P_x(n)/n with a certified bound on the n > n_max part.

    Radius: pi(x) * 2^-n_max / n_max, since every P_x(n) <= pi(x) 2^-n.
    """
    if x < 2:
        raise DomainError("zeta series needs x >= 2")
    ps = primes_to(x).astype(np.float64)
    count = len(ps)
    if n_max is None:
        n_max = default_n_max(count)
    if n_max < 2:
        raise DomainError("n_max must be >= 2")
    rev = ps[::-1]
    acc = CompensatedSum()
    for n in range(2, n_max + 1):
        pn = compensated_total(rev ** -float(n))
        if pn == 0.0:
            break
        acc.add(pn / n)
    radius = count * 2.0**-n_max / n_max
    return BoundedReal(acc.value, radius)


def per_prime_closed_form(x) -> float:
    """sum_{p<=x} [-log(1-1/p) - 1/p], the n-summed series in closed form."""
    ps = primes_to(x).astype(np.float64)
    return -compensated_total(log1m_plus(1.0 / ps))


def mertens_b_via_zeta(prime_limit) -> BoundedReal:
    """b = gamma - sum_{n>=2} P(n)/n, truncated at primes <= prime_limit.

    Radius = series radius + 1/(2 prime_limit); the second term bounds
    sum_{p>L} 1/(2p(p-1)) by telescoping over all integers m > L.
    """
    if prime_limit < 10**4:
        raise PrecisionError("prime_limit below 1e4 gives a useless radius")
    s = zeta_series_partial(prime_limit)
    tail = 1.0 / (2.0 * math.floor(prime_limit))
    return BoundedReal(EULER_GAMMA - s.value, s.radius + tail)


def B(x, prime_limit) -> BoundedReal:
    """B(x) = sum_{p>x} [log(1-1/p) + 1/p], truncated at prime_limit.

    Radius 1/(2 prime_limit) covers the discarded primes. Every term is
    negative, so the point value is < 0 whenever a prime lies in (x, L].
    """
    if x < 2:
        raise DomainError("B(x) needs x >= 2")
    if x > prime_limit:
        raise RangeError(f"x = {x} exceeds prime_limit {prime_limit}")
    ps = primes_to(prime_limit)
    lo = np.searchsorted(ps, math.floor(x), side="right")
    tail = ps[lo:].astype(np.float64)[::-1]
    value = compensated_total(log1m_plus(1.0 / tail))
    return BoundedReal(value, 1.0 / (2.0 * math.floor(prime_limit)))


def bridge_residual(x, prime_limit) -> tuple[float, float]:
    """zeta_series_partial(x) - (gamma - b) - B(x) and the combined radius."""
    z = zeta_series_partial(x)
    b = B(x, prime_limit)
    return z.value - GAMMA_MINUS_B - b.value, z.radius + b.radius


def prime_power_log_sum(x, n_max: int, interpretation: str = "A") -> float:
    """sum_{n=2}^{n_max} sum_p log p / p^n over a truncated prime range.

    interpretation "A": inner range p <= x^(1/n).
    interpretation "B": inner range j <= floor(pi(x)^(1/n)), indexing the
    prime list p_1 = 2, p_2 = 3, ...
    """
    if x < 4 and interpretation == "A":
        raise DomainError("prime_power_log_sum needs x >= 4")
    if n_max < 2:
        raise DomainError("n_max must be >= 2")
    xi = math.floor(x)
    ps_all = primes_to(xi)
    acc = CompensatedSum()
    for n in range(2, n_max + 1):
        if interpretation == "A":
            ps = ps_all[: np.searchsorted(ps_all, iroot(xi, n), side="right")]
        elif interpretation == "B":
            ps = ps_all[: iroot(len(ps_all), n)]
        else:
            raise DomainError(f"unknown interpretation {interpretation!r}")
        if len(ps) == 0:
            continue
        pf = ps.astype(np.float64)[::-1]
        acc.extend(np.log(pf) * pf ** -float(n))
    return acc.value


def prime_power_log_limit(x) -> float:
    """sum_{p<=x} log p / (p (p-1)), the n -> infinity closed form."""
    pf = primes_to(x).astype(np.float64)[::-1]
    return compensated_total(np.log(pf) / (pf * (pf - 1.0)))


__all__ = [
    "B", "EULER_GAMMA", "MERTENS_B", "bridge_residual", "default_n_max", "log1m_plus",
    "mertens_b_via_zeta", "per_prime_closed_form", "prime_power_log_limit",
    "prime_power_log_sum", "prime_zeta_partial", "prime_zeta_tail_bound",
    "zeta_series_partial", "zeta_series_terms",
]
