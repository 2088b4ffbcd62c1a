"""The Mertens error term E(x) = sum_{p<=x} 1/p - log log x - b.

E(x) is computed from its definition. The integral representation

    E(x) = R(x)/log x - int_x^inf R(t) / (t log^2 t) dt

is verified separately: R(t) is a step function minus log t, so on each
prime gap (p_k, p_{k+1}) with A_k = sum_{p<=p_k} log p / p the integrand
has the exact antiderivative -A_k/log t - log log t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounded import BoundedReal
from .compensated import CompensatedSum, compensated_prefix, compensated_total
from .constants import EPS, LOG_LOG_2, MERTENS_B, R_WINDOW_LOWER
from .errors import DomainError, RangeError
from .summatory import primes_to, prime_reciprocal_sum
from . import summatory

# sup |R| on [X, inf) used for the integral tail. Empirical: it comes from
# the R window, which is only observed, not proven, to persist.
R_SUP = -R_WINDOW_LOWER


def E(x) -> float:
    """Mertens error term by definition."""
    return mertens_error(x).value


def mertens_error(x) -> BoundedReal:
    """E(x) with a first-order rounding radius 4 eps (S + |log log x| + b)."""
    if x < 2:
        raise DomainError("E(x) needs x >= 2")
    s = prime_reciprocal_sum(x)
    ll = math.log(math.log(x))
    return BoundedReal(s - ll - MERTENS_B, 4.0 * EPS * (s + abs(ll) + MERTENS_B))


@dataclass(frozen=True)
class StepIntegrand:
    """R(t) on [2, X] as breakpoints at primes plus partial sums A_k."""

    breakpoints: np.ndarray
    partials: np.ndarray

    @classmethod
    def build(cls, X) -> "StepIntegrand":
        ps = primes_to(X)
        pf = ps.astype(np.float64)
        pre, _ = compensated_prefix(np.log(pf) / pf)
        return cls(ps, pre[1:])

    def R(self, t: float) -> float:
        k = np.searchsorted(self.breakpoints, t, side="right")
        if k == 0:
            raise DomainError("R(t) needs t >= 2")
        return float(self.partials[k - 1]) - math.log(t)


def _gap_integrals(A: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    # int_lo^hi (A - log t) / (t log^2 t) dt
    #   = A (1/log lo - 1/log hi) - (log log hi - log log lo),
    # with the differences formed from log(hi/lo) to avoid cancellation.
    llo = np.log(lo)
    lhi = np.log(hi)
    dlog = np.log1p((hi - lo) / lo)
    return A * dlog / (llo * lhi) - np.log1p(dlog / llo)


_integrand_cache: dict[int, StepIntegrand] = {}


def _integrand(limit: int) -> StepIntegrand:
    for lim, si in _integrand_cache.items():
        if lim >= limit:
            return si
    si = StepIntegrand.build(limit)
    _integrand_cache.clear()
    _integrand_cache[limit] = si
    return si


def integral_R(a, b_) -> float:
    """int_a^b_ R(t) / (t log^2 t) dt, summed exactly gap by gap."""
    if a < 2 or b_ < a:
        raise RangeError(f"bad integration range [{a}, {b_}]")
    if a == b_:
        return 0.0
    from . import primes as _p
    if b_ > _p.hard_cap():
        raise RangeError(f"upper bound {b_} beyond sieve limit")
    si = _integrand(math.floor(b_))
    ps, A = si.breakpoints, si.partials
    i0 = np.searchsorted(ps, a, side="right")  # first prime > a
    i1 = np.searchsorted(ps, b_, side="left")   # first prime >= b_
    inner = ps[i0:i1].astype(np.float64)
    edges = np.concatenate(([float(a)], inner, [float(b_)]))
    # A on [edge_j, edge_{j+1}) is the partial through the last prime <= edge_j.
    acoef = np.concatenate(([A[i0 - 1]], A[i0:i1]))
    parts = _gap_integrals(acoef, edges[:-1], edges[1:])
    return compensated_total(parts)


def integral_R_prefix(points: np.ndarray, X) -> np.ndarray:
    """int_2^x R / (t log^2 t) for each x in ``points`` (sorted, within [2, X])."""
    si = _integrand(math.floor(X))
    ps, A = si.breakpoints, si.partials
    pf = ps.astype(np.float64)
    gaps = _gap_integrals(A[:-1], pf[:-1], pf[1:])
    cum, _ = compensated_prefix(gaps)  # cum[k] = int_2^{p_k}, p_0 = 2
    points = np.asarray(points, dtype=np.float64)
    k = np.searchsorted(ps, points, side="right") - 1
    partial = _gap_integrals(A[k], pf[k], points)
    return cum[k] + partial


def integral_tail_radius(X) -> float:
    return R_SUP / math.log(X)


def bigo_via_integral(x, X) -> BoundedReal:
    """R(x)/log x - int_x^X R/(t log^2 t), radius R_SUP / log X.

    The radius bounds int_X^inf |R| / (t log^2 t) assuming |R| < 1.645
    on [X, inf); that is an observed window, not a theorem.
    """
    if not x < X:
        raise DomainError("bigo_via_integral needs x < X")
    if x < 2:
        raise DomainError("bigo_via_integral needs x >= 2")
    value = summatory.R(x) / math.log(x) - integral_R(x, X)
    return BoundedReal(value, integral_tail_radius(X))


def b_via_integral(X) -> BoundedReal:
    """b = int_2^X R/(t log^2 t) + 1 - log log 2, radius R_SUP / log X."""
    if X < 10**4:
        raise DomainError("b_via_integral needs X >= 1e4")
    value = integral_R(2, X) + 1.0 - LOG_LOG_2
    return BoundedReal(value, integral_tail_radius(X))


def stieltjes_decomposition_check(x) -> dict:
    """Evaluate both sides of the integration-by-parts chain and their residual.

    left  = int_2^x R/(t log^2 t)
    right = -1 - R(x)/log x + S(x) + J(x), where the R'(t)/log t integral
    is read as the Stieltjes sum J(x) = sum_{2<p<=x} 1/p - (log log x - log log 2).

    The residual is reported, not asserted; expanding the chain literally
    counts sum 1/p twice.
    """
    if x < 3:
        raise DomainError("stieltjes check needs x >= 3")
    left = integral_R(2, x)
    s = prime_reciprocal_sum(x)
    rx = summatory.R(x)
    lx = math.log(x)
    acc = CompensatedSum()
    for t in (-1.0, -rx / lx, s, s - 0.5, -math.log(lx), LOG_LOG_2):
        acc.add(t)
    right = acc.value
    residual = left - right
    return {"x": x, "left": left, "right": right, "residual": residual,
            "flagged": abs(residual) > 1e-6}


def log_over_u_integral(U: float = 1e8) -> BoundedReal:
    """int_1^inf log u / (u (u-1)) du, truncated at U with a certified tail.

    Integration by scipy's adaptive quad over dyadic pieces; the tail
    int_U^inf <= U/(U-1) * (log U + 1)/U.
    """
    from scipy.integrate import quad

    def f(u):
        if u == 1.0:
            return 1.0
        return math.log(u) / (u * (u - 1.0))

    acc = CompensatedSum()
    err = 0.0
    lo = 1.0
    while lo < U:
        hi = min(lo * 2.0, U)
        val, e = quad(f, lo, hi, epsabs=1e-14, epsrel=1e-13, limit=200)
        acc.add(val)
        err += e
        lo = hi
    tail = U / (U - 1.0) * (math.log(U) + 1.0) / U
    # The tail is positive, so centre the interval on [partial, partial + tail].
    return BoundedReal(acc.value + tail / 2.0, tail / 2.0 + err + 64 * EPS)
