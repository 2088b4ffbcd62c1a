"""Nicolas's inequality for primorials, evaluated in the log domain.

The inequality e^gamma log log N_x < N_x / phi(N_x) is rewritten as

    margin(x) = sum_{n>=1} P_x(n)/n - log log theta(x) - gamma > 0,

using log(N_x/phi_x) = -sum_{p<=x} log(1 - 1/p) = sum_{n>=1} P_x(n)/n.
N_x and phi_x are never formed, except by the big-integer oracle.

x = 2 is outside the log-domain form (log log N_2 < 0); there the
inequality holds trivially and is checked with :func:`nicolas_holds_exact`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .bounded import BoundedReal
from .compensated import compensated_prefix, compensated_total
from .constants import (EULER_GAMMA, EULER_GAMMA_STR, EXP_GAMMA, MERTENS_B)
from .errors import DomainError
from . import error_term, prime_zeta, summatory


def default_tail_limit(x) -> int:
    return max(10**7, 10 * math.floor(x))


def log_totient_ratio(x, route: str = "product") -> float:
    """log(N_x / phi_x) by -sum log(1-1/p) ("product") or sum P_x(n)/n ("zeta")."""
    if route == "product":
        ps = summatory.primes_to(x).astype(np.float64)
        return -compensated_total(np.log1p(-1.0 / ps))
    if route == "zeta":
        return summatory.prime_reciprocal_sum(x) + prime_zeta.zeta_series_partial(x).value
    raise DomainError(f"unknown route {route!r}")


def nicolas_margin(x, route: str = "product") -> float:
    """c(x) - gamma; positive iff the Nicolas inequality holds at x."""
    if x < 2:
        raise DomainError("Nicolas margin needs x >= 2")
    th = summatory.theta(x)
    if th <= 1.0:
        raise DomainError(f"theta({x}) = {th:.6g} <= 1: log log N_x undefined")
    return log_totient_ratio(x, route) - math.log(math.log(th)) - EULER_GAMMA


def _primorial_and_totient(x) -> tuple[int, int]:
    n, phi = 1, 1
    for p in summatory.primes_to(x).tolist():
        n *= p
        phi *= p - 1
    return n, phi


def nicolas_margin_exact(x, dps: int = 50) -> float:
    """Big-integer oracle: log(N_x / (phi(N_x) log log N_x)) - gamma in mpmath."""
    import mpmath

    if x < 3:
        raise DomainError("exact margin needs x >= 3")
    n, phi = _primorial_and_totient(x)
    with mpmath.workdps(dps):
        ratio = mpmath.mpf(n) / mpmath.mpf(phi)
        val = mpmath.log(ratio / mpmath.log(mpmath.log(mpmath.mpf(n)))) - mpmath.mpf(EULER_GAMMA_STR)
        return float(val)


def nicolas_holds_exact(x, dps: int = 50) -> bool:
    """e^gamma log log N_x < N_x / phi(N_x), with exact N_x and phi(N_x)."""
    import mpmath

    n, phi = _primorial_and_totient(x)
    with mpmath.workdps(dps):
        lhs = mpmath.exp(mpmath.mpf(EULER_GAMMA_STR)) * mpmath.log(mpmath.log(mpmath.mpf(n)))
        return bool(lhs < mpmath.mpf(n) / mpmath.mpf(phi))


class CorollaryBranch(str, enum.Enum):
    I_APPLIES_FAILS = "I_applies_fails"
    II_APPLIES_HOLDS = "II_applies_holds"
    NO_CONCLUSION = "no_conclusion"


def corollary_branch(theta_value: float, x: float, E_value: float) -> CorollaryBranch:
    """(I) theta > x and E < 0 predicts failure; (II) theta <= x and E >= 0 predicts success."""
    if theta_value > x and E_value < 0:
        return CorollaryBranch.I_APPLIES_FAILS
    if theta_value <= x and E_value >= 0:
        return CorollaryBranch.II_APPLIES_HOLDS
    return CorollaryBranch.NO_CONCLUSION


def corollary_contradicts(branch: CorollaryBranch, holds: bool) -> bool:
    if branch is CorollaryBranch.I_APPLIES_FAILS:
        return holds
    if branch is CorollaryBranch.II_APPLIES_HOLDS:
        return not holds
    return False


def corollary_check(x, *, theta_value: float | None = None,
                    E_value: float | None = None) -> CorollaryBranch:
    """Corollary prediction at x. theta_value / E_value override the computed ones."""
    if x < 3:
        raise DomainError("corollary check needs x >= 3")
    th = summatory.theta(x) if theta_value is None else theta_value
    e = error_term.E(x) if E_value is None else E_value
    return corollary_branch(th, x, e)


@dataclass(frozen=True)
class NicolasVerdict:
    x: int
    margin: float
    holds: bool
    c_x_log: float
    epsilon_x: float
    theta_side: int
    E_value: float
    B_interval: BoundedReal
    corollary: CorollaryBranch

    @property
    def C_x(self) -> float:
        return math.exp(self.c_x_log)


def _sign(v: float) -> int:
    return (v > 0) - (v < 0)


def nicolas_holds(x, prime_limit: int | None = None) -> NicolasVerdict:
    if x < 3:
        raise DomainError("nicolas_holds needs x >= 3")
    L = default_tail_limit(x) if prime_limit is None else prime_limit
    margin = nicolas_margin(x)
    c_log = log_totient_ratio(x) - math.log(math.log(x))
    th = summatory.theta(x)
    e = error_term.E(x)
    return NicolasVerdict(
        x=x, margin=margin, holds=margin > 0, c_x_log=c_log,
        epsilon_x=math.exp(c_log) - EXP_GAMMA, theta_side=_sign(th - x),
        E_value=e, B_interval=prime_zeta.B(x, L),
        corollary=corollary_branch(th, x, e),
    )


@dataclass(frozen=True)
class CxDecomposition:
    x: float
    lhs: float
    rhs: BoundedReal
    epsilon_x: float

    @property
    def consistent(self) -> bool:
        return self.rhs.contains(self.lhs)


def c_x_decomposition(x, prime_limit) -> CxDecomposition:
    """log C_x two ways: directly, and as gamma + E(x) + B(x).

    C_x := N_x / (phi_x log x); the log form of C_x = e^gamma exp(E + B).
    """
    if x < 3:
        raise DomainError("c_x_decomposition needs x >= 3")
    lhs = log_totient_ratio(x) - math.log(math.log(x))
    rhs = error_term.mertens_error(x) + prime_zeta.B(x, prime_limit) + EULER_GAMMA
    return CxDecomposition(x, lhs, rhs, math.exp(lhs) - EXP_GAMMA)


@dataclass(frozen=True)
class Theorem2Report:
    x: float
    E_value: float
    minus_B: float
    theta_le_x: bool
    nicolas_holds: bool
    prediction: str  # "holds", "fails" or "no_prediction"
    implication_satisfied: bool


def theorem2_prediction(theta_le_x: bool, E_value: float, minus_B: float) -> str:
    # (II) contrapositive: theta <= x and E > -B  =>  inequality holds.
    # (I)  contrapositive: theta > x  and E < -B  =>  inequality fails.
    if theta_le_x and E_value > minus_B:
        return "holds"
    if not theta_le_x and E_value < minus_B:
        return "fails"
    return "no_prediction"


def theorem2_check(x, prime_limit: int | None = None) -> Theorem2Report:
    if x < 3:
        raise DomainError("theorem2_check needs x >= 3")
    L = default_tail_limit(x) if prime_limit is None else prime_limit
    e = error_term.E(x)
    mb = -prime_zeta.B(x, L).value
    le = summatory.theta(x) <= x
    holds = nicolas_margin(x) > 0
    pred = theorem2_prediction(le, e, mb)
    ok = pred == "no_prediction" or (pred == "holds") == holds
    return Theorem2Report(x, e, mb, le, holds, pred, ok)


def remark_equivalence(x, prime_limit: int | None = None) -> dict:
    """Compare E(x) with -B(x), and S(x) with b + log log x - B(x), independently."""
    L = default_tail_limit(x) if prime_limit is None else prime_limit
    s = summatory.prime_reciprocal_sum(x)
    b_x = prime_zeta.B(x, L).value
    e = error_term.E(x)
    left = _sign(e - (-b_x))
    right = _sign(s - (MERTENS_B + math.log(math.log(x)) - b_x))
    return {"x": x, "E_vs_minus_B": left, "S_vs_rhs": right, "agree": left == right}


@dataclass
class Theorem1Report:
    x_min: float
    x_max: float
    rows: int
    inf_E_log_x: float
    inf_at: float
    sup_E_log_x: float
    sup_at: float
    theta_alpha_half_holds: bool
    alpha_half_violations: list


def theorem1_hypothesis_scan(x_min, x_max) -> Theorem1Report:
    """Empirical check of the two growth hypotheses on [x_min, x_max].

    Evaluated at x_min and at every prime in (x_min, x_max]. Reports the
    extremes of E(x) log x and checks theta(x) < x (1 + 1/(2 log x)).
    """
    if x_min < 2 or x_max < x_min:
        raise DomainError("bad range")
    ps = summatory.primes_to(x_max)
    pf = ps.astype(np.float64)
    theta_pre, _ = compensated_prefix(np.log(pf))
    s_pre, _ = compensated_prefix(1.0 / pf)
    lo = np.searchsorted(ps, x_min, side="right")
    pts = np.concatenate(([float(x_min)], pf[lo:]))
    idx = np.searchsorted(ps, pts, side="right")
    th = theta_pre[idx]
    lx = np.log(pts)
    elog = (s_pre[idx] - np.log(lx) - MERTENS_B) * lx
    bad = pts[~(th < pts * (1.0 + 0.5 / lx))]
    i_min, i_max = int(np.argmin(elog)), int(np.argmax(elog))
    return Theorem1Report(
        x_min, x_max, len(pts), float(elog[i_min]), float(pts[i_min]),
        float(elog[i_max]), float(pts[i_max]), len(bad) == 0, bad[:20].tolist(),
    )
