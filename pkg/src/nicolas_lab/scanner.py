"""Streaming evaluation of every checkpoint quantity over a range of x.

One forward pass over the primes builds compensated prefix sums for each
per-prime term; checkpoints are lookups into those prefixes. Prefix block
boundaries are fixed by prime index, and worker threads only compute
per-prime terms, so any thread count gives bit-identical rows.

A scan may be continued from a :class:`ScanState` (carried accumulators),
which is how range-sharded scans are stitched together.
"""

from __future__ import annotations

import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import primes as _primes
from .bounded import BoundedReal
from .compensated import CompensatedSum, compensated_prefix, compensated_suffix
from .constants import (FRAC_WINDOW_LOWER, FRAC_WINDOW_UPPER, EPS, EULER_GAMMA, EXP_GAMMA,
                        MERTENS_B, R_WINDOW_LOWER, R_WINDOW_UPPER, PSI_LOWER_A, FRAC_UPPER_BOUND,
                        E_LOG_BOUND)
from .errors import DomainError, RangeError
from .nicolas import (CorollaryBranch, corollary_branch, corollary_contradicts,
                      nicolas_holds_exact, theorem2_prediction)
from .prime_zeta import default_n_max, log1m_plus, zeta_series_terms
from .summatory import frac_mangoldt_ratio, higher_prime_powers, primes_to

CSV_COLUMNS = ("x", "theta", "psi", "S", "R", "E_value", "E_radius", "B_value", "B_radius",
               "margin", "nicolas_holds", "theta_minus_x_sign", "corollary_branch")

CHECKPOINT_MODES = ("every_prime", "geometric", "explicit")

# Accumulated per-prime terms carried across shards.
_TERMS = ("log", "inv", "log_over_p", "neg_log1m", "zeta")


@dataclass(frozen=True)
class ScanConfig:
    x_min: int
    x_max: int
    checkpoint_mode: str = "every_prime"
    ratio: float = 10.0
    points: tuple = ()
    output_format: str = "csv"
    prime_limit_for_tails: int | None = None

    def __post_init__(self):
        if not 3 <= self.x_min < self.x_max:
            raise DomainError(f"need 3 <= x_min < x_max, got [{self.x_min}, {self.x_max}]")
        if self.x_max > _primes.hard_cap():
            raise RangeError(f"x_max {self.x_max} beyond sieve limit {_primes.hard_cap()}")
        if self.checkpoint_mode not in CHECKPOINT_MODES:
            raise DomainError(f"unknown checkpoint mode {self.checkpoint_mode!r}")
        if self.checkpoint_mode == "geometric" and not self.ratio > 1:
            raise DomainError("geometric ratio must be > 1")
        if self.output_format not in ("csv", "json"):
            raise DomainError(f"unknown output format {self.output_format!r}")
        if self.checkpoint_mode == "explicit":
            if not self.points:
                raise DomainError("explicit mode needs points")
            if min(self.points) < self.x_min or max(self.points) > self.x_max:
                raise DomainError("explicit points must lie in [x_min, x_max]")

    @property
    def tail_limit(self) -> int:
        if self.prime_limit_for_tails is not None:
            return int(self.prime_limit_for_tails)
        return max(10**7, 10 * self.x_max)

    def checkpoints(self) -> np.ndarray:
        if self.checkpoint_mode == "every_prime":
            ps = primes_to(self.x_max)
            lo = np.searchsorted(ps, self.x_min, side="right")
            return np.concatenate(([self.x_min], ps[lo:])).astype(np.int64)
        if self.checkpoint_mode == "geometric":
            out, k = [], 0
            while True:
                v = int(round(self.x_min * self.ratio**k))
                if v > self.x_max:
                    break
                if not out or v > out[-1]:
                    out.append(v)
                k += 1
            return np.array(out, dtype=np.int64)
        return np.unique(np.array(self.points, dtype=np.int64))


@dataclass
class ScanState:
    """Accumulators after every prime <= x has been consumed."""

    x: int
    sums: dict
    zeta_n_max: int


@dataclass(frozen=True)
class SignEvent:
    quantity: str
    x: int
    old_sign: int
    new_sign: int


@dataclass(frozen=True)
class Verdict:
    name: str
    passed: bool
    value: object = None
    target: object = None
    tolerance: object = None
    detail: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Threshold:
    """Smallest checkpoint x from which a claim holds through the end of the range."""

    name: str
    first_x: int | None
    held_from_start: bool
    evaluated: int
    failures: int


@dataclass(frozen=True)
class Checkpoint:
    x: int
    theta: float
    psi: float
    S: float
    R: float
    E: BoundedReal
    B: BoundedReal
    margin: float
    nicolas_holds: bool
    theta_minus_x_sign: int
    corollary_branch: CorollaryBranch


@dataclass
class ScanReport:
    config: ScanConfig | None
    columns: dict
    sign_events: list
    indeterminate: list
    reproduction_verdicts: list
    empirical_thresholds: dict
    state: ScanState
    extras: dict

    def __len__(self) -> int:
        return len(self.columns["x"])

    def row(self, i: int) -> Checkpoint:
        c = self.columns
        return Checkpoint(
            x=int(c["x"][i]), theta=float(c["theta"][i]), psi=float(c["psi"][i]),
            S=float(c["S"][i]), R=float(c["R"][i]),
            E=BoundedReal(float(c["E_value"][i]), float(c["E_radius"][i])),
            B=BoundedReal(float(c["B_value"][i]), float(c["B_radius"][i])),
            margin=float(c["margin"][i]), nicolas_holds=bool(c["nicolas_holds"][i]),
            theta_minus_x_sign=int(c["theta_minus_x_sign"][i]),
            corollary_branch=CorollaryBranch(c["corollary_branch"][i]),
        )

    def rows(self):
        for i in range(len(self)):
            yield self.row(i)

    def verdict(self, name: str) -> Verdict:
        for v in self.reproduction_verdicts:
            if v.name == name:
                return v
        raise KeyError(name)

    def to_csv(self, precision: int = 17) -> str:
        return format_csv(self.columns, precision)

    def to_json(self, precision: int = 17) -> str:
        return format_json(self.columns, precision)


# --------------------------------------------------------------------------
# Per-prime terms
# --------------------------------------------------------------------------

def _terms_chunk(ps: np.ndarray, zeta_n_max: int) -> dict:
    pf = ps.astype(np.float64)
    lg = np.log(pf)
    inv = 1.0 / pf
    return {
        "log": lg,
        "inv": inv,
        "log_over_p": lg / pf,
        "neg_log1m": -np.log1p(-inv),
        "zeta": zeta_series_terms(inv, zeta_n_max),
        "log1m_plus": log1m_plus(inv),
    }


def _prime_terms(ps: np.ndarray, zeta_n_max: int, threads: int) -> dict:
    if threads <= 1 or len(ps) < 2 * 65536:
        return _terms_chunk(ps, zeta_n_max)
    bounds = np.linspace(0, len(ps), threads + 1).astype(int)
    chunks = [ps[a:b] for a, b in zip(bounds[:-1], bounds[1:])]
    with ThreadPoolExecutor(threads) as pool:
        parts = list(pool.map(lambda c: _terms_chunk(c, zeta_n_max), chunks))
    return {k: np.concatenate([p[k] for p in parts]) for k in parts[0]}


def _tail_B(x_hi: int, L: int, threads: int) -> CompensatedSum:
    # sum over x_hi < p <= L of log(1-1/p) + 1/p, streamed segment by segment.
    acc = CompensatedSum()
    if L <= x_hi:
        return acc
    if L <= 2 * 10**7:
        ps = _primes.prime_table(L, threads=threads)
        tail = ps[np.searchsorted(ps, x_hi, side="right"):]
        acc.extend(log1m_plus(1.0 / tail.astype(np.float64))[::-1])
        return acc
    parts = []
    for seg in _primes.primes_up_to(L, threads=threads).segments():
        if len(seg) == 0 or seg[-1] <= x_hi:
            continue
        seg = seg[seg > x_hi]
        parts.append(CompensatedSum().extend(log1m_plus(1.0 / seg.astype(np.float64))[::-1]))
    for part in reversed(parts):
        acc.merge(part)
    return acc


# --------------------------------------------------------------------------
# Core evaluation
# --------------------------------------------------------------------------

def evaluate(points, tail_limit: int, carry: ScanState | None = None,
             threads: int = 1) -> tuple[dict, ScanState, dict]:
    """All checkpoint columns at integer ``points`` (sorted, >= 2)."""
    points = np.asarray(points, dtype=np.int64)
    if len(points) == 0:
        raise DomainError("no checkpoints")
    x_hi = int(points[-1])
    if tail_limit < x_hi:
        raise RangeError(f"tail limit {tail_limit} below x_max {x_hi}")
    all_ps = _primes.prime_table(x_hi, threads=threads)
    start = 0
    if carry is not None:
        if points[0] <= carry.x:
            raise DomainError("continued scan must start beyond the carried abscissa")
        start = int(np.searchsorted(all_ps, carry.x, side="right"))
        n_max = carry.zeta_n_max
    else:
        n_max = default_n_max(len(all_ps))
    ps = all_ps[start:]
    terms = _prime_terms(ps, n_max, threads)

    prefix, finals = {}, {}
    for name in _TERMS:
        init = carry.sums[name] if carry is not None else None
        prefix[name], finals[name] = compensated_prefix(terms[name], start=init)
    state = ScanState(x_hi, finals, n_max)

    idx = np.searchsorted(ps, points, side="right")
    xf = points.astype(np.float64)
    lx = np.log(xf)
    llx = np.log(lx)
    theta = prefix["log"][idx]
    S = prefix["inv"][idx]
    R = prefix["log_over_p"][idx] - lx
    nl = prefix["neg_log1m"][idx]
    zeta_route = S + prefix["zeta"][idx]

    hv, hl = higher_prime_powers(x_hi)
    hpre, _ = compensated_prefix(hl)
    psi = theta + hpre[np.searchsorted(hv, points, side="right")]

    E_value = S - llx - MERTENS_B
    E_radius = 4.0 * EPS * (S + np.abs(llx) + MERTENS_B)

    # B: suffix over primes in (x, x_hi], plus the streamed part in (x_hi, L].
    tail = _tail_B(x_hi, tail_limit, threads)
    suffix = compensated_suffix(terms["log1m_plus"])
    B_value = suffix[idx] + tail.value
    B_radius = np.full(len(points), 1.0 / (2.0 * tail_limit))

    with np.errstate(invalid="ignore", divide="ignore"):
        lt = np.log(theta)
        defined = lt > 0
        lllt = np.where(defined, np.log(np.where(defined, lt, 1.0)), 0.0)
    margin = nl - lllt - EULER_GAMMA
    margin_zeta = zeta_route - lllt - EULER_GAMMA
    for i in np.flatnonzero(~defined):
        # theta <= 1 only at x = 2, where log log N_x < 0.
        margin[i] = margin_zeta[i] = math.inf if nicolas_holds_exact(int(points[i])) else -math.inf
    holds = margin > 0
    tsign = np.sign(theta - xf).astype(np.int64)
    branch = np.where((theta > xf) & (E_value < 0), CorollaryBranch.I_APPLIES_FAILS.value,
                      np.where((theta <= xf) & (E_value >= 0),
                               CorollaryBranch.II_APPLIES_HOLDS.value,
                               CorollaryBranch.NO_CONCLUSION.value))
    columns = {
        "x": points, "theta": theta, "psi": psi, "S": S, "R": R,
        "E_value": E_value, "E_radius": E_radius, "B_value": B_value, "B_radius": B_radius,
        "margin": margin, "nicolas_holds": holds, "theta_minus_x_sign": tsign,
        "corollary_branch": branch,
    }
    c_x_log = nl - llx
    finite = np.isfinite(margin)
    aux = {
        "margin_zeta": margin_zeta,
        "zeta_series": prefix["zeta"][idx],
        "zeta_radius": len(all_ps) * 2.0**-n_max / n_max,
        "c_x_log": c_x_log,
        "epsilon_x": np.exp(c_x_log) - EXP_GAMMA,
        "route_gap": float(np.max(np.abs(margin - margin_zeta)[finite])) if finite.any() else 0.0,
    }
    return columns, state, aux


# --------------------------------------------------------------------------
# Report assembly
# --------------------------------------------------------------------------

def _sign_events(name: str, xs: np.ndarray, signs, indeterminate=None) -> tuple[list, list]:
    events, flagged = [], []
    prev = None
    for i, s in enumerate(signs):
        if indeterminate is not None and indeterminate[i]:
            flagged.append((name, int(xs[i])))
            continue
        s = int(s)
        if prev is not None and s != prev:
            events.append(SignEvent(name, int(xs[i]), prev, s))
        prev = s
    return events, flagged


def first_holding(name: str, xs: np.ndarray, ok: np.ndarray) -> Threshold:
    ok = np.asarray(ok, dtype=bool)
    if len(ok) == 0:
        return Threshold(name, None, False, 0, 0)
    bad = np.flatnonzero(~ok)
    if len(bad) == 0:
        return Threshold(name, int(xs[0]), True, len(ok), 0)
    last = int(bad[-1])
    first = int(xs[last + 1]) if last + 1 < len(xs) else None
    return Threshold(name, first, False, len(ok), len(bad))


def _psi_at(values: np.ndarray) -> np.ndarray:
    """psi(floor(v)) for an array of reals, using full-range prefixes."""
    hi = int(math.floor(values.max()))
    if hi < 2:
        return np.zeros(len(values))
    ps = primes_to(hi)
    tpre, _ = compensated_prefix(np.log(ps.astype(np.float64)))
    hv, hl = higher_prime_powers(hi)
    hpre, _ = compensated_prefix(hl)
    fl = np.floor(values).astype(np.int64)
    return tpre[np.searchsorted(ps, fl, side="right")] + hpre[np.searchsorted(hv, fl, side="right")]


def _sample(xs: np.ndarray, cap: int) -> np.ndarray:
    if len(xs) <= cap:
        return xs
    pos = np.unique(np.round(np.geomspace(1, len(xs), cap)).astype(int) - 1)
    return xs[pos]


def empirical_thresholds(columns: dict, start: int = 100, f_samples: int = 300) -> dict:
    """First-holding abscissae for every "sufficiently large x" claim."""
    xs = columns["x"]
    sel = xs >= start
    x = xs[sel]
    xf = x.astype(np.float64)
    out = {}
    if len(x) == 0:
        return out
    psi = columns["psi"][sel]
    th = columns["theta"][sel]
    lx = np.log(xf)
    out["psi_lower"] = first_holding("psi_lower", x, PSI_LOWER_A * xf < psi)
    out["psi_upper"] = first_holding("psi_upper", x, psi < 1.5 * PSI_LOWER_A * xf)
    out["psi_half"] = first_holding("psi_half", x, _psi_at(xf / 2.0) < 0.75 * psi)
    out["psi_third"] = first_holding("psi_third", x, _psi_at(xf / 3.0) < 0.5 * psi)
    out["R_window"] = first_holding("R_window", x, (columns["R"][sel] > R_WINDOW_LOWER)
                                     & (columns["R"][sel] < R_WINDOW_UPPER))
    out["E_log_window"] = first_holding("E_log_window", x,
                                        np.abs(columns["E_value"][sel]) * lx < E_LOG_BOUND)
    out["theta_alpha_half"] = first_holding("theta_alpha_half", x, th < xf * (1.0 + 0.5 / lx))
    out["theta_below_x"] = first_holding("theta_below_x", x, th < xf)
    fx = _sample(x, f_samples)
    fvals = np.array([frac_mangoldt_ratio(int(v)) for v in fx])
    out["F_window"] = first_holding("F_window", fx, (fvals > 0) & (fvals < FRAC_UPPER_BOUND))
    out["frac_ratio_window"] = first_holding("frac_ratio_window", fx,
                                         (fvals > FRAC_WINDOW_LOWER) & (fvals < FRAC_WINDOW_UPPER))
    return out


def _assemble(config, columns, state, aux, tail_limit, thresholds=True) -> ScanReport:
    xs = columns["x"]
    e_int_sign = np.where(columns["E_value"] - columns["E_radius"] > 0, 1,
                          np.where(columns["E_value"] + columns["E_radius"] < 0, -1, 0))
    e_indet = e_int_sign == 0
    events, flagged = _sign_events("E", xs, e_int_sign, e_indet)
    ev2, _ = _sign_events("theta_minus_x", xs, columns["theta_minus_x_sign"])
    msign = np.sign(columns["margin"])
    ev3, _ = _sign_events("margin", xs, msign)
    events += ev2 + ev3

    holds = columns["nicolas_holds"]
    branches = [CorollaryBranch(b) for b in columns["corollary_branch"]]
    contradictions = [int(xs[i]) for i, b in enumerate(branches)
                      if corollary_contradicts(b, bool(holds[i]))]
    minus_B = -columns["B_value"]
    theta_le = columns["theta"] <= xs
    t2_bad = []
    for i in range(len(xs)):
        pred = theorem2_prediction(bool(theta_le[i]), float(columns["E_value"][i]), float(minus_B[i]))
        if pred != "no_prediction" and (pred == "holds") != bool(holds[i]):
            t2_bad.append(int(xs[i]))
    lhs = np.sign(columns["E_value"] + columns["B_value"])
    llx = np.log(np.log(xs.astype(np.float64)))
    rhs = np.sign(columns["S"] - (MERTENS_B + llx - columns["B_value"]))
    remark_bad = xs[lhs != rhs].tolist()

    verdicts = [
        Verdict("corollary_consistency", not contradictions, len(contradictions), 0,
                detail={"contradictions": contradictions[:20]}),
        Verdict("theorem2_consistency", not t2_bad, len(t2_bad), 0, detail={"bad": t2_bad[:20]}),
        Verdict("remark_equivalence", not remark_bad, len(remark_bad), 0,
                detail={"disagree": remark_bad[:20]}),
        Verdict("two_route_margin", aux["route_gap"] <= 1e-10, aux["route_gap"], 0.0, 1e-10),
        Verdict("epsilon_x_in_unit_interval",
                bool(np.all(np.abs(aux["epsilon_x"][np.isfinite(columns["margin"])]) < 1)),
                float(np.max(np.abs(aux["epsilon_x"]))), 1.0),
    ]
    extras = {"tail_limit": tail_limit, "aux": aux}
    th = empirical_thresholds(columns) if thresholds else {}
    return ScanReport(config, columns, events, flagged, verdicts, th, state, extras)


def scan(config: ScanConfig, carry: ScanState | None = None, threads: int = 1,
         thresholds: bool = True) -> ScanReport:
    """Evaluate every checkpoint of ``config`` in one forward pass."""
    pts = config.checkpoints()
    if carry is not None:
        # Continuation covers (x_min, x_max]; x_min belongs to the previous shard.
        pts = pts[pts > max(carry.x, config.x_min)]
    columns, state, aux = evaluate(pts, config.tail_limit, carry, threads)
    return _assemble(config, columns, state, aux, config.tail_limit, thresholds)


def checkpoint(x: int, prime_limit: int | None = None) -> Checkpoint:
    """Single checkpoint row at x >= 2."""
    x = int(x)
    if x < 2:
        raise DomainError("checkpoint needs x >= 2")
    L = prime_limit if prime_limit is not None else max(10**7, 10 * x)
    columns, _, _ = evaluate(np.array([x]), L)
    rep = ScanReport(None, columns, [], [], [], {}, None, {})
    return rep.row(0)


# --------------------------------------------------------------------------
# Serialisation
# --------------------------------------------------------------------------

def _fmt(v, precision: int) -> str:
    return f"{float(v):.{precision}g}"


def _format_rows(columns: dict, precision: int, json_mode: bool):
    num = ("theta", "psi", "S", "R", "E_value", "E_radius", "B_value", "B_radius", "margin")
    cols = {k: columns[k].tolist() for k in CSV_COLUMNS}
    for i in range(len(cols["x"])):
        out = {"x": str(int(cols["x"][i]))}
        for k in num:
            v = cols[k][i]
            if json_mode and not math.isfinite(v):
                out[k] = "null"
            else:
                out[k] = _fmt(v, precision)
        out["nicolas_holds"] = "true" if cols["nicolas_holds"][i] else "false"
        out["theta_minus_x_sign"] = str(int(cols["theta_minus_x_sign"][i]))
        b = cols["corollary_branch"][i]
        out["corollary_branch"] = json.dumps(b) if json_mode else b
        yield out


def format_csv(columns: dict, precision: int = 17) -> str:
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for row in _format_rows(columns, precision, json_mode=False):
        buf.write(",".join(row[k] for k in CSV_COLUMNS) + "\n")
    return buf.getvalue()


def format_json(columns: dict, precision: int = 17) -> str:
    # Built by hand so that every float carries exactly `precision` digits.
    parts = []
    for row in _format_rows(columns, precision, json_mode=True):
        parts.append("{" + ", ".join(f'"{k}": {row[k]}' for k in CSV_COLUMNS) + "}")
    return "[\n" + ",\n".join(parts) + "\n]\n"
