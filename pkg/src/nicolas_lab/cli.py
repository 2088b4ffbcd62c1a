"""Command-line front end.

Machine-readable data goes to stdout (or --out); prose and run metadata go
to stderr. Exit codes: 0 success, 1 reproduction/assertion failure,
2 usage or domain error, 3 range/resource error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

from . import __version__, error_term, nicolas, primes, scanner
from .errors import DomainError, NicolasLabError, PrecisionError, RangeError, ResourceError
from .reproduce import reproduce_paper

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--precision", type=int, default=17, help="significant digits (default 17)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--cache", default=None, help="prime cache file (NICOLAS_LAB_CACHE overrides)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="nicolas-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("primes", parents=[common], help="list primes up to a limit")
    p.add_argument("--limit", type=int, required=True)

    p = sub.add_parser("table", parents=[common], help="one checkpoint row")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--tail-limit", type=int, default=None)

    p = sub.add_parser("nicolas", parents=[common], help="Nicolas verdict at x")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--exact", action="store_true", help="also run the big-integer oracle (x <= 50)")
    p.add_argument("--tail-limit", type=int, default=None)

    p = sub.add_parser("error-term", parents=[common], help="E(x) by definition and by the integral")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--tail-limit", type=int, default=10**7)

    p = sub.add_parser("reproduce", parents=[common], help="run the reproduction suite")
    p.add_argument("--prime-limit", type=int, default=10**7)

    p = sub.add_parser("scan", parents=[common], help="scan a range and write the report")
    p.add_argument("--from", dest="x_from", type=int, required=True)
    p.add_argument("--to", dest="x_to", type=int, required=True)
    p.add_argument("--grid", default="every_prime",
                   help="every_prime | geometric:RATIO | list:X1,X2,...")
    p.add_argument("--tail-limit", type=int, default=None)
    p.add_argument("--out", default=None)
    return parser


def _num(v, precision: int, json_mode: bool) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if not math.isfinite(v):
            return "null" if json_mode else repr(v)
        return f"{v:.{precision}g}"
    return json.dumps(str(v)) if json_mode else str(v)


def _emit_record(rec: dict, fmt: str, precision: int) -> str:
    if fmt == "json":
        body = ", ".join(f'"{k}": {_num(v, precision, True)}' for k, v in rec.items())
        return "{" + body + "}\n"
    return ",".join(rec) + "\n" + ",".join(_num(v, precision, False) for v in rec.values()) + "\n"


def _parse_grid(grid: str) -> dict:
    if grid in ("every_prime", "prime"):
        return {"checkpoint_mode": "every_prime"}
    if grid.startswith("geometric:") or grid.startswith("geom:"):
        return {"checkpoint_mode": "geometric", "ratio": float(grid.split(":", 1)[1])}
    if grid.startswith("list:"):
        pts = tuple(int(float(v)) for v in grid.split(":", 1)[1].split(",") if v)
        return {"checkpoint_mode": "explicit", "points": pts}
    raise DomainError(f"unrecognised grid {grid!r}")


def _cmd_primes(a, err) -> tuple[str, int]:
    arr = primes.primes_up_to(a.limit, threads=a.threads).to_array().tolist()
    if a.format == "json":
        return "[" + ", ".join(map(str, arr)) + "]\n", EXIT_OK
    return "".join(f"{p}\n" for p in arr), EXIT_OK


def _cmd_table(a, err) -> tuple[str, int]:
    L = a.tail_limit if a.tail_limit is not None else max(10**7, 10 * a.x)
    cols, _, _ = scanner.evaluate([a.x], L, threads=a.threads)
    fn = scanner.format_json if a.format == "json" else scanner.format_csv
    return fn(cols, a.precision), EXIT_OK


def _cmd_nicolas(a, err) -> tuple[str, int]:
    v = nicolas.nicolas_holds(a.x, a.tail_limit)
    rec = {
        "x": v.x, "margin": v.margin, "holds": v.holds, "c_x_log": v.c_x_log,
        "epsilon_x": v.epsilon_x, "theta_side": v.theta_side, "E_value": v.E_value,
        "B_value": v.B_interval.value, "B_radius": v.B_interval.radius,
        "corollary": v.corollary.value,
    }
    if a.exact:
        if a.x > 50:
            raise DomainError("--exact supports x <= 50")
        rec["exact_margin"] = nicolas.nicolas_margin_exact(a.x)
        rec["exact_agrees"] = abs(rec["exact_margin"] - v.margin) <= 1e-9
    code = EXIT_OK if rec.get("exact_agrees", True) else EXIT_FAIL
    return _emit_record(rec, a.format, a.precision), code


def _cmd_error_term(a, err) -> tuple[str, int]:
    e = error_term.mertens_error(a.x)
    iv = error_term.bigo_via_integral(a.x, a.tail_limit)
    rec = {"x": a.x, "E_value": e.value, "E_radius": e.radius,
           "bigo_value": iv.value, "bigo_radius": iv.radius, "contains": iv.contains(e.value)}
    return _emit_record(rec, a.format, a.precision), EXIT_OK


def _verdict_value(v, precision: int) -> str:
    val = v.value
    if isinstance(val, float):
        return f"{val:.{precision}g}"
    if hasattr(val, "value") and hasattr(val, "radius"):
        return f"{val.value:.{precision}g}+-{val.radius:.{precision}g}"
    return str(val)


def _cmd_reproduce(a, err) -> tuple[str, int]:
    verdicts = reproduce_paper(a.prime_limit)
    failed = [v.name for v in verdicts if not v.passed]
    if a.format == "json":
        items = []
        for v in verdicts:
            items.append("{" + f'"name": {json.dumps(v.name)}, "passed": {_num(v.passed, 0, True)}, '
                         f'"kind": {json.dumps(v.detail.get("kind", "criterion"))}, '
                         f'"value": {json.dumps(_verdict_value(v, a.precision))}' + "}")
        out = "[\n" + ",\n".join(items) + "\n]\n"
    else:
        lines = ["name,passed,kind,value"]
        for v in verdicts:
            val = _verdict_value(v, a.precision).replace(",", ";").replace("\n", " ")
            lines.append(f"{v.name},{'pass' if v.passed else 'FAIL'},{v.detail.get('kind', 'criterion')},{val}")
        out = "\n".join(lines) + "\n"
    for name in failed:
        print(f"FAILED: {name}", file=err)
    return out, EXIT_FAIL if failed else EXIT_OK


def _cmd_scan(a, err) -> tuple[str, int]:
    cfg = scanner.ScanConfig(a.x_from, a.x_to, output_format=a.format,
                             prime_limit_for_tails=a.tail_limit, **_parse_grid(a.grid))
    rep = scanner.scan(cfg, threads=a.threads)
    data = rep.to_json(a.precision) if a.format == "json" else rep.to_csv(a.precision)
    for ev in rep.sign_events:
        print(f"SIGN EVENT: {ev.quantity} at x={ev.x}: {ev.old_sign} -> {ev.new_sign}", file=err)
    for v in rep.reproduction_verdicts:
        if not v.passed:
            print(f"FAILED: {v.name} ({v.value})", file=err)
    code = EXIT_OK if all(v.passed for v in rep.reproduction_verdicts) else EXIT_FAIL
    if a.out:
        with open(a.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
        return "", code
    return data, code


COMMANDS = {
    "primes": _cmd_primes, "table": _cmd_table, "nicolas": _cmd_nicolas,
    "error-term": _cmd_error_term, "reproduce": _cmd_reproduce, "scan": _cmd_scan,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    cache = os.environ.get("NICOLAS_LAB_CACHE") or args.cache
    if cache:
        primes.configure(cache_path=cache)
    t0 = time.perf_counter()
    try:
        out, code = COMMANDS[args.command](args, stderr)
    except DomainError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except (RangeError, ResourceError, PrecisionError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_RESOURCE
    except NicolasLabError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_RESOURCE
    stdout.write(out)
    print(f"# nicolas-lab {__version__} {args.command} exit={code} "
          f"elapsed={time.perf_counter() - t0:.3f}s", file=stderr)
    return code


def main() -> None:
    sys.exit(run())
