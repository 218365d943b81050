"""Command-line front end: counting, constants, family evaluation, asymptotic
estimators, ratio tables, and diagnostics suites with machine-readable output.

Exit codes: 0 success, 2 usage/parameter error, 1 computation error.
Identical invocations (including --seed) produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import List, Optional, Sequence

from . import diagnostics as diag
from . import saddle as sd
from .bigcount import (PartitionKind, count_partitions,
                       count_via_log_recurrence, log_integer)
from .family import TruncationError, char_fn_normalized, mean, variance
from .special import constants

# ratio-table compute budgets (exact-table cost is dominated by k=1)
RATIO_BUDGET = {1: 1 << 16}
RATIO_BUDGET_DEFAULT = 1 << 17


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer: {text!r}")
    return v


def _nonnegative_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0.0:
        raise argparse.ArgumentTypeError(f"must be > 0: {text!r}")
    return v


def _kind(text: str) -> PartitionKind:
    try:
        return PartitionKind.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_linear_grid(spec: str) -> List[float]:
    """'a:b:n' -> n evenly spaced values from a to b inclusive."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must be a:b:n, got {spec!r}")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed grid {spec!r}") from None
    if n < 1 or (n == 1 and a != b) or (n > 1 and b == a):
        raise argparse.ArgumentTypeError(f"grid {spec!r} is empty or degenerate")
    if n == 1:
        return [a]
    step = (b - a) / (n - 1)
    return [a + i * step for i in range(n)]


def parse_geometric_int_grid(spec: str) -> List[int]:
    """'geometric:a:b:points' -> strictly increasing integers from a to b."""
    parts = spec.split(":")
    if len(parts) != 4 or parts[0] != "geometric":
        raise argparse.ArgumentTypeError(
            f"n-grid must be geometric:a:b:points, got {spec!r}")
    try:
        a, b, n = int(parts[1]), int(parts[2]), int(parts[3])
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed grid {spec!r}") from None
    if a < 1 or b < a or n < 1:
        raise argparse.ArgumentTypeError(f"grid {spec!r} is empty or not increasing")
    if n == 1 or a == b:
        return [a]
    ratio = (b / a) ** (1.0 / (n - 1))
    out = []
    for i in range(n):
        v = min(round(a * ratio**i), b)
        if not out or v > out[-1]:
            out.append(v)
    if out[-1] != b:
        out.append(b)
    return out


def parse_s_grid(spec: str) -> List[float]:
    """Linear 'a:b:n' or 'geometric:a:b:n' grid of positive s values."""
    if spec.startswith("geometric:"):
        parts = spec.split(":")
        if len(parts) != 4:
            raise argparse.ArgumentTypeError(f"malformed grid {spec!r}")
        try:
            a, b, n = float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError:
            raise argparse.ArgumentTypeError(f"malformed grid {spec!r}") from None
        if n < 1 or a <= 0 or b <= 0 or (n > 1 and a == b):
            raise argparse.ArgumentTypeError(f"grid {spec!r} is empty or degenerate")
        if n == 1:
            return [a]
        ratio = (b / a) ** (1.0 / (n - 1))
        return [a * ratio**i for i in range(n)]
    vals = parse_linear_grid(spec)
    if any(v <= 0 for v in vals):
        raise argparse.ArgumentTypeError(f"s grid must be positive: {spec!r}")
    return vals


def _fmt(x: float) -> str:
    return format(x, ".15g")


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _json_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _cmd_count(args: argparse.Namespace) -> int:
    if args.method == "recurrence":
        table = count_via_log_recurrence(args.kind, args.k, args.n_max)
    else:
        table = count_partitions(args.kind, args.k, args.n_max)
    if args.format == "json":
        _emit(_json_dumps(table.to_json_dict()), args.output)
    else:
        _emit(table.to_csv(), args.output)
    return 0


def _cmd_constants(args: argparse.Namespace) -> int:
    cs = constants(args.k, m_max=args.m_max)
    _emit(_json_dumps(cs.to_json_dict()), args.output)
    return 0


def _cmd_family(args: argparse.Namespace) -> int:
    s = args.s
    m = mean(args.kind, args.k, s, args.eps)
    v = variance(args.kind, args.k, s, args.eps)
    thetas = args.theta_grid if args.theta_grid is not None else [0.0]
    lines = ["s,mean,variance,theta,cf_real,cf_imag"]
    for theta in thetas:
        cf = char_fn_normalized(args.kind, args.k, s, theta, args.eps)
        lines.append(",".join([_fmt(s), _fmt(m), _fmt(v), _fmt(theta),
                               _fmt(cf.real), _fmt(cf.imag)]))
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def _cmd_asymptotic(args: argparse.Namespace) -> int:
    kind, k, n = args.kind, args.k, args.n
    if args.method == "hr" and kind is not PartitionKind.UNRESTRICTED:
        raise UsageError("--method hr requires --kind unrestricted")
    if args.method == "qk" and kind is not PartitionKind.DISTINCT:
        raise UsageError("--method qk requires --kind distinct")
    s = None
    residual = None
    if args.method == "bd":
        saddle = sd.bd_saddle(k, n, kind)
        est = sd.hayman_estimate(kind, k, n, saddle, args.eps)
        s, residual = saddle.s, saddle.residual
    elif args.method == "exact":
        saddle = sd.exact_saddle(kind, k, n, rtol=args.rtol, eps=args.eps)
        est = sd.hayman_estimate(kind, k, n, saddle, args.eps)
        s, residual = saddle.s, saddle.residual
    elif args.method == "hr":
        est = sd.hr_closed_form(k, n)
    else:
        est = sd.qk_closed_form(k, n)
    payload = {
        "kind": kind.value,
        "k": k,
        "n": n,
        "method": args.method,
        "formula": est.formula.value,
        "heuristic": est.heuristic,
        "log_value": float(_fmt(est.log_value)),
        "s": None if s is None else float(_fmt(s)),
        "residual": None if residual is None else float(_fmt(residual)),
    }
    _emit(_json_dumps(payload), args.output)
    return 0


def _cmd_ratio_table(args: argparse.Namespace) -> int:
    kind, k = args.kind, args.k
    grid = args.n_grid
    budget = args.max_n if args.max_n else RATIO_BUDGET.get(k, RATIO_BUDGET_DEFAULT)
    if grid[-1] > budget:
        raise UsageError(
            f"n-grid maximum {grid[-1]} exceeds the compute budget {budget} for "
            f"k={k}; rerun with a grid capped at {budget} (or raise --max-n)")
    table = count_partitions(kind, k, grid[-1])
    header = ("n,exact_log,hayman_exact_log,hayman_bd_log,closed_form_log,"
              "hayman_exact_ratio,hayman_bd_ratio,closed_form_ratio")
    lines = [header]
    for n in grid:
        if table.coeffs[n] == 0:
            raise UsageError(
                f"exact count is zero at n={n} (kind={kind.value}, k={k}); "
                f"no log ratio exists there, start the grid higher")
        exact_log = log_integer(table.coeffs[n])
        est_exact = sd.hayman_estimate(
            kind, k, n, sd.exact_saddle(kind, k, n, eps=args.eps), args.eps)
        est_bd = sd.hayman_estimate(kind, k, n, sd.bd_saddle(k, n, kind), args.eps)
        closed = (sd.hr_closed_form(k, n) if kind is PartitionKind.UNRESTRICTED
                  else sd.qk_closed_form(k, n))
        row = [str(n), _fmt(exact_log)]
        row += [_fmt(e.log_value) for e in (est_exact, est_bd, closed)]
        row += [_fmt(math.exp(e.log_value - exact_log))
                for e in (est_exact, est_bd, closed)]
        lines.append(",".join(row))
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def _cmd_diagnose(args: argparse.Namespace) -> int:
    kwargs = dict(draws=args.draws, seed=args.seed, quad_tol=args.quad_tol,
                  burn_in=args.burn_in, eps=args.eps)
    if args.suite == "all":
        reports = diag.run_all(args.kind, args.k, **kwargs)
    else:
        reports = {args.suite: diag.run_suite(args.kind, args.k, args.suite,
                                              s_grid=args.s_grid, **kwargs)}
    if args.csv:
        lines = ["metric,s,value"]
        for name in sorted(reports):
            rep = reports[name]
            for metric in sorted(rep.metrics):
                for s, v in zip(rep.grid, rep.metrics[metric]):
                    lines.append(f"{metric},{_fmt(s)},{_fmt(v)}")
        _emit("\n".join(lines) + "\n", args.output)
        return 0
    if args.suite == "all":
        payload = {"suites": {name: rep.to_json_dict()
                              for name, rep in sorted(reports.items())}}
    else:
        payload = reports[args.suite].to_json_dict()
    _emit(_json_dumps(payload), args.output)
    return 0


class UsageError(Exception):
    """Parameter problem detected after argparse (still exit code 2)."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="powerparts",
        description="Exact counts, Khinchin-family evaluation, saddle-point "
                    "asymptotics and diagnostics for partitions into k-th powers.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, kind_default="unrestricted"):
        p.add_argument("--kind", type=_kind, default=PartitionKind.parse(kind_default))
        p.add_argument("--k", type=_positive_int, required=True)
        p.add_argument("--output", default=None, help="write to file instead of stdout")
        p.add_argument("--eps", type=_positive_float, default=1e-12,
                       help="series tail tolerance")

    p = sub.add_parser("count", help="exact coefficient table")
    common(p)
    p.add_argument("--n-max", type=_nonnegative_int, required=True)
    p.add_argument("--method", choices=("dp", "recurrence"), default="dp")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("constants", help="constant set as JSON")
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--m-max", type=int, default=8)
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_constants)

    p = sub.add_parser("family", help="mean/variance and characteristic function rows")
    common(p)
    p.add_argument("--s", type=_positive_float, required=True)
    p.add_argument("--theta-grid", type=parse_linear_grid, default=None,
                   metavar="A:B:N")
    p.set_defaults(func=_cmd_family)

    p = sub.add_parser("asymptotic", help="one estimator at one n, as JSON")
    common(p)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--method", choices=("bd", "exact", "hr", "qk"), required=True)
    p.add_argument("--rtol", type=_positive_float, default=1e-10)
    p.set_defaults(func=_cmd_asymptotic)

    p = sub.add_parser("ratio-table", help="exact vs estimated log-counts over an n grid")
    common(p)
    p.add_argument("--n-grid", type=parse_geometric_int_grid, required=True,
                   metavar="geometric:A:B:POINTS")
    p.add_argument("--max-n", type=_positive_int, default=None,
                   help="override the compute budget")
    p.set_defaults(func=_cmd_ratio_table)

    p = sub.add_parser("diagnose", help="run a diagnostics suite")
    common(p)
    p.add_argument("--suite", choices=diag.SUITES + ("all",), required=True)
    p.add_argument("--s-grid", type=parse_s_grid, default=None,
                   metavar="A:B:N|geometric:A:B:N")
    p.add_argument("--draws", type=_positive_int, default=20000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quad-tol", type=_positive_float, default=1e-6)
    p.add_argument("--burn-in", type=_nonnegative_int, default=None,
                   help="override the suite's monotonicity burn-in index")
    p.add_argument("--csv", action="store_true", help="flatten metrics to CSV rows")
    p.set_defaults(func=_cmd_diagnose)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: invalid parameter: {exc}", file=sys.stderr)
        return 2
    except (TruncationError, sd.ConvergenceError, diag.QuadratureError,
            ArithmeticError) as exc:
        print(f"error: computation failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
