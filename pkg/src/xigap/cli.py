"""Command-line front end: ``xigap <command> [flags]``.

Exit status: 0 success, 2 validation error (bad flags, config keys or
parameters), 3 accuracy or search failure.

Every run writes one artifact (JSON or CSV) and prints a one-line summary.
JSON artifacts carry a ``config`` block; writing that block back as a
key=value file and passing it with ``--config`` reproduces the run.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import analytic, arith, functionals, optimize, zerofinder
from .errors import (AccuracyError, CapacityError, ConditioningError, DegenerateError, DomainError,
                     PoleProximityError, PrecisionError, SearchFailure, ValidationError)

SIG_DIGITS = 12
VALIDATION_ERRORS = (DomainError, CapacityError, DegenerateError, ValidationError)
ACCURACY_ERRORS = (AccuracyError, SearchFailure, PrecisionError, PoleProximityError, ConditioningError)
# flags that steer the run but never change its output
_NOT_ECHOED = {"command", "config", "out", "workers"}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> _Parser:
    parser = _Parser(prog="xigap", description="Gaps between zeros of xi' and mollified-moment functionals.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, fmt="json"):
        p.add_argument("--config", metavar="FILE", help="flat key=value file overriding defaults")
        p.add_argument("--out", metavar="PATH", help="artifact path (default xigap-<command>.<format>)")
        p.add_argument("--workers", type=int, help="cap on concurrent workers (env XIGAP_WORKERS)")
        p.add_argument("--format", choices=("json", "csv"), default=fmt)

    p = sub.add_parser("functional", help="closed-form h1 for a mollifier")
    common(p)
    p.add_argument("--kind", choices=("divisor", "moebius", "prime"), required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--coeffs", type=_floats, default=[1.0])
    p.add_argument("--c", type=float)
    p.add_argument("--branch", choices=("minus", "plus"), help="use c_minus or c_plus when --c is absent")
    p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("uv", help="U, V and c_plus/c_minus")
    common(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-12)

    p = sub.add_parser("zeros", help="zeros of zeta or xi' in a window")
    common(p, fmt="csv")
    p.add_argument("--kind", choices=("zeta", "xi_prime"), default="zeta")
    p.add_argument("--t-min", type=float, required=True)
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--grid-step", type=float, default=zerofinder.DEFAULT_GRID_STEP)

    p = sub.add_parser("gaps", help="normalized gaps of xi' zeros and D(alpha, T)")
    common(p)
    p.add_argument("--t-min", type=float, required=True)
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--alphas", type=_floats, default=[0.5, 1.0, 1.5, 2.0])
    p.add_argument("--tol", type=float, default=1e-9)

    p = sub.add_parser("empirical", help="h_k evaluated from xi' zeros in (T, 2T]")
    common(p)
    p.add_argument("--kind", choices=("divisor", "moebius", "prime"), required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--coeffs", type=_floats, default=[1.0])
    p.add_argument("--c", type=float, default=0.0)
    p.add_argument("--alpha-f", type=float)
    p.add_argument("--theta", type=float, default=0.5)
    p.add_argument("--step", type=float, default=0.01)

    p = sub.add_parser("optimize", help="search for the extremal alpha")
    common(p)
    p.add_argument("--theorem", type=int, choices=(1, 2), default=1)
    p.add_argument("--direction", choices=("large_gap", "small_gap"), required=True)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha-tol", type=float, default=1e-6)
    p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("lemma-check", help="arithmetic oracle suite and the xi''/xi' residual")
    common(p)
    p.add_argument("--x", type=float, default=1e6)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--T", type=float, default=100.0)
    p.add_argument("--K", type=int, default=10)
    p.add_argument("--N", type=int, default=10**4)
    p.add_argument("--heights", type=_floats, default=[120.0, 150.0, 180.0])
    return parser


# -- config handling ----------------------------------------------------------------


def read_config(path) -> dict[str, str]:
    """Parse a flat key=value file; blank lines and # comments are skipped."""
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from None
    for num, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{num}: expected key=value")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _subparser(parser, command):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[command]
    raise ValidationError(f"unknown command {command!r}")


def _apply_config(parser, argv):
    """Config values override defaults; flags on the command line override both."""
    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    command = next((tok for tok in argv if tok in COMMANDS), None)
    if not known.config or command is None:
        return parser.parse_args(argv)
    values = read_config(known.config)
    sub = _subparser(parser, command)
    actions = {a.dest: a for a in sub._actions if a.dest not in ("help", "config")}
    unknown = sorted(set(values) - set(actions))
    if unknown:
        raise ValidationError(f"unknown config keys: {', '.join(unknown)}")
    converted = {}
    for key, raw in values.items():
        action = actions[key]
        try:
            value = action.type(raw) if action.type else raw
        except (argparse.ArgumentTypeError, ValueError) as exc:
            raise ValidationError(f"config key {key}: {exc}") from None
        if action.choices is not None and value not in action.choices:
            raise ValidationError(f"config key {key}: {value!r} not in {list(action.choices)}")
        converted[key] = value
        action.required = False
    sub.set_defaults(**converted)
    return parser.parse_args(argv)


def config_echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_ECHOED and v is not None}


def echo_to_config_text(echo: dict) -> str:
    """Turn an echo block back into a key=value config file."""
    lines = []
    for key, value in echo.items():
        if isinstance(value, list):
            value = ",".join(repr(float(v)) for v in value)
        lines.append(f"{key}={value}")
    return "\n".join(lines) + "\n"


def _workers(args) -> int:
    if args.workers is not None:
        n = args.workers
    else:
        env = os.environ.get("XIGAP_WORKERS")
        try:
            n = int(env) if env else 1
        except ValueError:
            raise ValidationError(f"XIGAP_WORKERS must be an integer, got {env!r}") from None
    if n < 1:
        raise ValidationError("workers must be >= 1")
    return n


# -- output -------------------------------------------------------------------------


def _round(obj):
    """Floats to 12 significant digits, recursively; NaN and inf become null."""
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return float(f"{x:.{SIG_DIGITS}g}") if math.isfinite(x) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _round(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def dumps(payload: dict) -> str:
    return json.dumps(_round(payload), indent=2)


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.{SIG_DIGITS}g}"
    return str(x)


def _write(args, payload: dict | None = None, header=None, rows=None) -> Path:
    path = Path(args.out or f"xigap-{args.command}.{args.format}")
    if args.format == "csv" and rows is not None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for row in rows:
                w.writerow([_fmt(v) for v in row])
    else:
        payload = dict(payload or {})
        if rows is not None:
            payload.setdefault("rows", [dict(zip(header, row)) for row in rows])
        payload["config"] = config_echo(args)
        path.write_text(dumps(payload) + "\n")
    return path


# -- commands -----------------------------------------------------------------------


def _require(cond, message):
    if not cond:
        raise ValidationError(message)


def cmd_functional(args):
    _require(args.alpha >= 0, "alpha must be >= 0")
    if args.kind == "prime":
        if args.c is None:
            _require(args.branch is not None, "prime functional needs --c or --branch")
            c = functionals.c_opt(args.alpha)[0 if args.branch == "minus" else 1]
        else:
            c = args.c
        res = functionals.h1_theorem2(args.alpha, c, min(args.tol, 1e-12))
    else:
        _require(args.r in (1, 2, 3), "r must be 1, 2 or 3")
        _require(args.tol <= 1e-8, "tol must be <= 1e-8")
        res = functionals.h1_theorem1(args.alpha, args.r, functionals.PolyF(tuple(args.coeffs)), args.kind,
                                      args.tol)
    path = _write(args, asdict(res))
    return f"h1({args.alpha:g}) = {_fmt(res.value)} [{res.label}, quad_error {res.quad_error:.1e}] -> {path}"


def cmd_uv(args):
    _require(args.alpha >= 0, "alpha must be >= 0")
    uv = functionals.UV(args.alpha, args.tol)
    payload = {"alpha": args.alpha, "U": uv.U, "V": uv.V, "quad_error": uv.error}
    if uv.U > 0:
        payload["c_minus"], payload["c_plus"] = functionals.stationary_points(uv.U, uv.V)
    path = _write(args, payload)
    return f"U = {_fmt(uv.U)}, V = {_fmt(uv.V)} -> {path}"


def _zero_rows(z):
    return [(i, z.kind, t, a, b) for i, (t, a, b) in enumerate(zip(z.ordinates, z.bracket_lo, z.bracket_hi))]


def cmd_zeros(args):
    _require(args.t_min < args.t_max, "need t_min < t_max")
    z = zerofinder.scan_zeros(args.kind, args.t_min, args.t_max, args.tol, args.grid_step, _workers(args))
    header = ["index", "kind", "ordinate", "bracket_lo", "bracket_hi"]
    payload = {"kind": z.kind, "window": z.window, "count": len(z), "notes": z.notes, "violations": z.violations}
    path = _write(args, payload, header, _zero_rows(z))
    return f"{len(z)} {args.kind} zeros in [{args.t_min:g}, {args.t_max:g}] -> {path}"


def cmd_gaps(args):
    _require(args.t_min < args.t_max, "need t_min < t_max")
    z = zerofinder.scan_zeros("xi_prime", args.t_min, args.t_max, args.tol, workers=_workers(args))
    stats = zerofinder.normalized_gaps(z)
    table = zerofinder.distribution(z, args.alphas)
    header = ["ordinate", "delta", "delta_local", "delta_plus"]
    rows = list(zip(z.ordinates[:-1], stats.deltas, stats.deltas_local, stats.delta_plus))
    payload = {
        "summary": {"count": stats.count, "mean_delta": stats.mean_delta, "mean_delta_local": stats.mean_delta_local,
                    "sum_delta_sq": stats.sum_delta_sq, "L": stats.L, "normalization": stats.normalization,
                    "interlacing_violations": zerofinder.interlacing_violations(z)},
        "distribution": asdict(table),
    }
    path = _write(args, payload, header if args.format == "csv" else None, rows if args.format == "csv" else None)
    return f"{stats.count} gaps, mean delta {_fmt(stats.mean_delta)} -> {path}"


def _spec(args):
    if args.kind == "prime":
        return functionals.MollifierSpec("prime_twisted", theta=args.theta, c=args.c, alpha_f=args.alpha_f)
    return functionals.MollifierSpec(args.kind, theta=args.theta, r=args.r, f=functionals.PolyF(tuple(args.coeffs)))


def cmd_empirical(args):
    _require(args.T >= 10 and 2 * args.T <= analytic.HEIGHT_CAP, "need 10 <= T and 2T <= 5000")
    spec = _spec(args)
    z = zerofinder.scan_zeros("xi_prime", args.T, 2 * args.T, workers=_workers(args))
    value = functionals.empirical_h(z, spec, args.alpha, args.k, args.T, args.step)
    payload = {"alpha": args.alpha, "k": args.k, "T": args.T, "value": value, "zeros_in_window": len(z),
               "spec": spec.echo(), "label": "finite T"}
    path = _write(args, payload)
    return f"empirical h_{args.k}({args.alpha:g}) = {_fmt(value)} at T = {args.T:g} -> {path}"


def cmd_optimize(args):
    if args.theorem == 1:
        rep = optimize.optimize_theorem1(args.direction, args.r, args.degree, args.restarts, args.seed,
                                         alpha_tol=args.alpha_tol, tol=args.tol, workers=_workers(args))
    else:
        rep = optimize.optimize_theorem2(args.direction)
    path = _write(args, asdict(rep))
    return f"{args.direction}: best alpha {_fmt(rep.best_alpha)}, h1 {_fmt(rep.h1_at_best)} [{rep.label}] -> {path}"


def lemma_report(x=1e6, r=2, m=2, T=100.0, K=10, N=10**4, heights=(120.0, 150.0, 180.0)) -> dict:
    """Arithmetic oracle sums against their main terms plus the xi''/xi' residuals."""
    _require(x >= 10**4, "x must be >= 10^4")
    tables = arith.get_tables(int(max(m, 1) * x))
    out = {}
    t0 = arith.lemma6_sum(x, 0, r, tables)
    out["lemma6_k0"] = {"x": x, "sum": t0, "main": arith.lemma6_main(x, 0, r), "ratio": t0 / arith.lemma6_main(x, 0, r)}
    t1 = arith.lemma6_sum(x, 1, r, tables)
    out["lemma6_k1"] = {"x": x, "sum": t1, "main": arith.lemma6_main(x, 1, r), "ratio": t1 / arith.lemma6_main(x, 1, r)}
    ys = [10**3, 10**4.5, x]
    out["lemma1"] = [{"y": y, "ratio": arith.lemma1_sum(y, r, tables) / arith.lemma1_main(y, r)} for y in ys]
    y2 = min(x, 1e5)
    out["lemma2_n1_equals_lemma1"] = arith.lemma2_sum(y2, 1, r, tables) == arith.lemma1_sum(y2, r, tables)
    xs = [v for v in (1e4, 1e5, 1e6) if v <= x]
    out["lemma7"] = [{"x": v, "k": k, "m": m, "normalized": arith.lemma7_sum(v, k, r, m, tables) / math.log(v) ** (k + 1)}
                     for v in xs for k in range(4)]
    L = math.log(T / (2 * math.pi))
    sigma = 1 + 1 / L
    res = []
    for t in heights:
        s = complex(sigma, t)
        lhs = analytic.xi2_over_xi1(s)
        rhs = analytic.aK_rhs(s, N=N, K=K, T=T)
        res.append({"t": t, "sigma": sigma, "lhs": [lhs.real, lhs.imag], "rhs": [rhs.real, rhs.imag],
                    "residual": abs(lhs - rhs)})
    out["lemma4"] = {"T": T, "K": K, "N": N, "points": res, "max_residual": max(p["residual"] for p in res)}
    return out


def cmd_lemma_check(args):
    report = lemma_report(args.x, args.r, args.m, args.T, args.K, args.N, tuple(args.heights))
    path = _write(args, report)
    return (f"lemma6 k=0 ratio {_fmt(report['lemma6_k0']['ratio'])}, "
            f"max lemma4 residual {_fmt(report['lemma4']['max_residual'])} -> {path}")


COMMANDS = {
    "functional": cmd_functional,
    "uv": cmd_uv,
    "zeros": cmd_zeros,
    "gaps": cmd_gaps,
    "empirical": cmd_empirical,
    "optimize": cmd_optimize,
    "lemma-check": cmd_lemma_check,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        _workers(args)
        summary = COMMANDS[args.command](args)
    except SystemExit as exc:
        # --help
        return int(exc.code or 0)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except VALIDATION_ERRORS as exc:
        print(f"xigap: validation error: {exc}", file=sys.stderr)
        return 2
    except ACCURACY_ERRORS as exc:
        print(f"xigap: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    print(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
