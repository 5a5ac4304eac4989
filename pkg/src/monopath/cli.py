"""``monopath`` command line: reproducible experiments written as CSV or JSON.

    monopath <command> [--n ...] [--p ...] [--x ...] [--a ...] [--b ...]
             [--trials T] [--seed S] [--eps E] [--format csv|json]
             [--out PATH] [--workers W]

Grids are comma lists (``0.1,0.2``) or tagged ranges ``lin:start:stop:count``
and ``geom:start:stop:count``. Every trial ``i`` uses stream ``(seed, i)``, so
output is identical for any ``--workers``.

Exit codes: 0 success, 2 bad arguments, 3 numerical failure, 4 I/O failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from functools import partial
from itertools import product
from typing import Callable, Optional, Sequence

import numpy as np

from . import asymptotics as asym
from .asymptotics import ConvergenceError
from .exact import reach_prob_dp
from .gaps import (
    collect_trials,
    estimate,
    exploration_statistic,
    sample_path_count,
    sample_rest_term,
    simulate_reach,
)
from .stats import empirical_pmf, geometric_pmf, ks_distance, summarize, tv_distance_discrete

OUTPUT_DIR_ENV = "MONOPATH_OUTPUT_DIR"
STDOUT = "-"
EXACT_GUARDRAIL_N = 50_000

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

COMMANDS = ("exact", "simulate", "limit", "sweep", "gumbel", "paths", "rest")

COLUMNS = {
    "exact": ["n", "p", "prob_exact", "truncation_mass"],
    "simulate": ["n", "p", "prob_mc", "std_error", "trials"],
    "limit": ["x", "limit_prob", "limit_prob_tanh", "f_b"],
    "sweep": ["n", "x", "p", "prob_mc", "std_error", "limit_prob"],
    "gumbel": ["a", "p", "ks_distance", "mean", "se", "target_mean"],
    "paths": ["a", "p", "k", "empirical_pmf", "geometric_pmf", "tv_distance"],
    "rest": ["a", "p", "mean_r", "se", "target", "var_r"],
}

REQUIRED_GRIDS = {
    "exact": ("n", "p"),
    "simulate": ("n", "p"),
    "limit": (),
    "sweep": ("n", "x"),
    "gumbel": ("a", "p"),
    "paths": ("a", "p"),
    "rest": ("a", "p"),
}


class UsageError(Exception):
    pass


@dataclass
class ExperimentSpec:
    command: str
    n: list[int] = field(default_factory=list)
    p: list[float] = field(default_factory=list)
    x: list[float] = field(default_factory=list)
    a: list[float] = field(default_factory=list)
    b: list[float] = field(default_factory=list)
    trials: int = 10_000
    master_seed: int = 0
    truncation_eps: Optional[float] = None
    output_format: str = "csv"
    output_path: str = STDOUT
    workers: int = 1

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        for grid in REQUIRED_GRIDS[self.command]:
            if not getattr(self, grid):
                raise UsageError(f"command {self.command!r} needs a non-empty --{grid} grid")
        if self.command == "limit" and not (self.x or self.b):
            raise UsageError("command 'limit' needs --x or --b")
        if any(b <= 0 for b in self.b):
            raise UsageError("--b values must be positive")
        if self.trials < 1:
            raise UsageError("--trials must be >= 1")
        if self.command in ("simulate", "gumbel", "rest") and self.trials < 2:
            raise UsageError(f"command {self.command!r} needs --trials >= 2")
        if self.command == "sweep" and self.trials < 100:
            raise UsageError("command 'sweep' needs --trials >= 100")
        if not 0 <= self.master_seed < 2**64:
            raise UsageError("--seed must be a 64-bit unsigned integer")
        if self.truncation_eps is not None and self.truncation_eps < 0:
            raise UsageError("--eps must be >= 0")
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")
        if self.output_format not in ("csv", "json"):
            raise UsageError("--format must be csv or json")
        if self.command == "exact" and max(self.n) > EXACT_GUARDRAIL_N and not (self.truncation_eps or 0) > 0:
            raise UsageError(f"exact with n > {EXACT_GUARDRAIL_N} requires --eps > 0")


def parse_grid(text: str, integer: bool = False) -> list:
    """Parse ``1,2,3``, ``lin:start:stop:count`` or ``geom:start:stop:count``."""
    text = text.strip()
    try:
        if text.startswith(("lin:", "geom:")):
            tag, start, stop, count = text.split(":")
            start, stop, count = float(start), float(stop), int(count)
            if count < 1:
                raise ValueError
            if tag == "lin":
                values = np.linspace(start, stop, count)
            else:
                if start <= 0 or stop <= 0:
                    raise ValueError
                values = np.geomspace(start, stop, count)
            values = values.tolist()
        else:
            values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse grid {text!r}") from None
    if integer:
        ranged = text.startswith(("lin:", "geom:"))
        if not ranged and any(v != round(v) for v in values):
            raise UsageError(f"expected integer values in grid {text!r}")
        return [int(round(v)) for v in values]
    return values


def _row_error(exc: Exception) -> str:
    return f"{type(exc).__name__}: {exc}".replace("\n", " ")


def cmd_exact(spec: ExperimentSpec) -> list[dict]:
    rows = []
    for n, p in product(spec.n, spec.p):
        row = {"n": n, "p": p, "prob_exact": None, "truncation_mass": None}
        try:
            prob, dist = reach_prob_dp(n, p, spec.truncation_eps, full_output=True)
            row["prob_exact"] = prob
            row["truncation_mass"] = 0.0 if dist is None else dist.truncation_mass
        except (ValueError, ArithmeticError) as exc:
            row["error"] = _row_error(exc)
        rows.append(row)
    return rows


def cmd_simulate(spec: ExperimentSpec) -> list[dict]:
    rows = []
    for n, p in product(spec.n, spec.p):
        row = {"n": n, "p": p, "prob_mc": None, "std_error": None, "trials": spec.trials}
        try:
            est = estimate(partial(simulate_reach, n, p), spec.trials, spec.master_seed, spec.workers)
            row.update(prob_mc=est.mean, std_error=est.std_error)
        except (ValueError, ArithmeticError) as exc:
            row["error"] = _row_error(exc)
        rows.append(row)
    return rows


def cmd_limit(spec: ExperimentSpec) -> list[dict]:
    xs = list(spec.x) + [math.log(b) for b in spec.b]
    rows = []
    for x in xs:
        row = {"x": x, "limit_prob": None, "limit_prob_tanh": None, "f_b": None}
        try:
            row["limit_prob"] = asym.limit_prob(x)
            row["f_b"] = asym.f_of_b(math.exp(x)) if abs(x) < 700 else None
            row["limit_prob_tanh"] = asym.limit_prob_tanh(x, 1e-10)
        except (ValueError, ArithmeticError) as exc:
            row["error"] = _row_error(exc)
        rows.append(row)
    return rows


def cmd_sweep(spec: ExperimentSpec) -> list[dict]:
    rows = []
    for n, x in product(spec.n, spec.x):
        row = {"n": n, "x": x, "p": None, "prob_mc": None, "std_error": None, "limit_prob": asym.limit_prob(x)}
        try:
            p = asym.critical_p(n, x).p
            row["p"] = p
            est = estimate(partial(simulate_reach, n, p), spec.trials, spec.master_seed, spec.workers)
            row.update(prob_mc=est.mean, std_error=est.std_error)
        except (ValueError, ArithmeticError) as exc:
            row["error"] = _row_error(exc)
        rows.append(row)
    return rows


def cmd_gumbel(spec: ExperimentSpec) -> list[dict]:
    rows = []
    for a, p in product(spec.a, spec.p):
        row = {"a": a, "p": p, "ks_distance": None, "mean": None, "se": None, "target_mean": None}
        try:
            drift = asym.exploration_drift(a)
            row["target_mean"] = asym.EULER_GAMMA + drift
            values = np.asarray(
                collect_trials(partial(exploration_statistic, a, p), spec.trials, spec.master_seed, spec.workers)
            )
            s = summarize(values)
            row.update(ks_distance=ks_distance(values - drift, asym.gumbel_cdf), mean=s.mean, se=s.std_error)
        except (ValueError, ArithmeticError) as exc:
            row["error"] = _row_error(exc)
        rows.append(row)
    return rows


def cmd_paths(spec: ExperimentSpec) -> list[dict]:
    rows = []
    for a, p in product(spec.a, spec.p):
        try:
            counts = collect_trials(partial(sample_path_count, a, p), spec.trials, spec.master_seed, spec.workers)
        except (ValueError, ArithmeticError) as exc:
            rows.append({"a": a, "p": p, "error": _row_error(exc)})
            continue
        assert min(counts) >= 1
        pmf = empirical_pmf(counts)
        success = math.exp(-a)
        reference = partial(geometric_pmf, q=success)
        cap = max(pmf)
        tv = tv_distance_discrete(pmf, reference, cap)
        for k in range(1, cap + 1):
            rows.append(
                {
                    "a": a,
                    "p": p,
                    "k": k,
                    "empirical_pmf": pmf.get(k, 0.0),
                    "geometric_pmf": reference(k),
                    "tv_distance": tv,
                }
            )
    return rows


def cmd_rest(spec: ExperimentSpec) -> list[dict]:
    rows = []
    for a, p in product(spec.a, spec.p):
        row = {"a": a, "p": p, "mean_r": None, "se": None, "target": asym.rest_term_target(a), "var_r": None}
        try:
            values = collect_trials(partial(sample_rest_term, a, p), spec.trials, spec.master_seed, spec.workers)
            s = summarize(values)
            row.update(mean_r=s.mean, se=s.std_error, var_r=s.variance)
        except (ValueError, ArithmeticError) as exc:
            row["error"] = _row_error(exc)
        rows.append(row)
    return rows


HANDLERS: dict[str, Callable[[ExperimentSpec], list[dict]]] = {
    "exact": cmd_exact,
    "simulate": cmd_simulate,
    "limit": cmd_limit,
    "sweep": cmd_sweep,
    "gumbel": cmd_gumbel,
    "paths": cmd_paths,
    "rest": cmd_rest,
}


def run(spec: ExperimentSpec) -> list[dict]:
    spec.validate()
    return HANDLERS[spec.command](spec)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def render(rows: Sequence[dict], columns: Sequence[str], fmt: str) -> str:
    """Serialise rows; every row gets the listed columns plus ``error``."""
    columns = list(columns) + ["error"]
    if fmt == "json":
        records = [{c: row.get(c, "" if c == "error" else None) for c in columns} for row in rows]
        return json.dumps(records, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".monopath-", suffix=".tmp")
    umask = os.umask(0)
    os.umask(umask)
    try:
        # mkstemp creates 0600; give the result ordinary file permissions
        os.fchmod(fd, 0o666 & ~umask)
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="monopath", description=__doc__.split("\n\n")[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--n", help="grid of graph sizes")
    parser.add_argument("--p", help="grid of edge probabilities")
    parser.add_argument("--x", help="grid of window coordinates")
    parser.add_argument("--a", help="grid of exploration budgets")
    parser.add_argument("--b", help="grid of b values (limit: x = log b)")
    parser.add_argument("--trials", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--eps", type=float, default=None, help="DP truncation threshold")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", default=None, help=f"output file, '-' for stdout (default: ${OUTPUT_DIR_ENV} or stdout)")
    parser.add_argument("--workers", type=int, default=1)
    return parser


def spec_from_args(argv: Optional[Sequence[str]] = None) -> ExperimentSpec:
    args = build_parser().parse_args(argv)
    out = args.out
    if out is None:
        env_dir = os.environ.get(OUTPUT_DIR_ENV)
        out = os.path.join(env_dir, f"{args.command}.{args.format}") if env_dir else STDOUT
    return ExperimentSpec(
        command=args.command,
        n=parse_grid(args.n, integer=True) if args.n else [],
        p=parse_grid(args.p) if args.p else [],
        x=parse_grid(args.x) if args.x else [],
        a=parse_grid(args.a) if args.a else [],
        b=parse_grid(args.b) if args.b else [],
        trials=args.trials,
        master_seed=args.seed,
        truncation_eps=args.eps,
        output_format=args.format,
        output_path=out,
        workers=args.workers,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        spec = spec_from_args(argv)
        rows = run(spec)
    except UsageError as exc:
        print(f"monopath: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"monopath: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    text = render(rows, COLUMNS[spec.command], spec.output_format)
    try:
        if spec.output_path == STDOUT:
            sys.stdout.write(text)
        else:
            _write_atomic(spec.output_path, text)
    except OSError as exc:
        print(f"monopath: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO

    if any("ConvergenceError" in row.get("error", "") for row in rows):
        print("monopath: numerical failure in at least one row (see error column)", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
