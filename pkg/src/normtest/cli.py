"""Command-line harness.

Subcommands: test | crit-table | power | delta-ci | validate | limit-quantile.
Human-readable tables go to stdout (--format table, the default); csv/json
render machine output to stdout and, with --output, to a file.  Reruns with
identical flags and seed produce byte-identical primary output; the worker
count (--workers, overridden by NORMTEST_THREADS) never affects values.
Progress goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import power as power_mod
from .competitors import parse_competitor
from .inference import confidence_interval, delta_estimate, validation_test
from .nulldist import (
    CriticalValueTable,
    LimitSamplerConfig,
    critical_value,
    limit_quantile,
    mc_null_sample,
)
from .samplers import parse_spec
from .standardize import load_csv, scaled_residuals
from .statistic import t_statistic


@dataclass(frozen=True)
class TestReport:
    """Result of one normality test run on a data file."""

    statistic: float
    scaled: float
    n: int
    d: int
    a: float
    alpha: float
    replications: int
    seed: int
    p_value: float
    critical_value: float
    reject: bool

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "scaled": self.scaled,
            "n": self.n,
            "d": self.d,
            "a": self.a,
            "alpha": self.alpha,
            "replications": self.replications,
            "seed": self.seed,
            "p_value": self.p_value,
            "critical_value": self.critical_value,
            "reject": self.reject,
        }


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit(args, text: str) -> None:
    print(text, end="" if text.endswith("\n") else "\n")
    if args.output:
        with open(args.output, "w") as f:
            f.write(text if text.endswith("\n") else text + "\n")


def _render_rows(fmt: str, header: list[str], rows: list[list]) -> str:
    if fmt == "csv":
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(repr(v) if isinstance(v, float) else str(v) for v in row))
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return json.dumps([dict(zip(header, row)) for row in rows], indent=2, sort_keys=True) + "\n"
    # aligned human table
    cells = [header] + [
        [f"{v:.4f}" if isinstance(v, float) else str(v) for v in row] for row in rows
    ]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=0, help="0 = all cores; NORMTEST_THREADS overrides")
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")
    p.add_argument("--output", default=None, help="also write the rendered output to this file")


def _check_run_config(args) -> None:
    if getattr(args, "reps", 1) < 1:
        raise ValueError("replications must be >= 1")
    if not 0.0 < getattr(args, "alpha", 0.05) < 1.0:
        raise ValueError("alpha must be in (0, 1)")


def _cell_checkpoint(args, *parts) -> str | None:
    directory = getattr(args, "checkpoint", None)
    if not directory:
        return None
    os.makedirs(directory, exist_ok=True)
    name = "-".join(str(p) for p in parts)
    return os.path.join(directory, f"{name}.npz")


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="numeric CSV, one observation per row")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--header", action="store_true", help="skip a header line")


def _workers(args) -> int | None:
    return None if args.workers == 0 else args.workers


def cmd_test(args) -> int:
    _check_run_config(args)
    data = load_csv(args.input, delimiter=args.delimiter, header=args.header)
    sample = scaled_residuals(data)
    rows = []
    for a in args.a:
        stat = t_statistic(sample, a)
        _progress(f"simulating null for a={a:g} ({args.reps} replications)")
        null = mc_null_sample(
            sample.d, sample.n, a, args.reps, args.seed, workers=_workers(args), progress=True,
            checkpoint=_cell_checkpoint(args, "test", sample.d, sample.n, a, args.seed),
        )
        pval = (1.0 + float(np.sum(null >= stat.scaled))) / (args.reps + 1.0)
        crit = critical_value(null, args.alpha)
        report = TestReport(
            statistic=stat.value,
            scaled=stat.scaled,
            n=sample.n,
            d=sample.d,
            a=a,
            alpha=args.alpha,
            replications=args.reps,
            seed=args.seed,
            p_value=pval,
            critical_value=crit,
            reject=pval <= args.alpha,
        )
        rows.append(report.to_dict())
    header = list(rows[0].keys())
    _emit(args, _render_rows(args.format, header, [[r[k] for k in header] for r in rows]))
    return 0


def _parse_n(value: str) -> float:
    return math.inf if value.lower() in ("inf", "infinity") else int(value)


def cmd_crit_table(args) -> int:
    _check_run_config(args)
    table = CriticalValueTable(replications=args.reps, seed=args.seed)
    done = set()
    if args.resume and args.output:
        try:
            with open(args.output) as f:
                prev = CriticalValueTable.from_json(f.read())
            if prev.replications == args.reps and prev.seed == args.seed:
                table.entries.update(prev.entries)
                done = set(prev.entries)
                _progress(f"resuming: {len(done)} cells already present")
        except (OSError, ValueError, KeyError):
            pass
    for d in args.d:
        for n in args.n:
            for a in args.a:
                key = CriticalValueTable._key(d, n, a, args.alpha)
                if key in done:
                    continue
                if math.isinf(n):
                    cfg = LimitSamplerConfig(
                        m=args.m,
                        ell=args.ell,
                        seed=power_mod.derive_seed(args.seed, 2, d, power_mod._abits(a)),
                    )
                    q = limit_quantile(d, a, args.alpha, cfg)
                else:
                    seed = power_mod.derive_seed(args.seed, 0, d, int(n), power_mod._abits(a))
                    vals = mc_null_sample(
                        d, int(n), a, args.reps, seed, workers=_workers(args), progress=True,
                        checkpoint=_cell_checkpoint(args, "crit", d, int(n), a, args.seed),
                    )
                    q = critical_value(vals, args.alpha)
                table.add(d, n, a, args.alpha, q)
                _progress(f"d={d} n={n} a={a:g}: quantile {q:.4f}")
                if args.resume and args.output:
                    with open(args.output, "w") as f:
                        f.write(table.to_json() + "\n")
    if args.format == "json":
        text = table.to_json() + "\n"
    elif args.format == "csv":
        text = table.to_csv()
    else:
        header = ["d", "n", "a", "alpha", "quantile"]
        rows = [[r["d"], r["n"], r["a"], r["alpha"], r["quantile"]] for r in table.rows()]
        text = _render_rows("table", header, rows)
    _emit(args, text)
    return 0


def cmd_power(args) -> int:
    _check_run_config(args)
    alts = [parse_spec(s) for s in args.alt]
    comps = [parse_competitor(s) for s in args.competitor]
    columns, rows = power_mod.power_matrix(
        alts,
        args.d,
        args.n,
        args.a,
        comps,
        args.alpha,
        args.reps,
        args.seed,
        crit_replications=args.crit_reps,
        workers=_workers(args),
        progress=_progress,
    )
    header = ["alternative"] + columns
    body = [[alt.label()] + row for alt, row in zip(alts, rows)]
    _emit(args, _render_rows(args.format, header, body))
    return 0


def cmd_delta_ci(args) -> int:
    data = load_csv(args.input, delimiter=args.delimiter, header=args.header)
    sample = scaled_residuals(data)
    est = delta_estimate(sample, args.a)
    ci = confidence_interval(est, args.alpha)
    obj = {"estimate": est.to_dict(), "confidence_interval": ci.to_dict()}
    if args.format == "table":
        text = (
            f"delta_hat  {est.delta_hat:.6f}\n"
            f"sigma_hat  {est.sigma_hat:.6f}\n"
            f"{100 * (1 - args.alpha):g}% CI     [{ci.lower:.6f}, {ci.upper:.6f}]\n"
        )
    else:
        text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    _emit(args, text)
    return 0


def cmd_validate(args) -> int:
    data = load_csv(args.input, delimiter=args.delimiter, header=args.header)
    sample = scaled_residuals(data)
    est = delta_estimate(sample, args.a)
    result = validation_test(est, args.delta0, args.alpha)
    obj = {"estimate": est.to_dict(), "validation": result.to_dict()}
    if args.format == "table":
        verdict = "reject (validated: within delta0 of normality)" if result.reject else "retain"
        text = (
            f"delta_hat  {est.delta_hat:.6f}\n"
            f"threshold  {result.threshold:.6f}\n"
            f"decision   {verdict}\n"
        )
    else:
        text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    _emit(args, text)
    return 2 if result.reject else 0


def cmd_limit_quantile(args) -> int:
    cfg = LimitSamplerConfig(m=args.m, ell=args.ell, seed=args.seed, jitter=args.jitter)
    rows = []
    for d in args.d:
        for a in args.a:
            q = limit_quantile(d, a, args.alpha, cfg)
            rows.append([d, a, args.alpha, args.m, args.ell, args.seed, q])
            _progress(f"d={d} a={a:g}: limit quantile {q:.4f}")
    header = ["d", "a", "alpha", "m", "ell", "seed", "quantile"]
    _emit(args, _render_rows(args.format, header, rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="normtest", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="run the normality test on a CSV file")
    _add_input(p)
    p.add_argument("--a", type=float, action="append", required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--reps", type=int, default=10_000)
    p.add_argument("--checkpoint", default=None, help="directory for resumable null-simulation state")
    _add_common(p)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("crit-table", help="simulate critical value tables")
    p.add_argument("--d", type=int, action="append", required=True)
    p.add_argument("--n", type=_parse_n, action="append", required=True, help="sample size or 'inf'")
    p.add_argument("--a", type=float, action="append", required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--reps", type=int, default=100_000)
    p.add_argument("--m", type=int, default=1000, help="support points for n=inf entries")
    p.add_argument("--ell", type=int, default=100_000, help="replicates for n=inf entries")
    p.add_argument("--resume", action="store_true", help="reuse completed cells from --output")
    p.add_argument("--checkpoint", default=None, help="directory for resumable within-cell state")
    _add_common(p)
    p.set_defaults(func=cmd_crit_table)

    p = sub.add_parser("power", help="empirical power study")
    p.add_argument("--alt", action="append", required=True, help="alternative spec, e.g. nmix:p=0.1,mu=3,sigma=I")
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", type=float, action="append", default=None)
    p.add_argument("--competitor", action="append", default=[], help="e.g. bhep:0.5, hv:5, hvinf, bcmr, be:1")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--reps", type=int, default=10_000)
    p.add_argument("--crit-reps", type=int, default=None, help="null replications for critical values")
    _add_common(p)
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("delta-ci", help="distance estimate with confidence interval")
    _add_input(p)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    _add_common(p)
    p.set_defaults(func=cmd_delta_ci)

    p = sub.add_parser("validate", help="neighborhood-of-model validation test")
    _add_input(p)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--delta0", type=float, required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    _add_common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("limit-quantile", help="quantile of the limiting null distribution")
    p.add_argument("--d", type=int, action="append", required=True)
    p.add_argument("--a", type=float, action="append", required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--m", type=int, default=1000)
    p.add_argument("--ell", type=int, default=100_000)
    p.add_argument("--jitter", type=float, default=1e-10)
    _add_common(p)
    p.set_defaults(func=cmd_limit_quantile)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "a", None) is None and args.command == "power":
        args.a = []
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
