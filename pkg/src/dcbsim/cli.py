"""Command-line front end: ``analytic``, ``sweep``, ``sinr`` and ``validate``.

Each command writes CSV (or, for ``validate``, a check report) to stdout or
``--out``.  Exit status is 0 on success, 2 for configuration errors, 3 for
failed validation and 4 when a simulation aborts.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import warnings
from contextlib import contextmanager

import numpy as np

from . import checks
from .config import load_config
from .erlang import erlang_b, overall_blocking_paper
from .errors import ConfigurationError, DomainError, StateError
from .propagation import sinr_profile
from .simulator import sweep

EXIT_OK, EXIT_CONFIG, EXIT_VALIDATION, EXIT_RUNTIME = 0, 2, 3, 4


def parse_values(text: str, kind=float) -> list:
    """``"1,2,5"`` or ``"start:stop[:step]"`` (stop inclusive)."""
    text = text.strip()
    try:
        if ":" in text:
            parts = [kind(p) for p in text.split(":")]
            if len(parts) not in (2, 3):
                raise ValueError
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) == 3 else kind(1)
            if step <= 0:
                raise ValueError
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            return [kind(start + i * step) if kind is int else round(start + i * step, 12) for i in range(count)]
        return [kind(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ConfigurationError(f"cannot parse value list {text!r}") from None


def _fmt(x, precision: int) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.{precision}g}"


def _write_csv(header, rows, out, precision):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v, precision) for v in row])
    out.write(buf.getvalue())


def analytic_rows(cfg, n_values, loads):
    """One row per (load, N): Erlang-B plus both cluster-wide summaries.

    The cluster summaries treat all ``cfg.cells`` cells as carrying the same
    load with the same channel count.
    """
    m = cfg.cells
    rows = []
    for a in loads:
        lam = a / cfg.mean_holding_s
        for n in n_values:
            b = erlang_b(a, n)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                paper = overall_blocking_paper([lam] * m, [b] * m, [n] * m)
            weighted = b if a > 0 else 0.0
            rows.append((float(a), int(n), b, paper, weighted))
    return rows


def cmd_analytic(args, cfg, out):
    n_values = parse_values(args.n_values, int)
    loads = parse_values(args.loads, float)
    if not n_values or not loads:
        raise ConfigurationError("N and load ranges must be nonempty")
    if min(n_values) < 1 or min(loads) < 0:
        raise ConfigurationError("N values must be >= 1 and loads >= 0")
    rows = analytic_rows(cfg, n_values, loads)
    _write_csv(["load_erlangs", "N", "erlang_b", "overall_paper", "overall_weighted"], rows, out, args.precision)
    return EXIT_OK


SWEEP_HEADER = ["lambda_ref", "pblock_paper_before", "pblock_paper_after", "pblock_weighted_before",
                "pblock_weighted_after", "utilization_before", "utilization_after", "mean_borrowed"]


def sweep_rows(cfg, lambdas, workers=1):
    points = sweep(cfg.scenario(), lambdas, workers=workers)
    return [(p.arrival_rate,
             p.without_borrowing.overall_blocking_paper, p.with_borrowing.overall_blocking_paper,
             p.without_borrowing.overall_blocking_weighted, p.with_borrowing.overall_blocking_weighted,
             p.without_borrowing.utilization, p.with_borrowing.utilization,
             p.with_borrowing.mean_borrowed) for p in points]


def cmd_sweep(args, cfg, out):
    lambdas = parse_values(args.lambdas, float)
    if ":" in args.lambdas:
        labels = [repr(x) for x in lambdas]
    else:
        labels = [t.strip() for t in args.lambdas.split(",") if t.strip()]
    rows = sweep_rows(cfg, lambdas, args.workers)
    # the rate column echoes the request exactly
    rows = [(label, *row[1:]) for label, row in zip(labels, rows)]
    _write_csv(SWEEP_HEADER, rows, out, args.precision)
    return EXIT_OK


def cmd_sinr(args, cfg, out):
    env, layout = cfg.environment(), cfg.layout()
    radii = parse_values(args.radii, float)
    for r in radii:
        if not 0 < r <= env.cell_radius_m:
            raise DomainError(f"radius {r:g} m outside (0, {env.cell_radius_m:g}] m")
    rows = sinr_profile(env, layout, radii, args.group)
    _write_csv(["r_m", "sinr_no_mgmt_db", "sinr_mgmt_db"], rows, out, args.precision)
    return EXIT_OK


def cmd_validate(args, cfg, out):
    results = checks.run_all(cfg)
    for r in results:
        out.write(r.line() + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VALIDATION


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value configuration file")
    common.add_argument("--seed", type=int, help="override the configured seed")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override one configuration key (repeatable)")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--precision", type=int, default=6, help="significant digits in CSV output")

    p = argparse.ArgumentParser(prog="dcbsim", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analytic", parents=[common], help="Erlang-B table over a load x N grid")
    a.add_argument("--n-values", default="100", help="channel counts, list or start:stop[:step]")
    a.add_argument("--loads", default="0:200:10", help="offered loads in Erlangs")
    a.set_defaults(func=cmd_analytic)

    s = sub.add_parser("sweep", parents=[common], help="paired simulations without/with borrowing")
    s.add_argument("--lambdas", required=True, help="reference-cell arrival rates in calls/s, increasing")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_sweep)

    r = sub.add_parser("sinr", parents=[common], help="SINR profile with and without interference management")
    r.add_argument("--radii", default="50:1000:50", help="user distances in meters")
    r.add_argument("--group", default="B", choices=["A", "B", "C"],
                   help="frequency group of the serving channel (B/C are borrowed)")
    r.set_defaults(func=cmd_sinr)

    v = sub.add_parser("validate", parents=[common], help="run the fast invariant checks")
    v.set_defaults(func=cmd_validate)
    return p


def _overrides(args) -> dict[str, str]:
    values = {}
    for item in args.set:
        if "=" not in item:
            raise ConfigurationError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        values[k.strip()] = v
    if args.seed is not None:
        values["seed"] = str(args.seed)
    return values


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, _overrides(args))
    except (ConfigurationError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        with _output(args.out) as out:
            return args.func(args, cfg, out)
    except (ConfigurationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StateError as exc:
        print(f"simulation aborted ({args.command}, seed={cfg.seed}): {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
