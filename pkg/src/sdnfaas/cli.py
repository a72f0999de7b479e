"""Command line entry point: ``sdnfaas {analytic,simulate,compare,sweep} <scenario>``.

Exit codes: 0 success, 1 tolerance or trend failure, 2 configuration error,
3 internal error.  Output goes to ``--out``, else ``$SDNFAAS_OUTPUT_DIR``, else
the scenario's ``[output] dir``.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import traceback
from pathlib import Path

from . import reports
from .analytic import run_analytic
from .compare import Tolerances, run_compare
from .config import AXES, ScenarioConfig, parse_scenario, shipped_scenario
from .engine import run_simulation
from .errors import ConfigInvalid
from .sweep import grid_values, run_sweep

log = logging.getLogger("sdnfaas")

EXIT_OK, EXIT_TOLERANCE, EXIT_CONFIG, EXIT_INTERNAL = 0, 1, 2, 3
OUTPUT_ENV = "SDNFAAS_OUTPUT_DIR"


def load(spec: str) -> ScenarioConfig:
    """A scenario path, or the bare name of a bundled scenario such as ``paper_grid``."""
    p = Path(spec)
    if not p.exists() and p.suffix in ("", ".toml") and p.parent == Path("."):
        try:
            p = shipped_scenario(spec)
        except FileNotFoundError:
            pass
    return parse_scenario(p)


def output_dir(args, cfg: ScenarioConfig) -> Path:
    if args.out:
        return Path(args.out)
    return Path(os.environ.get(OUTPUT_ENV) or cfg.output_dir)


def cmd_analytic(args) -> int:
    cfg = load(args.scenario)
    rep = run_analytic(cfg, args.mode)
    out = output_dir(args, cfg)
    reports.write(out, "report.csv", reports.to_csv(reports.ANALYTIC_COLUMNS, reports.analytic_rows(rep)))
    reports.write(out, "trace.csv", reports.to_csv(reports.TRACE_COLUMNS, reports.trace_rows(rep.power, rep.digest, "")))
    summary = reports.analytic_summary(rep)
    reports.write(out, "summary.txt", summary)
    print(summary, end="")
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = load(args.scenario)
    seed = args.seed if args.seed is not None else cfg.seeds[0]
    rep = run_simulation(cfg, seed, args.horizon)
    out = output_dir(args, cfg)
    reports.write(out, "report.csv", reports.to_csv(reports.SIM_COLUMNS, reports.sim_rows(rep)))
    reports.write(out, "trace.csv", reports.to_csv(reports.TRACE_COLUMNS, reports.trace_rows(rep.power_trace, rep.digest, seed)))
    summary = reports.sim_summary(rep)
    reports.write(out, "summary.txt", summary)
    print(summary, end="")
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = load(args.scenario)
    tol = Tolerances(args.tol_m1, args.tol_mn, args.tol_power)
    seeds = tuple(args.seeds) if args.seeds else None
    rep = run_compare(cfg, tol, seeds, args.horizon)
    out = output_dir(args, cfg)
    reports.write(out, "report.csv", reports.to_csv(reports.COMPARE_COLUMNS, reports.compare_rows(rep)))
    trace = [row for run in rep.runs for row in reports.trace_rows(run.power_trace, rep.digest, run.seed)]
    reports.write(out, "trace.csv", reports.to_csv(reports.TRACE_COLUMNS, trace))
    summary = reports.compare_summary(rep)
    reports.write(out, "summary.txt", summary)
    print(summary, end="")
    return EXIT_OK if rep.passed else EXIT_TOLERANCE


def cmd_sweep(args) -> int:
    cfg = load(args.scenario)
    values = grid_values(args.start, args.stop, args.step)
    seeds = tuple(args.seeds) if args.seeds else None
    res = run_sweep(cfg, args.axis, values, seeds=seeds, simulate=not args.analytic_only, workers=args.workers)
    out = output_dir(args, cfg)
    reports.write(out, "report.csv", reports.to_csv(reports.SWEEP_COLUMNS, reports.sweep_rows(res)))
    summary = reports.sweep_summary(res)
    reports.write(out, "summary.txt", summary)
    print(summary, end="")
    return EXIT_OK if res.passed else EXIT_TOLERANCE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sdnfaas", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("scenario", help="scenario TOML path or bundled scenario name")
        p.add_argument("--out", help="output directory")

    p = sub.add_parser("analytic", help="closed-form delays and power per slot")
    common(p)
    p.add_argument("--mode", choices=["general_eq7", "paper_literal_eq8"], default=None)
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("simulate", help="one discrete-event simulation run")
    common(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--horizon", type=float, help="seconds (default: whole slot grid)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="simulation vs. formulas with tolerances")
    common(p)
    p.add_argument("--tol-m1", type=float, default=0.03, help="single-server stages")
    p.add_argument("--tol-mn", type=float, default=0.05, help="replica pools and totals")
    p.add_argument("--tol-power", type=float, default=0.03)
    p.add_argument("--seeds", type=int, nargs="+")
    p.add_argument("--horizon", type=float)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="one-axis parameter sweep")
    common(p)
    p.add_argument("--axis", choices=AXES, required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--seeds", type=int, nargs="+")
    p.add_argument("--workers", type=int)
    p.add_argument("--analytic-only", action="store_true")
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except ConfigInvalid as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read scenario: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
