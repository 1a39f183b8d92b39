"""Command-line interface: simulate, verify, sweep, plot, figures.

Exit codes: 0 success, 1 config error, 2 verification failure,
3 completed with warnings.  ``CHARGEQ_THREADS`` caps the worker pool.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import runner
from .config import ConfigError, load_scenario, load_sweep
from .runner import EXIT_CONFIG

MISORDERED_BASIS = (3, 1, 2, 0)  # |ee> <-> |gg>, negative control for verify


def _scenario_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with ScenarioConfig fields")
    p.add_argument("--delta", "--delta-over-lambda", dest="delta_over_lambda", type=float)
    p.add_argument("--field", choices=("coherent", "fock"))
    p.add_argument("--nbar", type=float)
    p.add_argument("--fock-n", dest="fock_n", type=int)
    p.add_argument("--initial", choices=("ee", "gg", "custom"))
    for k in ("a1", "b1", "a2", "b2"):
        p.add_argument(f"--{k}", help="complex amplitude, e.g. 0.6 or 0.6+0.8j")
    p.add_argument("--tau-max", dest="tau_max", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--epsilon-truncation", dest="epsilon_truncation", type=float)
    p.add_argument("--opt-tolerance", dest="opt_tolerance", type=float)
    p.add_argument("--opt-max-evals", dest="opt_max_evals", type=int)
    p.add_argument("--opt-seed", dest="opt_seed", type=int)
    p.add_argument("--opt-grid-starts", dest="opt_grid_starts", type=int)
    p.add_argument("--opt-random-starts", dest="opt_random_starts", type=int)
    p.add_argument("--measures", help="comma list of: correlations,deficits")


SCENARIO_DESTS = (
    "delta_over_lambda", "field", "nbar", "fock_n", "initial", "a1", "b1", "a2", "b2",
    "tau_max", "steps", "epsilon_truncation", "opt_tolerance", "opt_max_evals", "opt_seed",
    "opt_grid_starts", "opt_random_starts", "measures",
)


def _scenario(args) -> "runner.ScenarioConfig":
    over = {k: getattr(args, k) for k in SCENARIO_DESTS}
    if isinstance(over["measures"], str):
        over["measures"] = [m for m in over["measures"].split(",") if m]
    over["out"] = getattr(args, "out", None)
    return load_scenario(args.config, **over)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chargeq", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one scenario and write a CSV")
    _scenario_flags(p)
    p.add_argument("--out", help="CSV path (default: stdout)")

    p = sub.add_parser("verify", help="compare the manifold engine with the dense oracle")
    _scenario_flags(p)
    p.add_argument("--out", help="report path (default: stdout only)")
    p.add_argument("--misorder-basis", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("sweep", help="run a grid of scenarios")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir")

    p = sub.add_parser("plot", help="render CSV columns as an SVG line chart")
    p.add_argument("csv")
    p.add_argument("--columns", required=True, help="comma list, e.g. Tc,Qc,Cc")
    p.add_argument("--out", required=True)
    p.add_argument("--title", default="")

    p = sub.add_parser("figures", help="regenerate every figure regime (CSV + SVG)")
    p.add_argument("--out-dir", default="paper_figs")
    p.add_argument("--tau-max", dest="tau_max", type=float)
    p.add_argument("--steps", type=int)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def _dispatch(args) -> int:
    if args.command == "simulate":
        cfg = _scenario(args)
        res = runner.run_scenario(cfg, workers=None)
        if res.path is None:
            sys.stdout.write(res.csv_text)
        if res.warnings:
            print(f"completed with {res.warnings} flagged row(s)", file=sys.stderr)
        return res.exit_code

    if args.command == "verify":
        cfg = _scenario(args)
        order = MISORDERED_BASIS if args.misorder_basis else (0, 1, 2, 3)
        code, text = runner.verify(cfg, args.out, qubit_order=order)
        sys.stdout.write(text)
        return code

    if args.command == "sweep":
        cfg = load_sweep(args.config, args.out_dir)
        code, entries = runner.sweep(cfg)
        print(f"wrote {len(entries)} CSV(s) and manifest.json to {cfg.out_dir}")
        return code

    if args.command == "plot":
        cols = [c for c in args.columns.split(",") if c]
        try:
            runner.plot_csv(args.csv, cols, args.out, args.title)
        except (ValueError, OSError) as exc:
            print(f"plot error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        return 0

    if args.command == "figures":
        base = load_scenario(None, tau_max=args.tau_max, steps=args.steps)
        code, entries = runner.figures(args.out_dir, base)
        print(f"wrote {len(entries)} figure-regime CSV(s) and SVGs to {args.out_dir}")
        return code
    raise AssertionError(args.command)


if __name__ == "__main__":
    sys.exit(main())
