"""Command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

import argparse
import sys
from pathlib import Path

from .errors import ConfigError, HybridDJError, NumericalError, StageError
from .experiment import (
    classical_report,
    load_config,
    profile_path_for,
    render_json,
    run,
    sweep,
    sweep_csv,
)
from .cv import GaussianParams, make_grid
from .gaussian import post_measurement_profile

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_run(args):
    config = load_config(args.config)
    record = run(config)
    if not config.output_path:
        sys.stdout.write(record.to_json())
    return EXIT_OK


def _parse_values(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"--values must be comma-separated numbers: {exc}") from exc


def _cmd_sweep(args):
    config = load_config(args.config)
    records = sweep(config, args.param, _parse_values(args.values), workers=args.workers)
    out = args.out
    if out is None and config.output_path:
        p = Path(config.output_path)
        out = p.with_name(f"{p.stem}_sweep_{args.param}.csv")
    _emit(sweep_csv(records, args.param), out)
    return EXIT_OK


def _cmd_classical(args):
    config = load_config(args.config)
    _emit(render_json(classical_report(config, args.k)), args.out)
    return EXIT_OK


def _cmd_analyze(args):
    config = load_config(args.config)
    try:
        params = GaussianParams(config.s, config.delta_s)
        params.window()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    profile = post_measurement_profile(make_grid(config.n_points), params, config.allow_unresolved)
    out = args.out
    if out is None and config.output_path:
        out = profile_path_for(config.output_path)
    if out:
        with open(out, "w", newline="") as fh:
            profile.write_csv(fh)
    else:
        profile.write_csv(sys.stdout)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="hybriddj", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one pipeline and write its RunRecord JSON")
    p.add_argument("config")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("sweep", help="vary one parameter and write a CSV table")
    p.add_argument("config")
    p.add_argument("--param", required=True)
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("classical", help="classical query baselines for the configured function")
    p.add_argument("config")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_classical)

    p = sub.add_parser("analyze", help="emit the error-function profile CSV")
    p.add_argument("config")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_analyze)
    return parser


def _exit_code(exc):
    cause = exc.cause if isinstance(exc, StageError) else exc
    return EXIT_NUMERICAL if isinstance(cause, (NumericalError, ArithmeticError)) else EXIT_CONFIG


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (HybridDJError, ValueError, ArithmeticError) as exc:
        print(f"hybriddj {args.command}: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
