"""
Semigroup Contour Quadrature - Command-Line Application
"""

import argparse
import logging
import os
import sys
from dataclasses import replace

from components.reporting import configure_logging, write_csv, write_tables
from config import (
    DEFAULT_OUTPUT_DIRECTORY,
    EXIT_CONFIG_ERROR,
    EXIT_NUMERICAL_FAILURE,
    EXIT_OK,
    VERSION,
)
from experiments.bounds_sweep import cmd_bounds
from experiments.contour_cost import cmd_contour_cost
from experiments.convergence import cmd_converge
from experiments.planning import cmd_plan
from experiments.run_example import cmd_run
from utils.data_processing import (
    ExperimentConfig,
    SweepSettings,
    load_experiment_config,
    preset_config,
)
from utils.errors import (
    ConfigError,
    DomainError,
    PlanInfeasibleError,
    SolverError,
    SymmetryError,
)

logger = logging.getLogger(__name__)

COMMANDS = ("bounds", "run", "converge", "contour-cost", "plan")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per experiment"""
    parser = argparse.ArgumentParser(
        prog="semigroup-contour",
        description="Regularized contour quadrature for exp(At)x with a priori error bounds",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    for name in COMMANDS:
        sub = subparsers.add_parser(name)
        sub.add_argument("--config", help="INI experiment config")
        sub.add_argument("--example", type=int, choices=[1, 2, 3, 4],
                         help="use an example preset instead of a config file")
        sub.add_argument("--out", help="output directory")
        sub.add_argument("--workers", type=int, default=1, help="parallel shifted solves")
        sub.add_argument("-v", "--verbose", action="count", default=0)
        sub.add_argument("--epsilon", type=float)
        sub.add_argument("--delta", type=float)
        sub.add_argument("--m", type=int)
        sub.add_argument("--t-max", dest="t_max", type=float)
        sub.add_argument("--M", dest="M", type=float)
        sub.add_argument("--graph-norm", dest="graph_norm", type=float)
        if name == "run":
            sub.add_argument("--checkpoint", help="write resolvent samples to this CSV")
    return parser


def resolve_config(args) -> ExperimentConfig:
    """Config from file, preset or flags, with flags taking precedence"""
    overrides = {key: getattr(args, key) for key in ("epsilon", "delta", "m", "t_max", "M")
                 if getattr(args, key) is not None}
    if args.config:
        config = load_experiment_config(args.config)
    elif args.example is not None:
        config = preset_config(args.example)
    else:
        missing = [key for key in ("delta", "m") if key not in overrides]
        if missing:
            raise ConfigError(f"without --config or --example, give --{' --'.join(missing)}")
        config = ExperimentConfig(example="custom", m=overrides.pop("m"),
                                  delta=overrides.pop("delta"))

    if getattr(args, "checkpoint", None):
        overrides["checkpoint"] = args.checkpoint
    if args.graph_norm is not None:
        overrides["sweep"] = replace(config.sweep, graph_norm=args.graph_norm)
    return replace(config, **overrides) if overrides else config


def run_command(args) -> int:
    config = resolve_config(args)
    if args.workers < 1:
        raise ConfigError(f"--workers must be >= 1, got {args.workers}")
    out = args.out or config.output_directory

    if args.command == "plan":
        # stdout unless a directory was asked for
        write_csv(cmd_plan(config), os.path.join(out, "plan.csv") if out else None)
        return EXIT_OK
    if args.command == "bounds":
        tables = {"bounds": cmd_bounds(config)}
    elif args.command == "run":
        tables = cmd_run(config, workers=args.workers)
    elif args.command == "converge":
        tables = cmd_converge(config, workers=args.workers)
    else:
        tables = cmd_contour_cost(config)
    write_tables(tables, out or DEFAULT_OUTPUT_DIRECTORY)
    return EXIT_OK


def main(argv=None) -> int:
    """Main application function"""
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        return run_command(args)
    except (ConfigError, DomainError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except (SolverError, PlanInfeasibleError, SymmetryError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL_FAILURE


if __name__ == "__main__":
    sys.exit(main())
