"""lnat - online L-natural convex minimization experiments.

Command-line entry point: ``lnat run``, ``lnat check`` and ``lnat sweep``.
"""

from __future__ import annotations

import argparse
import asyncio
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any, cast

from ruamel.yaml import YAML

from .config import ConfigError, LnatSettings, load_experiment_config, load_settings
from .experiments import (
    ExperimentRunner,
    SeedFailedError,
    build_function,
    load_function_spec,
    run_sweep,
)
from .experiments.traces import plain
from .lattice import (
    DomainFormatError,
    EmptyDomainError,
    EnumerationLimitError,
    NotFullDimensionalError,
    load_domain,
)
from .oracles import run_oracle_suite
from .solvers import Algorithm
from .utils.logging import LogLevel, get_logger, setup_logging
from .utils.streams import experiment_streams

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2

CONFIG_HELP = """\
experiment file keys (YAML):
  domain            {dim, lower, upper, gamma: [[i, j, g], ...]}  (1-based, z_i - z_j <= g)
  algorithm         full | bandit
  adversary         lower_bound | {kind: lower_bound, dim, width, lipschitz}
                    | {kind: random, family, params}
                    | {kind: fixed, function: {kind: linear | table | ...}}
  application       {kind: inventory, d, p, c, N, demand: {kind, high | cap | path}}
                    | {kind: scheduling, K, I, M, N, starts, l, G, r, c_wait, lambda, mu}
  T                 horizon (>= 1)
  seeds | seed + replications
  eta, delta        step size and exploration rate (default: theoretical values)
  bound, lipschitz  declared M and L-hat (override the generator's)
  x1                initial point (default: projected box midpoint)
  confidence        level of the one-sided upper bound in summary.yaml (default 0.95)
  proj_tol, proj_max_sweeps, regret_per_round, output, workers

exit codes: 0 ok, 1 runtime failure, 2 configuration error
"""


def _add_run_flags(parser: argparse.ArgumentParser, *, horizon: bool = True) -> None:
    parser.add_argument("config", type=Path, help="experiment YAML file")
    parser.add_argument("--algo", choices=[a.value for a in Algorithm], help="learner")
    if horizon:
        parser.add_argument("--T", dest="horizon", type=int, help="number of rounds")
    parser.add_argument("--seed", type=int, help="first seed")
    parser.add_argument("--seeds", dest="replications", type=int, help="number of consecutive seeds")
    parser.add_argument("--eta", type=float, help="step size")
    parser.add_argument("--delta", type=float, help="exploration rate (bandit)")
    parser.add_argument("--proj-tol", type=float, help="projection tolerance")
    parser.add_argument("--proj-max-sweeps", type=int, help="projection sweep limit")
    parser.add_argument(
        "--regret-per-round",
        action="store_true",
        default=None,
        help="fill regret_to_date on every trace row",
    )
    parser.add_argument("--confidence", type=float, help="level of the summary upper bound (default 0.95)")
    parser.add_argument("--output", type=Path, help="output directory")
    parser.add_argument("--workers", type=int, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser for all subcommands."""
    parser = argparse.ArgumentParser(
        prog="lnat",
        description="Online L-natural convex minimization: learners, oracles and regret experiments.",
        epilog=CONFIG_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "--log-level",
        type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="logging level (default: LNAT_LOG_LEVEL or INFO)",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser(
        "run",
        help="replicated learner-versus-sequence runs",
        epilog=CONFIG_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    _add_run_flags(run)

    check = commands.add_parser("check", help="certify a function against every oracle")
    check.add_argument("domain", type=Path, help="domain YAML file")
    check.add_argument("function", type=Path, help="function YAML file")
    check.add_argument("--samples", type=int, default=8, help="random hull points to test")
    check.add_argument("--delta", type=float, default=0.5, help="exploration rate for estimator checks")
    check.add_argument("--seed", type=int, default=0, help="seed for sampled points")
    check.add_argument("--cap", type=int, default=10_000, help="largest |K| checked exhaustively")

    sweep = commands.add_parser(
        "sweep",
        help="regret-versus-T scaling study",
        epilog=CONFIG_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    _add_run_flags(sweep, horizon=False)
    sweep.add_argument("--T-grid", dest="grid", type=int, nargs="+", required=True, help="horizons")
    return parser


def _overrides(args: argparse.Namespace) -> dict[str, Any]:
    return {
        "algorithm": args.algo,
        "horizon": getattr(args, "horizon", None),
        "seed": args.seed,
        "replications": args.replications,
        "eta": args.eta,
        "delta": args.delta,
        "proj_tol": args.proj_tol,
        "proj_max_sweeps": args.proj_max_sweeps,
        "regret_per_round": args.regret_per_round,
        "confidence": args.confidence,
        "output": args.output,
        "workers": args.workers,
    }


async def _run(args: argparse.Namespace, settings: LnatSettings) -> int:
    config = load_experiment_config(args.config, _overrides(args))
    logger.info("Loaded experiment config from %s", args.config)
    summary = await ExperimentRunner(config, settings).run()
    if summary.mean_regret is not None:
        print(f"mean regret {summary.mean_regret:.6g} over {len(summary.seeds)} seed(s)")
    return EXIT_OK


async def _sweep(args: argparse.Namespace, settings: LnatSettings) -> int:
    config = load_experiment_config(args.config, _overrides(args) | {"horizon": min(args.grid)})
    result = await run_sweep(config, settings, args.grid)
    if result.slope is not None:
        print(f"fitted exponent {result.slope:.4f}")
    return EXIT_OK


def _check(args: argparse.Namespace) -> int:
    domain = load_domain(args.domain)
    spec = load_function_spec(args.function)
    oracle = build_function(spec, domain, cap=args.cap)
    reports = run_oracle_suite(
        oracle,
        samples=args.samples,
        delta=args.delta,
        rng=experiment_streams(args.seed).learner,
        cap=args.cap,
    )
    passed = all(r.passed for r in reports)
    document = {
        "domain": str(args.domain),
        "function": spec.kind,
        "passed": passed,
        "checks": [r.to_dict() for r in reports],
    }
    yaml = YAML(typ="safe")
    yaml.default_flow_style = False
    yaml.dump(plain(document), sys.stdout)
    return EXIT_OK if passed else EXIT_FAILURE


def cli(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, dispatch and map errors to exit codes."""
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = load_settings()
    setup_logging(cast(LogLevel, args.log_level or settings.log_level.upper()), settings.log_levels)

    try:
        match args.command:
            case "run":
                return asyncio.run(_run(args, settings))
            case "sweep":
                return asyncio.run(_sweep(args, settings))
            case "check":
                return _check(args)
    except (
        ConfigError,
        DomainFormatError,
        EmptyDomainError,
        NotFullDimensionalError,
        EnumerationLimitError,
    ) as e:
        logger.error("Configuration error: %s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except SeedFailedError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except Exception as e:
        logger.exception("Run failed")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    parser.error(f"unknown command {args.command}")  # pragma: no cover


def main() -> None:
    """Console-script entry point."""
    sys.exit(cli())


if __name__ == "__main__":
    main()
