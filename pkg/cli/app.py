"""
Argument parsing and exit-status handling for the memchannel command line.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import ValidationError

from core.config import load_run_config
from core.errors import (
    ChannelError,
    InputValidationError,
    InvariantViolation,
    SweepPointError,
    VerificationFailure,
)
from core.logger import get_logger
from utils.data_utils import TableWriter
from utils.report_templates import summary_builder
from cli.commands import parse_sweep, run_report, run_sweep, verify

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_VERIFICATION = 2

FLAG_KEYS = ("modes", "eta", "photons", "env_photons", "xi", "xi_file", "sweep", "format", "out", "seed",
             "inject_perturbation")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with report, sweep and verify subcommands."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value configuration file")
    common.add_argument("--modes", type=int, help="number of channel uses n")
    common.add_argument("--eta", type=float, help="transmissivity in [0, 1]")
    common.add_argument("--photons", type=float, help="input photon budget N per use")
    common.add_argument("--env-photons", dest="env_photons", type=float, help="environment photons M per mode")
    common.add_argument("--xi", type=float, help="nearest-neighbour squeezing value")
    common.add_argument("--xi-file", dest="xi_file", help="file holding the full squeezing matrix")
    common.add_argument("--format", choices=["csv", "jsonl"], help="table format (default csv)")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--seed", type=int, help="seed for randomized checks")

    parser = argparse.ArgumentParser(
        prog="memchannel",
        description="Capacity bounds for lossy bosonic channels with squeezed-environment memory.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    subparsers.add_parser("report", parents=[common], help="bounds at a single parameter point")
    sweep = subparsers.add_parser("sweep", parents=[common], help="bounds over a one-parameter sweep")
    sweep.add_argument("--sweep", help="param:start:stop:steps with param in eta|N|M|xi")
    check = subparsers.add_parser("verify", parents=[common], help="numerical consistency checks")
    check.add_argument("--inject-perturbation", dest="inject_perturbation", type=float,
                       help="offset added to the decomposed channel covariance")
    return parser


def _flags(args: argparse.Namespace) -> Dict[str, object]:
    return {key: getattr(args, key, None) for key in FLAG_KEYS}


def _write_json(payload: Dict[str, object], out: str) -> None:
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2) + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command and return its exit status."""
    args = build_parser().parse_args(argv)
    logger = get_logger()
    try:
        config = load_run_config(args.config, _flags(args))
        logger.log_event("cli_command", {"command": args.command, **config.model_dump()}, "cli")
        if args.command == "report":
            TableWriter(config.format).write([run_report(config)], config.out)
        elif args.command == "sweep":
            TableWriter(config.format).write(run_sweep(parse_sweep(config)), config.out)
        else:
            summary = verify(config)
            if config.out:
                _write_json(summary.to_dict(), config.out)
            sys.stdout.write(summary_builder.render_template("verify", **summary.to_dict(),
                                                             failed=summary.failed))
            summary.raise_for_failures()
    except SweepPointError as exc:
        logger.log_error(str(exc), "cli", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION if isinstance(exc.cause, InvariantViolation) else EXIT_VALIDATION
    except (VerificationFailure, InvariantViolation) as exc:
        logger.log_error(str(exc), "cli", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except (InputValidationError, ValidationError, ChannelError) as exc:
        logger.log_error(str(exc), "cli", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK
