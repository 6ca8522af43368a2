#!/usr/bin/env python3
"""
Main entry point for the edge-burst toolkit.

    python main.py simulate --profile linear --gamma 2 --n 60 --s 50
    python main.py spectrum --gamma 1 --n 96
    python main.py sweep --values 0.25,0.5,1,2,4 --n 40 --jobs 4

Exit status: 0 success, 1 numerical failure (including any failed sweep
point), 2 invalid input or configuration, 3 unexpected error.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

# Add project root to Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from commands import (
    CONFIG_FILE_KEYS,
    build_run_config,
    cmd_simulate,
    cmd_spectrum,
    cmd_sweep,
    parse_float_list,
    parse_model
)
from config import load_config_file, print_configuration_summary, validate_configuration
from core.error_handler import EXIT_INPUT, EXIT_NUMERICAL, EXIT_OK, exit_code_for, get_error_handler
from core.exceptions import ConfigurationError
from core.logging_manager import LogContext, clear_run_id, get_logger, get_logging_manager, set_run_id
from models.schemas import BoundaryCondition, DecayMethod, ProfileKind, SweepSpec


def _run_flags(parser: argparse.ArgumentParser) -> None:
    # Defaults stay None so unset flags never shadow the config file
    group = parser.add_argument_group("lattice and walk")
    group.add_argument("--t1", type=float, help="intra-cell coupling")
    group.add_argument("--t2", type=float, help="inter-cell coupling")
    group.add_argument("--n", type=int, help="number of unit cells N")
    group.add_argument("--s", type=int, help="starting unit cell S")
    group.add_argument("--profile", choices=[p.value for p in ProfileKind])
    group.add_argument("--gamma", type=float, help="uniform rate or linear increment")
    group.add_argument("--gamma-max", dest="gamma_max", type=float, help="upper bound for random rates")
    group.add_argument("--seed", type=int, help="seed for random rates")
    group.add_argument("--bc", choices=[b.value for b in BoundaryCondition])
    group.add_argument("--dt", type=float)
    group.add_argument("--t-max", dest="t_max", type=float)
    group.add_argument("--eps-stop", dest="eps_stop", type=float)
    group.add_argument("--diagnostic-limits", dest="diagnostic_limits", action="store_const", const=True,
                       help="admit t1 = 0 and gamma = 0")

    io = parser.add_argument_group("input and output")
    io.add_argument("--out", type=Path, help="output directory (default: $EDGEBURST_OUT or results)")
    io.add_argument("--config", type=Path, help="flat key=value run file; flags override it")
    io.add_argument("--log-level", dest="log_level", choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"])
    io.add_argument("--json-logs", dest="json_logs", action="store_const", const=True)
    io.add_argument("--show-config", dest="show_config", action="store_true",
                    help="print the active settings to stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edgeburst",
        description="Edge-burst quantum walks on a lossy bipartite lattice"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    simulate = subparsers.add_parser("simulate", help="decay distribution and edge-burst metrics")
    _run_flags(simulate)
    simulate.add_argument("--method", choices=[m.value for m in DecayMethod])
    simulate.add_argument("--snapshots", help="comma-separated times for density.csv")

    spectrum = subparsers.add_parser("spectrum", help="open and ring spectra")
    _run_flags(spectrum)

    sweep = subparsers.add_parser("sweep", help="metrics across loss strengths")
    _run_flags(sweep)
    sweep.add_argument("--method", choices=[m.value for m in DecayMethod])
    sweep.add_argument("--parameter", choices=["gamma"])
    sweep.add_argument("--values", help="comma-separated, strictly increasing")
    sweep.add_argument("--jobs", type=int, help="parallel workers (default: $EDGEBURST_JOBS or 1)")

    return parser


def _dispatch(args: argparse.Namespace, settings) -> int:
    flags: Dict[str, Any] = vars(args)
    file_values = load_config_file(args.config, allowed=CONFIG_FILE_KEYS) if args.config else {}
    cfg = build_run_config(settings, file_values, flags)

    if args.command == "simulate":
        snapshots = parse_float_list(
            flags.get("snapshots") or file_values.get("snapshots"), field="snapshots"
        )
        cmd_simulate(cfg, snapshots=snapshots, settings=settings)
        return EXIT_OK

    if args.command == "spectrum":
        cmd_spectrum(cfg, settings=settings)
        return EXIT_OK

    values = parse_float_list(flags.get("values") or file_values.get("values"), field="values")
    spec = parse_model(
        SweepSpec,
        {
            "parameter": flags.get("parameter") or file_values.get("parameter", "gamma"),
            "values": values if values is not None else [cfg.gamma],
            "base": cfg,
        },
        field="sweep"
    )
    jobs = flags.get("jobs")
    if jobs is None:
        jobs = file_values.get("jobs")
    if jobs is None:
        jobs = settings.jobs
    try:
        jobs = int(jobs)
    except ValueError as e:
        raise ConfigurationError("jobs", f"not an integer: {jobs}") from e
    if jobs < 1:
        raise ConfigurationError("jobs", "must be at least 1")

    summary = cmd_sweep(spec, jobs=jobs, settings=settings)
    return EXIT_NUMERICAL if summary["warnings"] else EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Main application entry point."""
    args = build_parser().parse_args(argv)

    try:
        settings = validate_configuration()
    except ConfigurationError as e:
        print(f"configuration error: {e.user_message}", file=sys.stderr)
        return EXIT_INPUT

    overrides: Dict[str, Any] = {}
    if args.log_level:
        overrides["level"] = args.log_level
    if args.json_logs:
        overrides["json_format"] = True
    get_logging_manager(settings.logging.model_copy(update=overrides))
    logger = get_logger("edgeburst")

    if args.show_config:
        print_configuration_summary(settings)

    rid = set_run_id()
    get_logging_manager().log_with_context(
        logger, logging.INFO, f"Starting {args.command} (run {rid})",
        LogContext(run_id=rid, command=args.command)
    )

    error_handler = get_error_handler()
    try:
        status = _dispatch(args, settings)
        logger.info(f"Finished {args.command}", extra={"command": args.command})
        return status
    except Exception as e:
        info = error_handler.handle_error(e, context={"command": args.command, "argv": argv or sys.argv[1:]})
        print(error_handler.format_message(e, info["error_id"]), file=sys.stderr)
        return exit_code_for(e)
    finally:
        clear_run_id()


if __name__ == "__main__":
    sys.exit(main())
