"""
Command-line entry point.

    python -m src.cli <command> [--config FILE] [flags]

Every command writes its artifacts plus <command>_metadata.json into the
output directory. The metadata file is itself a valid --config for the
same command and repeats the run exactly.
"""
import argparse
import os
import platform
import sys
import time
import uuid
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
import pydantic
import scipy
from pydantic import ValidationError

from src.cli.commands import (
    fidelity, path, phase_diagram, rf_report, sample, scaling_study, train, ursell,
)
from src.domain.errors import (
    ArtifactIOError, CapacityError, DickeRbmError, DomainError, TrainingError,
)
from src.services import metrics
from src.services.storage import write_json
from src.services.worker_pool import pool
from src.utils.config_loader import load_experiment_config, merge_config
from src.utils.logging_config import command_ctx, get_logger, run_id_ctx, setup_logging

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_CAPACITY = 4
EXIT_IO = 5
EXIT_TRAINING = 6

COMMANDS = {module.NAME: module for module in (
    sample, train, fidelity, ursell, phase_diagram, path, rf_report, scaling_study,
)}

# Options handled here rather than by the command config
GLOBAL_DESTS = {"command", "config", "threads", "log_level", "log_dir"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dicke-rbm",
        description="Dicke states as restricted Boltzmann machines: sampling, tomography, "
                    "correlations, compact networks and phase diagrams.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, module in COMMANDS.items():
        sub = subparsers.add_parser(name, help=module.HELP, description=module.HELP)
        sub.add_argument("--config", help="Recipe or metadata file (JSON or YAML).")
        sub.add_argument("--threads", type=int, help="Cap on worker threads.")
        sub.add_argument("--log-level", help="Overrides DICKE_RBM_LOG_LEVEL.")
        sub.add_argument("--log-dir", help="Overrides DICKE_RBM_LOG_DIR.")
        sub.add_argument("--output-dir", dest="output_dir", help="Directory for artifacts and metadata.")
        sub.add_argument("--seed", type=int, help="RNG seed; generated and recorded when omitted.")
        module.add_arguments(sub)
    return parser


def _versions() -> Dict[str, str]:
    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pandas": pd.__version__,
        "pydantic": pydantic.VERSION,
    }


def _exit_code(error: BaseException) -> int:
    if isinstance(error, (DomainError, ValidationError)):
        return EXIT_DOMAIN
    if isinstance(error, CapacityError):
        return EXIT_CAPACITY
    if isinstance(error, ArtifactIOError):
        return EXIT_IO
    if isinstance(error, TrainingError):
        return EXIT_TRAINING
    return EXIT_UNEXPECTED


def run_command(args: argparse.Namespace) -> int:
    module = COMMANDS[args.command]
    flags = {key: value for key, value in vars(args).items() if key not in GLOBAL_DESTS}
    file_values = load_experiment_config(args.config, args.command) if args.config else {}
    config = merge_config(module.CONFIG, file_values, flags)

    started = time.perf_counter()
    result = module.run(config)
    elapsed = time.perf_counter() - started

    metadata_path = os.path.join(config.output_dir, f"{module.NAME}_metadata.json")
    write_json(metadata_path, {
        "command": module.NAME,
        "run_id": run_id_ctx.get(),
        "config": config.model_dump(mode="json"),
        "seed": config.seed,
        "outputs": result.outputs,
        "summary": result.summary,
        "versions": _versions(),
        "wall_time_seconds": elapsed,
        "metrics": metrics.snapshot(),
    })
    logger.info(f"{module.NAME} finished in {elapsed:.2f}s. Metadata: {metadata_path}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE

    setup_logging(log_dir=args.log_dir, level=args.log_level)
    run_id_ctx.set(uuid.uuid4().hex[:8])
    command_ctx.set(args.command)
    if args.threads is not None:
        pool.set_limit(args.threads)

    try:
        return run_command(args)
    except (DickeRbmError, ValidationError) as e:
        code = _exit_code(e)
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return code
    except Exception as e:
        logger.exception(f"Unexpected failure: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
