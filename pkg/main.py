"""
Command-line entry point.

    python main.py cover --config configs/cover_torus.yaml --seed 1
    python main.py replay runs/cover_torus
    python main.py --check

Exit codes: 0 success, 2 configuration error, 3 runtime error, 4 acceptance failure.
"""
import argparse
import logging
import sys
import traceback
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from src.cli import load_config, load_record, replay, run, run_acceptance
from src.core.config import settings
from src.core.errors import ConfigInvalid, CoverLabError

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
EXIT_CHECK = 4

EXPERIMENTS = ["gen", "cover", "late", "distinguish", "excursion", "lamplighter", "oracle"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coverlab", description=settings.PROJECT_DESCRIPTION)
    parser.add_argument("--check", action="store_true", help="Run the acceptance suite and exit")
    parser.add_argument("--scale", type=float, default=1.0, help="Replica-count multiplier for --check")
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.VERSION}")
    subparsers = parser.add_subparsers(dest="command")

    for name in EXPERIMENTS:
        sub = subparsers.add_parser(name, help=f"Run a {name} experiment")
        sub.add_argument("--config", required=True, help="Path to the YAML experiment file")
        sub.add_argument("--seed", type=int, help="Override the master seed")
        sub.add_argument("--out", help="Override the output directory")
        sub.add_argument("--threads", type=int, help="Override the worker count")

    sub = subparsers.add_parser("replay", help="Re-run a record and verify every estimate")
    sub.add_argument("record", help="record.json or the run directory holding it")
    sub.add_argument("--seed", type=int, help="Replay under another seed")
    sub.add_argument("--out", help="Directory for the replay's artifacts")
    return parser


def _run_experiment(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    if config.experiment.kind != args.command:
        raise ConfigInvalid(
            f"config describes a '{config.experiment.kind}' experiment, not '{args.command}'", field="experiment.kind"
        )
    updates = {
        key: value
        for key, value in (("seed", args.seed), ("out", args.out), ("threads", args.threads))
        if value is not None
    }
    if updates:
        try:
            experiment = config.experiment.model_validate({**config.experiment.model_dump(), **updates})
        except ValidationError as e:
            error = e.errors()[0]
            raise ConfigInvalid(error["msg"], field=f"--{error['loc'][0]}") from e
        config = config.model_copy(update={"experiment": experiment})
    record = run(config)
    for key, value in record.estimates.items():
        print(f"{key} = {value}")
    return EXIT_OK


def _replay(args: argparse.Namespace) -> int:
    path = Path(args.record)
    record = load_record(path)
    directory = Path(args.out) if args.out else (path if path.is_dir() else path.parent) / "replay"
    replay(record, directory, seed=args.seed)
    print(f"replay ok: {len(record.estimates)} estimates reproduced")
    return EXIT_OK


def _check(scale: float) -> int:
    results = run_acceptance(scale)
    for result in results:
        print(f"[{'PASS' if result.passed else 'FAIL'}] {result.name}: {result.detail}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.check:
            return _check(args.scale)
        if args.command is None:
            parser.print_help()
            return EXIT_CONFIG
        if args.command == "replay":
            return _replay(args)
        return _run_experiment(args)
    except ConfigInvalid as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except CoverLabError as e:
        frame = traceback.extract_tb(e.__traceback__)[-1]
        logger.error(f"{type(e).__name__} in {Path(frame.filename).parent.name}/{Path(frame.filename).name}: {e}")
        return EXIT_RUNTIME
    except Exception as e:
        logger.exception(f"Unexpected error in {args.command}: {e}")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
