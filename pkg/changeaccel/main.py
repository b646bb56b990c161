"""Command-line entrypoint."""

import argparse
import sys
import warnings
from typing import Optional, Sequence

from pydantic import ValidationError

from changeaccel import __version__
from changeaccel.commands import COMMANDS
from changeaccel.config import settings
from changeaccel.exceptions import CONFIG_EXIT_CODE, RUNTIME_EXIT_CODE, ChangeAccelError
from changeaccel.utils.logger import configure_logging, get_logger


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="changeaccel",
        description="Change acceleration and detection: simulation, calibration and evaluation",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=settings.LOG_LEVEL, help="DEBUG, INFO, WARNING or ERROR")
    parser.add_argument("--log-format", choices=["console", "json"], default=settings.LOG_FORMAT)

    # Register subcommands
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="command")
    for command in COMMANDS:
        command.add_parser(subparsers)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand and return its exit status.

    0 on success, 2 for configuration errors, 3 for runtime errors.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level, args.log_format)
    logger = get_logger(__name__)
    warnings.simplefilter("default")

    try:
        return args.handler(args)
    except ChangeAccelError as e:
        logger.debug("command_failed", command=args.command, error=str(e), exc_info=True)
        print(f"changeaccel {args.command}: error: {e}", file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        print(f"changeaccel {args.command}: error: {e}", file=sys.stderr)
        return CONFIG_EXIT_CODE
    except Exception as e:
        logger.error("command_crashed", command=args.command, error=str(e), exc_info=True)
        print(f"changeaccel {args.command}: error: {e}", file=sys.stderr)
        return RUNTIME_EXIT_CODE


if __name__ == "__main__":
    sys.exit(main())
