"""Helpers shared by the subcommands."""

import argparse
import math
from pathlib import Path
from typing import Optional, Sequence

from changeaccel.config import settings
from changeaccel.exceptions import ConfigError
from changeaccel.model.loader import ModelBundle, load_model_file


def shared_parser(seed_required: bool = True) -> argparse.ArgumentParser:
    """Parent parser with the flags every subcommand accepts."""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--model", required=True, help="Model file (YAML)")
    parser.add_argument("--seed", type=int, required=seed_required, help="Base seed (non-negative)")
    parser.add_argument("--reps", type=int, default=None, help="Replications per cell")
    parser.add_argument("--out", default=None, help=f"Output directory (default {settings.OUTPUT_DIR})")
    parser.add_argument("--threads", type=int, default=None, help="Worker processes; results do not depend on it")
    return parser


def load_model(args: argparse.Namespace) -> ModelBundle:
    bundle = load_model_file(args.model)
    if getattr(args, "seed", None) is not None and args.seed < 0:
        raise ConfigError(f"seed must be non-negative, got {args.seed}", key="--seed")
    if args.reps is not None and args.reps < 1:
        raise ConfigError(f"reps must be positive, got {args.reps}", key="--reps")
    if args.threads is not None and args.threads < 1:
        raise ConfigError(f"threads must be positive, got {args.threads}", key="--threads")
    return bundle


def output_dir(args: argparse.Namespace) -> Path:
    return Path(args.out or settings.OUTPUT_DIR)


def float_list(text: Optional[str], key: str) -> Optional[list[float]]:
    """Parse ``1e-3,1e-4`` into floats."""
    if text is None:
        return None
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}", key=key) from None
    if not values:
        raise ConfigError("list is empty", key=key)
    return values


def _format(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        return f"{value:.4g}"
    return str(value)


def print_table(headers: Sequence[str], rows: Sequence[Sequence]) -> None:
    """Print a plain aligned table to stdout."""
    cells = [[_format(v) for v in row] for row in rows]
    widths = [max([len(h)] + [len(row[i]) for row in cells]) for i, h in enumerate(headers)]
    print("  ".join(h.rjust(w) for h, w in zip(headers, widths)))
    print("  ".join("-" * w for w in widths))
    for row in cells:
        print("  ".join(v.rjust(w) for v, w in zip(row, widths)))
