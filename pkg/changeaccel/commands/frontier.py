"""`frontier`: Err against ESS over a threshold sweep."""

import argparse

from changeaccel.commands.common import float_list, load_model, output_dir, print_table, shared_parser
from changeaccel.config import settings
from changeaccel.evaluation.frontier import DEFAULT_ALPHA_SWEEP, DEFAULT_COST_SWEEP, frontier
from changeaccel.evaluation.storage import ResultStorage

COLUMNS = ["procedure", "err", "neg_log10_err", "ess", "lower_bound", "ess_normalized"]


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("frontier", parents=[shared_parser()], help="Trace an error/sample-size frontier")
    parser.add_argument("--proc", required=True, help="proposed:i,j | static:x | dp")
    parser.add_argument(
        "--sweep",
        default=None,
        help="Comma-separated levels (costs for dp); defaults to a built-in sweep",
    )
    parser.add_argument("--file", default="frontier.csv", help="Output file name inside --out")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    bundle = load_model(args)
    sweep = float_list(args.sweep, "--sweep")
    if sweep is None:
        sweep = list(DEFAULT_COST_SWEEP if args.proc == "dp" else DEFAULT_ALPHA_SWEEP)
    reps = args.reps or settings.DEFAULT_REPS

    points = frontier(
        args.proc,
        sweep,
        bundle.responses,
        bundle.change_point,
        reps=reps,
        seed=args.seed,
        workers=args.threads,
    )

    print_table(COLUMNS, [[getattr(p, c) for c in COLUMNS] for p in points])
    ResultStorage(output_dir(args)).save_frontier(points, seed=args.seed, reps=reps, filename=args.file)
    return 0
