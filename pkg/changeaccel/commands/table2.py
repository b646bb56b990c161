"""`table2`: all procedures at the four study levels."""

import argparse

from changeaccel.commands.common import load_model, output_dir, print_table, shared_parser
from changeaccel.config import settings
from changeaccel.evaluation.frontier import reproduce_table2
from changeaccel.evaluation.storage import ResultStorage

COLUMNS = ["procedure", "alpha", "err", "err_se", "err_indicator", "ess", "ess_se", "e_n"]


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("table2", parents=[shared_parser()], help="Reproduce the simulation-study table")
    parser.add_argument(
        "--policy-dir",
        default=None,
        help="Directory holding the dp-calibrate policy files (default: --out)",
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    bundle = load_model(args)
    out = output_dir(args)
    reps = args.reps or settings.DEFAULT_REPS

    reports = reproduce_table2(
        bundle.responses,
        bundle.change_point,
        reps=reps,
        seed=args.seed,
        policy_dir=args.policy_dir or out,
        workers=args.threads,
    )

    print_table(COLUMNS, [[getattr(r, c) for c in COLUMNS] for r in reports])
    ResultStorage(out).save_table2(reports, seed=args.seed, reps=reps)
    return 0
