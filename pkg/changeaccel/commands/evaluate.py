"""`eval`: evaluate one procedure at one level."""

import argparse

from changeaccel.commands.common import load_model, output_dir, print_table, shared_parser
from changeaccel.evaluation.runner import evaluate
from changeaccel.evaluation.storage import ResultStorage
from changeaccel.exceptions import ConfigError
from changeaccel.procedures.quality import quality_metrics
from changeaccel.procedures.specs import parse_procedure, spec_from_entry

REPORT_COLUMNS = ["procedure", "alpha", "err", "err_se", "err_indicator", "ess", "ess_se", "e_n", "reps"]


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("eval", parents=[shared_parser()], help="Evaluate a procedure by simulation")
    parser.add_argument(
        "--proc",
        default=None,
        help="proposed:i,j | static:x | dp:<policy file> (default: the model file's procedure block)",
    )
    parser.add_argument("--alpha", type=float, default=None, help="Level used to calibrate thresholds")
    parser.add_argument("--keep-odds", action="store_true", help="Also write terminal_odds.csv")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    bundle = load_model(args)
    quality = quality_metrics(bundle.responses, bundle.change_point)

    if args.proc is not None:
        spec = parse_procedure(args.proc, alpha=args.alpha, quality=quality)
    elif bundle.procedure is not None:
        base_dir = bundle.source.parent if bundle.source else None
        spec = spec_from_entry(bundle.procedure, quality, base_dir)
    else:
        raise ConfigError("no --proc given and the model file has no procedure block", key="--proc")

    report = evaluate(
        spec,
        bundle.responses,
        bundle.change_point,
        reps=args.reps,
        seed=args.seed,
        workers=args.threads,
        keep_odds=args.keep_odds,
    )

    print_table(REPORT_COLUMNS, [[getattr(report, c) for c in REPORT_COLUMNS]])
    storage = ResultStorage(output_dir(args))
    storage.save_table2([report], seed=args.seed, reps=report.reps, filename="eval.csv")
    if args.keep_odds:
        storage.save_terminal_odds(report.terminal_log_odds, seed=args.seed, procedure=report.procedure)
    return 0
