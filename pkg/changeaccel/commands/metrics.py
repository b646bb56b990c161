"""`metrics`: treatment quality of a model."""

import argparse

from changeaccel.commands.common import load_model, output_dir, print_table, shared_parser
from changeaccel.evaluation.storage import ResultStorage
from changeaccel.procedures.quality import quality_metrics


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser(
        "metrics",
        parents=[shared_parser(seed_required=False)],
        help="Print I, J, D, lambda and zeta per treatment",
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    bundle = load_model(args)
    quality = quality_metrics(bundle.responses, bundle.change_point)

    print_table(
        ["x", "I_x", "J_x", "D_x", "lambda_x", "zeta_x", "p_x"],
        [[m.treatment, m.I, m.J, m.D, m.lam, m.zeta, m.p] for m in quality.treatments],
    )
    print(f"lambda_* = {quality.lambda_star:.6g}")

    ResultStorage(output_dir(args)).save_metrics(quality)
    return 0
