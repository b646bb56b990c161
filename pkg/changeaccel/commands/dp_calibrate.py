"""`dp-calibrate`: solve the DP for the cost matching a level."""

import argparse

from changeaccel.commands.common import float_list, load_model, output_dir, print_table, shared_parser
from changeaccel.dp.calibrate import calibrate_c
from changeaccel.dp.policy import save_policy
from changeaccel.evaluation.frontier import policy_filename
from changeaccel.evaluation.storage import ResultStorage
from changeaccel.exceptions import CalibrationError
from changeaccel.utils.logger import get_logger

logger = get_logger(__name__)


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser(
        "dp-calibrate",
        parents=[shared_parser()],
        help="Pick the cost c whose optimal policy meets the level and save the policy",
    )
    parser.add_argument("--alpha", type=float, required=True, help="False-alarm level")
    parser.add_argument("--c-grid", default=None, help="Comma-separated costs (default a*10^-b, a=1..9, b=2..9)")
    parser.add_argument("--grid", choices=["tail", "uniform"], default="tail", help="DP grid kind")
    parser.add_argument("--grid-size", type=int, default=None, help="Uniform grid cells G")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    bundle = load_model(args)
    storage = ResultStorage(output_dir(args))
    calibration_file = f"calibration-alpha-{args.alpha!r}.csv"

    try:
        c, policy, table = calibrate_c(
            args.alpha,
            bundle.responses,
            bundle.change_point,
            c_grid=float_list(args.c_grid, "--c-grid"),
            reps=args.reps,
            seed=args.seed,
            workers=args.threads,
            grid_size=args.grid_size,
            grid=args.grid,
        )
    except CalibrationError as e:
        if e.table:
            storage.save_calibration(e.table, seed=args.seed, reps=e.table[0].reps, filename=calibration_file)
        raise

    storage.save_calibration(table, seed=args.seed, reps=table[0].reps, filename=calibration_file)
    path = save_policy(policy, output_dir(args) / policy_filename(args.alpha))

    print_table(
        ["c", "b_c", "err", "err_se", "ess", "ess_se"],
        [[r.c, r.b_c, r.err_estimate, r.err_se, r.ess, r.ess_se] for r in table],
    )
    print(f"selected c = {c!r}")
    print(path)
    return 0
