"""Choosing the observation cost c that meets a false-alarm level."""

from __future__ import annotations

import math
from dataclasses import replace
from typing import TYPE_CHECKING, Optional, Sequence

from pydantic import BaseModel

from changeaccel.config import settings
from changeaccel.dp.grid import GridKind
from changeaccel.dp.policy import DPPolicy
from changeaccel.dp.solver import value_iterate
from changeaccel.exceptions import CalibrationError
from changeaccel.model.changepoint import ChangePointModel
from changeaccel.model.responses import ResponseModel
from changeaccel.posterior.estimators import Estimate
from changeaccel.utils.logger import get_logger
from changeaccel.utils.validators import require_probability

if TYPE_CHECKING:
    from changeaccel.evaluation.report import EvalReport

logger = get_logger(__name__)


class CalibrationRow(BaseModel):
    """Screening result for one grid cost."""

    c: float
    b_c: float
    err_estimate: float
    err_se: float
    ess: float
    ess_se: float
    reps: int
    seed: int


def default_c_grid() -> list[float]:
    """{a * 10^-b : a = 1..9, b = 2..9}, ascending."""
    return sorted(float(f"{a}e-{b}") for b in range(2, 10) for a in range(1, 10))


def simulated_cost(c: float, report: "EvalReport") -> Estimate:
    """c * ESS + Err, the simulated Bayes risk of a procedure at cost c."""
    return Estimate(
        c * report.ess + report.err,
        math.hypot(c * report.ess_se, report.err_se),
    )


def calibrate_c(
    alpha: float,
    responses: ResponseModel,
    change_point: ChangePointModel,
    c_grid: Optional[Sequence[float]] = None,
    reps: Optional[int] = None,
    seed: int = 0,
    workers: Optional[int] = None,
    grid_size: Optional[int] = None,
    grid: GridKind = "tail",
) -> tuple[float, DPPolicy, list[CalibrationRow]]:
    """Pick the grid cost whose policy has the largest Err not above alpha.

    Args:
        alpha: Target level in (0, 1]
        responses: Finite-support response model
        change_point: Markovian change-point model
        c_grid: Candidate costs (default ``default_c_grid()``)
        reps: Screening replications per cost (default settings.SCREEN_REPS)
        seed: Base seed, shared by every cost
        workers: Evaluation worker processes
        grid_size: DP grid size
        grid: DP grid kind

    Returns:
        (c, policy solved at c and tagged with alpha, full calibration table)

    Raises:
        CalibrationError: If no cost reaches Err <= alpha
    """
    from changeaccel.evaluation.runner import evaluate
    from changeaccel.procedures.specs import DPSpec

    alpha = require_probability(alpha, "alpha", open_low=True)
    costs = sorted(c_grid) if c_grid is not None else default_c_grid()
    reps = reps or settings.SCREEN_REPS
    logger.info("calibration_started", alpha=alpha, costs=len(costs), reps=reps, seed=seed)

    table: list[CalibrationRow] = []
    policies: list[DPPolicy] = []
    for c in costs:
        _, policy = value_iterate(c, responses, change_point, grid_size=grid_size, grid=grid)
        report = evaluate(DPSpec(policy=policy), responses, change_point, reps=reps, seed=seed, workers=workers)
        table.append(
            CalibrationRow(
                c=c,
                b_c=policy.b_c,
                err_estimate=report.err,
                err_se=report.err_se,
                ess=report.ess,
                ess_se=report.ess_se,
                reps=reps,
                seed=seed,
            )
        )
        policies.append(policy)
        logger.info("calibration_point", c=c, b_c=policy.b_c, err=report.err, ess=report.ess)

    best: Optional[int] = None
    for k, row in enumerate(table):
        if row.err_estimate <= alpha and (best is None or row.err_estimate >= table[best].err_estimate):
            best = k
    if best is None:
        logger.error("calibration_failed", alpha=alpha, smallest_c=costs[0])
        raise CalibrationError(alpha, table)

    chosen = table[best]
    logger.info("calibration_finished", alpha=alpha, c=chosen.c, err=chosen.err_estimate, ess=chosen.ess)
    return chosen.c, replace(policies[best], alpha=alpha), table
