"""Value iteration and policy extraction."""

from __future__ import annotations

import time
from typing import Callable, Optional

import numpy as np

from changeaccel.config import settings
from changeaccel.exceptions import ConvergenceError
from changeaccel.dp.bellman import BellmanOperator
from changeaccel.dp.grid import GridKind, build_grid
from changeaccel.dp.policy import STOP, DPPolicy, ValueFunction, model_signature
from changeaccel.model.changepoint import ChangePointModel
from changeaccel.model.responses import ResponseModel
from changeaccel.utils.logger import get_logger

logger = get_logger(__name__)


def bellman_apply(
    J: ValueFunction,
    responses: ResponseModel,
    change_point: ChangePointModel,
    c: Optional[float] = None,
) -> ValueFunction:
    """Apply T_c once to ``J`` on its own grid.

    Raises:
        UnsupportedModelError: For history-dependent change-point models
        UnsupportedResponseError: For continuous response families
    """
    c = J.c if c is None else c
    operator = BellmanOperator(J.grid, c, responses, change_point)
    return ValueFunction(J.grid, operator(J.values), c)


def effective_tolerance(c: float, tol: Optional[float] = None) -> float:
    """min(tol, DP_RELATIVE_TOL * c)."""
    tol = settings.DP_TOL if tol is None else tol
    return min(tol, settings.DP_RELATIVE_TOL * c)


def extract_policy(operator: BellmanOperator, values: np.ndarray, tol: float) -> tuple[np.ndarray, float]:
    """Read the actions and b_c off a converged value function.

    Stop where 1 - z <= J(z) + tol; elsewhere take the treatment with the
    smallest continuation cost, the lowest label on ties.
    """
    q = operator.continuation(values)
    actions = np.argmin(q, axis=0).astype(np.int64) + 1
    stop = operator.stop_cost <= values + tol
    actions[stop] = STOP
    b_c = float(operator.grid[np.flatnonzero(stop)[0]]) if stop.any() else 1.0
    return actions, b_c


def value_iterate(
    c: float,
    responses: ResponseModel,
    change_point: ChangePointModel,
    grid_size: Optional[int] = None,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    grid: GridKind = "tail",
    on_iteration: Optional[Callable[[int, np.ndarray], None]] = None,
) -> tuple[ValueFunction, DPPolicy]:
    """Iterate T_c from J = 0 to its fixed point and extract the policy.

    Args:
        c: Cost per observation (> 0)
        responses: Finite-support response model
        change_point: Markovian change-point model
        grid_size: Uniform cells G (default settings.DP_GRID_SIZE)
        tol: Sup-norm tolerance; the effective tolerance is
            min(tol, DP_RELATIVE_TOL * c)
        max_iter: Iteration cap (default settings.DP_MAX_ITER)
        grid: ``tail`` (uniform plus log-odds tails) or ``uniform``
        on_iteration: Called with (iteration, values) after every update

    Returns:
        (J*, policy)

    Raises:
        ConvergenceError: If the cap is reached first
    """
    grid_size = grid_size or settings.DP_GRID_SIZE
    max_iter = max_iter or settings.DP_MAX_ITER
    eff_tol = effective_tolerance(c, tol)
    nodes = build_grid(grid_size, grid)
    operator = BellmanOperator(nodes, c, responses, change_point)

    started = time.perf_counter()
    values = np.zeros_like(nodes)
    residual = float("inf")
    iteration = 0
    while residual >= eff_tol:
        if iteration >= max_iter:
            logger.error("value_iteration_failed", c=c, iterations=iteration, residual=residual)
            raise ConvergenceError(residual, iteration, eff_tol)
        updated = operator(values)
        residual = float(np.max(np.abs(updated - values)))
        values = updated
        iteration += 1
        if on_iteration is not None:
            on_iteration(iteration, values)

    continuation = change_point.fastest_treatment()
    actions, b_c = extract_policy(operator, values, eff_tol)
    policy = DPPolicy(
        grid=nodes,
        actions=actions,
        values=values,
        b_c=b_c,
        c=c,
        prior=change_point.prior,
        signature=model_signature(responses, change_point),
        continuation=continuation,
        grid_kind=grid,
        grid_size=grid_size,
        tol=eff_tol,
        iterations=iteration,
        residual=residual,
    )
    logger.info(
        "value_iteration_converged",
        c=c,
        iterations=iteration,
        residual=residual,
        b_c=b_c,
        grid_points=len(nodes),
        elapsed=round(time.perf_counter() - started, 3),
    )
    return ValueFunction(nodes, values, c), policy
