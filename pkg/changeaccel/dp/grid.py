"""Discretization of the posterior-probability state space [0, 1]."""

from typing import Literal, Optional

import numpy as np
from scipy.special import expit

from changeaccel.config import settings
from changeaccel.exceptions import InvalidArgumentError

GridKind = Literal["tail", "uniform"]


def build_grid(
    size: Optional[int] = None,
    kind: GridKind = "tail",
    tail_points: Optional[int] = None,
    tail_log_odds: Optional[float] = None,
) -> np.ndarray:
    """Return sorted grid nodes on [0, 1], always including 0, 1 and every k/size.

    ``kind="tail"`` adds nodes evenly spaced in log-odds up to
    +-tail_log_odds inside the first and last uniform cells, where the
    stopping boundary for small error levels lives.

    Args:
        size: Number of uniform cells G (default settings.DP_GRID_SIZE)
        kind: ``tail`` or ``uniform``
        tail_points: Log-odds nodes (default settings.DP_TAIL_POINTS)
        tail_log_odds: Largest absolute log-odds (default settings.DP_TAIL_LOG_ODDS)
    """
    size = size or settings.DP_GRID_SIZE
    if size < 2:
        raise InvalidArgumentError(f"grid size must be at least 2, got {size}")
    uniform = np.arange(size + 1, dtype=float) / size
    if kind == "uniform":
        return uniform
    if kind != "tail":
        raise InvalidArgumentError(f"unknown grid kind {kind!r}")

    points = tail_points if tail_points is not None else settings.DP_TAIL_POINTS
    reach = tail_log_odds if tail_log_odds is not None else settings.DP_TAIL_LOG_ODDS
    tail = expit(np.linspace(-reach, reach, points)) if points > 0 else np.empty(0)
    edge = 1.0 / size
    tail = tail[(tail < edge) | (tail > 1.0 - edge)]
    grid = np.unique(np.concatenate([uniform, tail]))
    return grid[(grid >= 0.0) & (grid <= 1.0)]
