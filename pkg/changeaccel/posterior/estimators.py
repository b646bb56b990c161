"""Monte Carlo estimators of the false-alarm probability."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence, Union

from changeaccel.exceptions import InvalidArgumentError


class Estimate(NamedTuple):
    """Sample mean with its standard error."""

    estimate: float
    se: float


def mean_and_se(values: Sequence[float]) -> Estimate:
    """Compensated sample mean and standard error (0 for a single value)."""
    n = len(values)
    if n == 0:
        raise InvalidArgumentError("cannot average an empty sample")
    mean = math.fsum(values) / n
    if n == 1:
        return Estimate(mean, 0.0)
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return Estimate(mean, math.sqrt(var / n))


def false_alarm_estimate(terminal_odds: Iterable[float]) -> Estimate:
    """Estimate P(T < Theta) as the mean of 1 / (1 + Gamma_T).

    Each term is the posterior probability of no change at the stopping
    time, so the estimator has far less variance than counting false
    alarms when the error is small.

    Raises:
        InvalidArgumentError: On an empty sample or negative odds
    """
    weights = []
    for gamma in terminal_odds:
        if not gamma >= 0.0:
            raise InvalidArgumentError(f"terminal odds must be non-negative, got {gamma!r}")
        weights.append(1.0 / (1.0 + gamma))
    return mean_and_se(weights)


def indicator_false_alarm_estimate(false_alarms: Iterable[bool]) -> Estimate:
    """Estimate P(T < Theta) as the fraction of runs that stopped early."""
    flags = [1.0 if flag else 0.0 for flag in false_alarms]
    return mean_and_se(flags)


def write_terminal_odds_csv(
    path: Union[str, Path],
    log_odds: Sequence[float],
    seed: int,
    procedure: str = "",
) -> Path:
    """Write one row per replication (index, log Gamma_T, 1/(1+Gamma_T)) for audit."""
    from changeaccel.evaluation.storage import ResultStorage

    path = Path(path)
    storage = ResultStorage(path.parent)
    storage.save_terminal_odds(log_odds, seed=seed, procedure=procedure, filename=path.name)
    return path
