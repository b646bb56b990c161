"""Aggregate Monte Carlo statistics of one procedure."""

from __future__ import annotations

import math
from typing import Optional, Sequence

from pydantic import BaseModel, Field
from scipy.special import expit

from changeaccel.posterior.estimators import Estimate, mean_and_se

CYCLE_TAIL_POINTS = (1, 2, 3)


class EvalReport(BaseModel):
    """Operating characteristics of a procedure estimated from ``reps`` replications."""

    procedure: str
    alpha: Optional[float] = None
    reps: int
    seed: int

    err: float = Field(..., description="Mean of 1/(1+Gamma_T)")
    err_se: float
    err_indicator: float = Field(..., description="Fraction of runs with T < Theta")
    err_indicator_se: float
    ess: float = Field(..., description="Mean stopping time")
    ess_se: float

    mean_theta: float = Field(..., description="Mean change time (inf if the change may never happen)")
    mean_delay: float = Field(..., description="Mean of (T - Theta)+ over runs with a finite change time")
    mean_early: float = Field(..., description="Mean of (T - Theta)- (inf if the change may never happen)")
    never_changed: int = Field(default=0, description="Runs whose change time is infinite")

    e_n: Optional[float] = Field(default=None, description="Mean cycle count, two-stage procedure only")
    e_n_se: Optional[float] = None
    cycle_tail: list[float] = Field(default_factory=list, description="P(N > n) for n = 1, 2, 3")
    cycle_tail_se: list[float] = Field(default_factory=list)

    wall_time: float = Field(default=0.0, description="Seconds; never written to result files")
    terminal_log_odds: Optional[list[float]] = None

    def decomposition_gap(self) -> float:
        """|ESS - (E Theta + E(T-Theta)+ - E(T-Theta)-)|; NaN when some change time is infinite."""
        if self.never_changed:
            return math.nan
        return abs(self.ess - (self.mean_theta + self.mean_delay - self.mean_early))


def aggregate(
    procedure: str,
    seed: int,
    stopping_times: Sequence[int],
    change_times: Sequence[Optional[int]],
    log_odds: Sequence[float],
    false_alarms: Sequence[bool],
    cycles: Optional[Sequence[int]] = None,
    alpha: Optional[float] = None,
    keep_odds: bool = False,
) -> EvalReport:
    """Build an EvalReport from per-replication records listed in replication order."""
    n = len(stopping_times)
    err = mean_and_se([float(expit(-g)) for g in log_odds])
    indicator = mean_and_se([1.0 if flag else 0.0 for flag in false_alarms])
    ess = mean_and_se([float(t) for t in stopping_times])

    finite = [(t, theta) for t, theta in zip(stopping_times, change_times) if theta is not None]
    never = n - len(finite)
    delay = math.fsum(max(t - theta, 0) for t, theta in finite) / len(finite) if finite else 0.0
    if never:
        mean_theta = mean_early = math.inf
    else:
        mean_theta = math.fsum(theta for _, theta in finite) / n
        mean_early = math.fsum(max(theta - t, 0) for t, theta in finite) / n

    e_n: Optional[Estimate] = None
    tail: list[Estimate] = []
    if cycles is not None:
        e_n = mean_and_se([float(k) for k in cycles])
        tail = [mean_and_se([1.0 if k > m else 0.0 for k in cycles]) for m in CYCLE_TAIL_POINTS]

    return EvalReport(
        procedure=procedure,
        alpha=alpha,
        reps=n,
        seed=seed,
        err=err.estimate,
        err_se=err.se,
        err_indicator=indicator.estimate,
        err_indicator_se=indicator.se,
        ess=ess.estimate,
        ess_se=ess.se,
        mean_theta=mean_theta,
        mean_delay=delay,
        mean_early=mean_early,
        never_changed=never,
        e_n=e_n.estimate if e_n else None,
        e_n_se=e_n.se if e_n else None,
        cycle_tail=[e.estimate for e in tail],
        cycle_tail_se=[e.se for e in tail],
        terminal_log_odds=list(log_odds) if keep_odds else None,
    )
