"""Posterior odds Gamma_t that the change has already happened.

All arithmetic is in log space; ``-inf`` encodes Gamma = 0, which is the
starting point whenever the prior is zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import expit

from changeaccel.exceptions import InvalidArgumentError
from changeaccel.model.changepoint import ChangePointModel
from changeaccel.model.engine import TrialEngine
from changeaccel.model.responses import ResponseModel

NEG_INF = -math.inf


def prior_log_odds(prior: float) -> float:
    """log(pi_0 / (1 - pi_0)), ``-inf`` for a zero prior."""
    if prior <= 0.0:
        return NEG_INF
    return math.log(prior) - math.log1p(-prior)


def _advance(log_odds: float, pi: float, log_lr: float) -> float:
    # log(Gamma + pi) + log Lambda - log(1 - pi)
    if pi <= 0.0:
        head = log_odds
    elif log_odds == NEG_INF:
        head = math.log(pi)
    else:
        head = float(np.logaddexp(log_odds, math.log(pi)))
    return head + log_lr - math.log1p(-pi)


@dataclass(frozen=True, slots=True)
class PosteriorState:
    """log Gamma_t at time t."""

    log_odds: float
    t: int = 0

    @classmethod
    def initial(cls, prior: float) -> "PosteriorState":
        return cls(prior_log_odds(prior), 0)

    @property
    def odds(self) -> float:
        return math.exp(self.log_odds) if self.log_odds < 709.0 else math.inf


def update_odds(state: PosteriorState, pi: float, log_lr: float) -> PosteriorState:
    """Advance the odds by one observation.

    Gamma_t = (Gamma_{t-1} + Pi_t) * Lambda_t / (1 - Pi_t)

    Args:
        state: Odds at t-1
        pi: Transition probability Pi_t in [0, 1)
        log_lr: log Lambda_t = log(g(Y_t) / f(Y_t)) for the assigned treatment

    Returns:
        Odds at t

    Raises:
        InvalidArgumentError: If pi is 1 (or outside [0, 1)) or log_lr is not finite
    """
    if not 0.0 <= pi < 1.0:
        raise InvalidArgumentError(f"transition probability must lie in [0, 1), got {pi!r}")
    if not math.isfinite(log_lr):
        raise InvalidArgumentError(f"log likelihood ratio must be finite, got {log_lr!r}")
    return PosteriorState(_advance(state.log_odds, pi, log_lr), state.t + 1)


def brute_force_posterior(
    change_point: ChangePointModel,
    responses: ResponseModel,
    treatments: Sequence[int],
    observations: Sequence[float],
) -> float:
    """Gamma_t by direct summation over candidate change times.

    Gamma_t = sum_{s=0}^{t} Pi_s * prod_{j=s}^{t} Lambda_j / (1 - Pi_j)

    with Pi_0 = pi_0 and Lambda_0 = 1. Independent of the recursion in
    ``update_odds``; meant for short histories.
    """
    if len(treatments) != len(observations):
        raise InvalidArgumentError("treatment and response histories differ in length")
    t = len(treatments)
    pis = [change_point.prior] + [change_point.transition(treatments[:j]) for j in range(1, t + 1)]
    ratios = [1.0] + [
        math.exp(responses.log_density_ratio(x, y)) for x, y in zip(treatments, observations)
    ]
    factors = [ratios[j] / (1.0 - pis[j]) for j in range(t + 1)]
    return math.fsum(pis[s] * math.prod(factors[s:]) for s in range(t + 1))


def posterior_probability(state: PosteriorState) -> float:
    """Gamma / (1 + Gamma), the posterior probability that the change has happened."""
    return float(expit(state.log_odds))


def false_alarm_probability(state: PosteriorState) -> float:
    """1 / (1 + Gamma), the posterior probability that it has not."""
    return float(expit(-state.log_odds))


class OddsFilter:
    """Runs a TrialEngine and keeps its posterior odds current.

    Transition probabilities come from the engine, likelihood ratios from
    its response model.
    """

    def __init__(self, engine: TrialEngine):
        self.engine = engine
        self.log_odds = prior_log_odds(engine.change_point.prior)

    @property
    def t(self) -> int:
        return self.engine.t

    @property
    def state(self) -> PosteriorState:
        return PosteriorState(self.log_odds, self.engine.t)

    def step(self, treatment: int) -> tuple[float, float]:
        """Assign ``treatment``, observe, and update.

        Returns:
            (response, log likelihood ratio log(g/f) of the response)
        """
        y, _ = self.engine.step(treatment)
        pi = self.engine.last_transition
        if pi >= 1.0:
            raise InvalidArgumentError("transition probability 1 makes the posterior odds infinite")
        log_lr = self.engine.responses.log_density_ratio(treatment, y)
        self.log_odds = _advance(self.log_odds, pi, log_lr)
        return y, log_lr
