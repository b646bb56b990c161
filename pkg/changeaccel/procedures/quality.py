"""Treatment quality: detection power, expected change time and their extremes."""

from __future__ import annotations

import math
from typing import Callable, Optional

from pydantic import BaseModel, Field

from changeaccel.config import settings
from changeaccel.model.changepoint import ChangePointModel
from changeaccel.model.responses import ResponseModel, kl_divergences
from changeaccel.utils.logger import get_logger
from changeaccel.utils.validators import require_treatment

logger = get_logger(__name__)


class TreatmentMetrics(BaseModel):
    """Quality numbers of a single treatment (all in nats or steps)."""

    treatment: int = Field(..., description="1-based treatment label")
    I: float = Field(..., description="KL(g || f)")
    J: float = Field(..., description="KL(f || g)")
    I_se: float = 0.0
    J_se: float = 0.0
    p: float = Field(..., description="Limiting transition probability")
    D: float = Field(..., description="Detection power I + |log(1 - p)|")
    lam: float = Field(..., description="Expected change time under static assignment")
    zeta: float = Field(..., description="Smallest transition probability")


class TreatmentQuality(BaseModel):
    """Quality numbers of every treatment plus the model-level lambda_*."""

    treatments: list[TreatmentMetrics]
    lambda_star: float = Field(..., description="Expected change time under maximal transitions")

    def __getitem__(self, treatment: int) -> TreatmentMetrics:
        require_treatment(treatment, len(self.treatments))
        return self.treatments[treatment - 1]

    @property
    def n_treatments(self) -> int:
        return len(self.treatments)

    @property
    def D_max(self) -> float:
        """D_K, the largest detection power."""
        return max(m.D for m in self.treatments)


def _expected_change_time(prior: float, transition: Callable[[int], float], cutoff: float) -> float:
    """sum_{t>=0} prod_{s=0}^{t} (1 - pi_s), truncated once the survival product drops below cutoff."""
    survival = 1.0 - prior
    terms = [survival]
    t = 0
    while survival >= cutoff:
        t += 1
        if t > settings.MAX_HORIZON:
            return math.inf
        survival *= 1.0 - transition(t)
        terms.append(survival)
    return math.fsum(terms)


def _static_lambda(change_point: ChangePointModel, treatment: int, cutoff: float) -> float:
    if change_point.limit(treatment) == 0.0:
        return math.inf
    if change_point.is_markovian:
        return (1.0 - change_point.prior) / change_point.limit(treatment)

    history: list[int] = []

    def transition(t: int) -> float:
        history.append(treatment)
        return change_point.transition(history)

    return _expected_change_time(change_point.prior, transition, cutoff)


def _lambda_star(change_point: ChangePointModel, cutoff: float) -> float:
    if change_point.supremum() == 0.0:
        return math.inf
    if change_point.is_markovian:
        return (1.0 - change_point.prior) / change_point.supremum()
    return _expected_change_time(change_point.prior, change_point.max_transition, cutoff)


def quality_metrics(
    responses: ResponseModel,
    change_point: ChangePointModel,
    survival_cutoff: Optional[float] = None,
) -> TreatmentQuality:
    """Compute I, J, D, lambda, zeta for every treatment and lambda_*.

    Args:
        responses: Response model
        change_point: Change-point model with the same number of treatments
        survival_cutoff: Series truncation for history-dependent models
            (defaults to settings.LAMBDA_SURVIVAL_CUTOFF)

    Returns:
        TreatmentQuality; lambda is infinite for treatments that cannot
        trigger the change
    """
    cutoff = survival_cutoff or settings.LAMBDA_SURVIVAL_CUTOFF
    metrics = []
    for x in range(1, responses.n_treatments + 1):
        kl = kl_divergences(responses, x)
        p = change_point.limit(x)
        metrics.append(
            TreatmentMetrics(
                treatment=x,
                I=kl.I,
                J=kl.J,
                I_se=kl.I_se,
                J_se=kl.J_se,
                p=p,
                D=kl.I + abs(math.log1p(-p)) if p < 1.0 else math.inf,
                lam=_static_lambda(change_point, x, cutoff),
                zeta=change_point.zeta(x),
            )
        )
    quality = TreatmentQuality(treatments=metrics, lambda_star=_lambda_star(change_point, cutoff))
    logger.debug("quality_computed", D=[m.D for m in metrics], lambda_star=quality.lambda_star)
    return quality


def fastest_treatment(quality: TreatmentQuality) -> int:
    """Treatment with the smallest expected change time (lowest label on ties)."""
    lams = [m.lam for m in quality.treatments]
    return lams.index(min(lams)) + 1


def most_informative_treatment(quality: TreatmentQuality) -> int:
    """Treatment with the largest detection power D (lowest label on ties)."""
    powers = [m.D for m in quality.treatments]
    return powers.index(max(powers)) + 1
