"""Shiryaev stopping under a static assignment."""

import math

from changeaccel.model.engine import TrialEngine
from changeaccel.model.outcome import TrialOutcome
from changeaccel.posterior.odds import OddsFilter
from changeaccel.utils.validators import require_positive, require_treatment


def shiryaev_first_crossing(engine: TrialEngine, treatment: int, b: float) -> TrialOutcome:
    """Assign ``treatment`` until the posterior odds reach ``b``.

    Stops at T = 0 when the prior odds already reach b. A tie with the
    threshold counts as a crossing.

    Args:
        engine: Fresh replication
        treatment: Treatment assigned at every step
        b: Odds threshold

    Returns:
        TrialOutcome with T, Theta, log Gamma_T and the false-alarm flag
    """
    require_positive(b, "b")
    require_treatment(treatment, engine.n_treatments)
    log_b = math.log(b)

    odds = OddsFilter(engine)
    while odds.log_odds < log_b:
        odds.step(treatment)

    stopping_time = engine.t
    change_time = engine.resolve_change_time(treatment)
    return TrialOutcome(
        procedure=f"static:{treatment}",
        stopping_time=stopping_time,
        change_time=change_time,
        log_odds=odds.log_odds,
        false_alarm=change_time is None or stopping_time < change_time,
    )
