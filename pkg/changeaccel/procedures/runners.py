"""Running threshold procedures on a single replication."""

import math

from changeaccel.model.engine import TrialEngine
from changeaccel.model.outcome import StageKind, StageRecord, StageTrigger, TrialOutcome
from changeaccel.posterior.odds import OddsFilter
from changeaccel.posterior.shiryaev import shiryaev_first_crossing
from changeaccel.procedures.specs import ProposedSpec, StaticSpec
from changeaccel.utils.validators import require_treatment


def run_proposed(engine: TrialEngine, spec: ProposedSpec) -> TrialOutcome:
    """Alternate training and assessment stages until detection wins.

    A training stage assigns ``spec.train`` until the odds reach b1. An
    assessment stage assigns ``spec.assess`` while two rules race: the
    detection rule (odds reach bK) and a one-sided SPRT whose statistic
    sum log(f/g) restarts at 0 with every assessment stage and fires at
    log d. The run ends with the first assessment stage where detection
    fires no later than the SPRT. Every stage takes at least one
    observation.

    Args:
        engine: Fresh replication
        spec: Validated two-stage specification

    Returns:
        TrialOutcome with the stage log and the cycle count N
    """
    require_treatment(spec.train, engine.n_treatments)
    require_treatment(spec.assess, engine.n_treatments)
    log_b1 = math.log(spec.b1)
    log_bK = math.log(spec.bK)
    log_d = math.log(spec.d)

    odds = OddsFilter(engine)
    stages: list[StageRecord] = []
    cycles = 0
    while True:
        while True:
            odds.step(spec.train)
            if odds.log_odds >= log_b1:
                break
        stages.append(StageRecord(kind=StageKind.TRAINING, treatment=spec.train, end=engine.t, trigger=StageTrigger.ODDS))
        cycles += 1

        sprt = 0.0
        while True:
            _, log_lr = odds.step(spec.assess)
            sprt -= log_lr
            detected = odds.log_odds >= log_bK
            tested = sprt >= log_d
            if detected or tested:
                break
        if detected and tested:
            trigger = StageTrigger.BOTH
        elif detected:
            trigger = StageTrigger.DETECTION
        else:
            trigger = StageTrigger.TEST
        stages.append(StageRecord(kind=StageKind.ASSESSMENT, treatment=spec.assess, end=engine.t, trigger=trigger))
        if detected:
            break

    stopping_time = engine.t
    change_time = engine.resolve_change_time(spec.continuation)
    return TrialOutcome(
        procedure=spec.label,
        stopping_time=stopping_time,
        change_time=change_time,
        log_odds=odds.log_odds,
        false_alarm=change_time is None or stopping_time < change_time,
        cycles=cycles,
        stages=stages,
    )


def run_static(engine: TrialEngine, spec: StaticSpec) -> TrialOutcome:
    """Shiryaev rule with ``spec.treatment`` assigned at every step."""
    return shiryaev_first_crossing(engine, spec.treatment, spec.b)
