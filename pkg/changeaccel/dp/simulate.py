"""Running a solved DP policy on a replication."""

from changeaccel.dp.bellman import require_dp_model
from changeaccel.dp.policy import STOP, DPPolicy, require_matching
from changeaccel.model.engine import TrialEngine
from changeaccel.model.outcome import TrialOutcome
from changeaccel.posterior.odds import OddsFilter


def run_dp(engine: TrialEngine, policy: DPPolicy) -> TrialOutcome:
    """Follow ``policy`` until the posterior probability reaches b_c.

    The posterior probability is propagated with the DP state map; the
    odds filter runs alongside to report Gamma_T.

    Raises:
        InvalidArgumentError: If the policy was solved for another model
    """
    responses, change_point = engine.responses, engine.change_point
    supports = require_dp_model(responses, change_point)
    require_matching(policy, responses, change_point)
    index = [{float(v): k for k, v in enumerate(s.values)} for s in supports]

    odds = OddsFilter(engine)
    z = change_point.prior
    while True:
        x = policy.action_at(z)
        if x == STOP:
            break
        y, _ = odds.step(x)
        support = supports[x - 1]
        k = index[x - 1][float(y)]
        p = change_point.limit(x)
        moved = z + p * (1.0 - z)
        joint = moved * support.post[k]
        z = float(joint / (joint + (1.0 - p) * (1.0 - z) * support.pre[k]))

    stopping_time = engine.t
    change_time = engine.resolve_change_time(policy.continuation)
    return TrialOutcome(
        procedure="optimal",
        stopping_time=stopping_time,
        change_time=change_time,
        log_odds=odds.log_odds,
        false_alarm=change_time is None or stopping_time < change_time,
    )
