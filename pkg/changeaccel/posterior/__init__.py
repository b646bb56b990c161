"""Posterior odds filter, Shiryaev stopping and false-alarm estimators."""

from changeaccel.posterior.estimators import (
    Estimate,
    false_alarm_estimate,
    indicator_false_alarm_estimate,
    mean_and_se,
    write_terminal_odds_csv,
)
from changeaccel.posterior.odds import (
    OddsFilter,
    PosteriorState,
    brute_force_posterior,
    false_alarm_probability,
    posterior_probability,
    prior_log_odds,
    update_odds,
)
from changeaccel.posterior.shiryaev import shiryaev_first_crossing

__all__ = [
    "Estimate",
    "OddsFilter",
    "PosteriorState",
    "brute_force_posterior",
    "false_alarm_estimate",
    "false_alarm_probability",
    "indicator_false_alarm_estimate",
    "mean_and_se",
    "posterior_probability",
    "prior_log_odds",
    "shiryaev_first_crossing",
    "update_odds",
    "write_terminal_odds_csv",
]
