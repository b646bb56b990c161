"""Response models, change-point models and the trial simulator."""

from changeaccel.model.changepoint import (
    TRANSITION_RULES,
    ChangePointModel,
    ConstantRule,
    HistoryDependentChangePoint,
    MarkovianChangePoint,
    StreakRule,
    TransitionRule,
    WarmupRule,
    transition_prob,
)
from changeaccel.model.engine import CounterStream, TrialEngine
from changeaccel.model.loader import ModelBundle, ProcedureEntry, load_model_file, parse_model_text
from changeaccel.model.outcome import StageKind, StageRecord, StageTrigger, TrialOutcome
from changeaccel.model.responses import (
    BernoulliResponse,
    FiniteSupport,
    GaussianResponse,
    KLPair,
    ResponseModel,
    ResponsePair,
    kl_divergences,
)

__all__ = [
    "TRANSITION_RULES",
    "BernoulliResponse",
    "ChangePointModel",
    "ConstantRule",
    "CounterStream",
    "FiniteSupport",
    "GaussianResponse",
    "HistoryDependentChangePoint",
    "KLPair",
    "MarkovianChangePoint",
    "ModelBundle",
    "ProcedureEntry",
    "ResponseModel",
    "ResponsePair",
    "StageKind",
    "StageRecord",
    "StageTrigger",
    "StreakRule",
    "TransitionRule",
    "TrialEngine",
    "TrialOutcome",
    "WarmupRule",
    "kl_divergences",
    "load_model_file",
    "parse_model_text",
    "transition_prob",
]
