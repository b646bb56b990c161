"""Per-replication records produced by the stopping procedures."""

import math
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field
from scipy.special import expit


class StageKind(str, Enum):
    """Stage types of the two-stage procedure."""
    TRAINING = "training"
    ASSESSMENT = "assessment"


class StageTrigger(str, Enum):
    """Rule that ended a stage."""
    ODDS = "odds"  # training stage reached b_1
    DETECTION = "detection"  # assessment stage reached b_K
    TEST = "test"  # one-sided SPRT fired first
    BOTH = "both"  # detection and SPRT on the same step


class StageRecord(BaseModel):
    """One completed stage of a proposed-procedure run."""

    model_config = ConfigDict(frozen=True)

    kind: StageKind
    treatment: int = Field(..., description="Treatment assigned throughout the stage")
    end: int = Field(..., description="Time index S_m at which the stage ended")
    trigger: StageTrigger


class TrialOutcome(BaseModel):
    """Result of running one procedure on one replication."""

    model_config = ConfigDict(frozen=True)

    procedure: str = Field(..., description="Procedure label")
    stopping_time: int = Field(..., ge=0, description="T, number of observations taken")
    change_time: Optional[int] = Field(
        default=None, description="Theta; None when the change never happens"
    )
    log_odds: float = Field(..., description="log Gamma_T")
    false_alarm: bool = Field(..., description="T < Theta")
    cycles: Optional[int] = Field(default=None, description="N, proposed procedure only")
    stages: list[StageRecord] = Field(default_factory=list)

    @property
    def terminal_odds(self) -> float:
        return math.exp(self.log_odds) if self.log_odds < 709.0 else math.inf

    @property
    def false_alarm_weight(self) -> float:
        """1 / (1 + Gamma_T), the per-run term of the low-variance Err estimator."""
        return float(expit(-self.log_odds))

    @property
    def stage_ends(self) -> list[int]:
        return [stage.end for stage in self.stages]
