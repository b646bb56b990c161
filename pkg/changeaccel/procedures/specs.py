"""Procedure specifications: what to assign and when to stop."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from changeaccel.exceptions import ConfigError, InvalidArgumentError
from changeaccel.model.loader import ProcedureEntry
from changeaccel.procedures.quality import TreatmentQuality
from changeaccel.procedures.thresholds import calibrate_thresholds, static_thresholds


class ProposedSpec(BaseModel):
    """Two-stage procedure: train with ``train`` until b1, assess with ``assess``."""

    model_config = ConfigDict(frozen=True)

    variant: Literal["proposed"] = "proposed"
    train: int = Field(..., ge=1, description="Training treatment i")
    assess: int = Field(..., ge=1, description="Assessment treatment j")
    b1: float = Field(..., description="Training-stage odds threshold")
    bK: float = Field(..., description="Detection odds threshold")
    d: float = Field(..., description="One-sided SPRT threshold")
    alpha: Optional[float] = Field(default=None, description="Level the thresholds were calibrated for")

    @model_validator(mode="after")
    def _ordered(self) -> "ProposedSpec":
        if not (self.bK > self.b1 > 1.0):
            raise ValueError(f"thresholds must satisfy bK > b1 > 1, got b1={self.b1}, bK={self.bK}")
        if not self.d > 1.0:
            raise ValueError(f"d must exceed 1, got {self.d}")
        if self.train == self.assess:
            raise ValueError("training and assessment treatments must differ")
        return self

    @property
    def label(self) -> str:
        return f"proposed:{self.train},{self.assess}"

    @property
    def continuation(self) -> int:
        return self.train


class StaticSpec(BaseModel):
    """Shiryaev rule with a single treatment assigned throughout."""

    model_config = ConfigDict(frozen=True)

    variant: Literal["static"] = "static"
    treatment: int = Field(..., ge=1)
    b: float = Field(..., gt=0.0, description="Odds threshold")
    alpha: Optional[float] = None

    @property
    def label(self) -> str:
        return f"static:{self.treatment}"

    @property
    def continuation(self) -> int:
        return self.treatment


class DPSpec(BaseModel):
    """Optimal policy solved by value iteration."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    variant: Literal["dp"] = "dp"
    policy: Any = Field(..., description="Solved DPPolicy")
    source: Optional[str] = Field(default=None, description="Policy file the policy was loaded from")
    alpha: Optional[float] = None

    @model_validator(mode="after")
    def _has_policy(self) -> "DPSpec":
        if not hasattr(self.policy, "b_c") or not hasattr(self.policy, "action_at"):
            raise ValueError("policy must be a solved DPPolicy")
        return self

    @property
    def label(self) -> str:
        return "optimal"

    @property
    def continuation(self) -> int:
        return self.policy.continuation


ProcedureSpec = Union[ProposedSpec, StaticSpec, DPSpec]


def _load_policy_spec(path: Union[str, Path], alpha: Optional[float]) -> DPSpec:
    from changeaccel.dp.policy import load_policy

    policy = load_policy(path)
    return DPSpec(policy=policy, source=str(path), alpha=alpha if alpha is not None else policy.alpha)


def _labels(text: str, count: int) -> list[int]:
    try:
        labels = [int(part) for part in text.split(",")]
    except ValueError:
        raise ConfigError(f"treatment labels must be integers, got {text!r}", key="proc") from None
    if len(labels) != count:
        raise ConfigError(f"expected {count} treatment label(s), got {text!r}", key="proc")
    return labels


def parse_procedure(
    text: str,
    alpha: Optional[float] = None,
    quality: Optional[TreatmentQuality] = None,
) -> ProcedureSpec:
    """Build a ProcedureSpec from ``proposed:i,j``, ``static:x`` or ``dp:<policy file>``.

    Threshold procedures are calibrated at ``alpha`` (and ``quality`` for
    the two-stage procedure).

    Raises:
        ConfigError: On a malformed string
        InvalidArgumentError: On invalid thresholds or treatment pairings
    """
    variant, sep, rest = text.partition(":")
    if not sep or not rest:
        raise ConfigError(
            f"procedure must look like proposed:i,j, static:x or dp:<file>, got {text!r}", key="proc"
        )
    variant = variant.strip().lower()
    if variant == "dp":
        return _load_policy_spec(rest, alpha)
    if alpha is None:
        raise ConfigError(f"procedure {text!r} needs --alpha for its thresholds", key="alpha")
    if variant == "static":
        (x,) = _labels(rest, 1)
        if quality is not None and not 1 <= x <= quality.n_treatments:
            raise InvalidArgumentError(f"treatment {x} outside 1..{quality.n_treatments}")
        return StaticSpec(treatment=x, b=static_thresholds(alpha), alpha=alpha)
    if variant == "proposed":
        if quality is None:
            raise InvalidArgumentError("calibrating the two-stage procedure needs the treatment quality")
        i, j = _labels(rest, 2)
        b1, bK, d = calibrate_thresholds(alpha, i, j, quality)
        return ProposedSpec(train=i, assess=j, b1=b1, bK=bK, d=d, alpha=alpha)
    raise ConfigError(f"unknown procedure variant {variant!r}", key="proc")


def spec_from_entry(
    entry: ProcedureEntry,
    quality: TreatmentQuality,
    base_dir: Optional[Path] = None,
) -> ProcedureSpec:
    """Build a ProcedureSpec from the procedure block of a model file.

    Relative policy paths resolve against ``base_dir``.
    """
    alpha = entry.calibrate.alpha if entry.calibrate else None
    if entry.variant == "dp":
        path = Path(entry.policy)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return _load_policy_spec(path, alpha)
    if entry.variant == "static":
        b = entry.thresholds.b if entry.thresholds else static_thresholds(alpha)
        return StaticSpec(treatment=entry.treatment, b=b, alpha=alpha)
    if entry.thresholds is not None:
        t = entry.thresholds
        return ProposedSpec(train=entry.train, assess=entry.assess, b1=t.b1, bK=t.bK, d=t.d)
    b1, bK, d = calibrate_thresholds(alpha, entry.train, entry.assess, quality)
    return ProposedSpec(train=entry.train, assess=entry.assess, b1=b1, bK=bK, d=d, alpha=alpha)
