"""Model file loading.

A model file is YAML with a strict schema::

    name: table1
    treatments:
      - {family: bernoulli, f: 0.45}
      - {family: gaussian, mu0: 0.0, mu1: 1.0, sigma: 1.0}
    change_point:
      prior: 0.0
      delta: 0.01
      markovian: {p: [0.1, 0.05]}
      # or: rule: {name: warmup, p: [...], zeta: [...], rate: 0.5}
    procedure:              # optional default for `eval`
      variant: proposed
      train: 1
      assess: 3
      calibrate: {alpha: 1.0e-3}

Unknown keys are errors. Every error reports the offending key path and,
when known, its line and column in the file.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Annotated, Literal, Optional, Sequence, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from changeaccel.exceptions import ConfigError, InvalidArgumentError
from changeaccel.model.changepoint import (
    ChangePointModel,
    ConstantRule,
    HistoryDependentChangePoint,
    MarkovianChangePoint,
    StreakRule,
    TransitionRule,
    WarmupRule,
)
from changeaccel.model.responses import BernoulliResponse, GaussianResponse, ResponseModel, ResponsePair
from changeaccel.utils.logger import get_logger

logger = get_logger(__name__)


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


# Treatments


class BernoulliEntry(_Strict):
    family: Literal["bernoulli"]
    f: float = Field(..., description="P(Y=1) before the change")
    g: Optional[float] = Field(default=None, description="P(Y=1) after the change (default 1 - f)")


class GaussianEntry(_Strict):
    family: Literal["gaussian"]
    mu0: float = Field(..., description="Pre-change mean")
    mu1: float = Field(..., description="Post-change mean")
    sigma: float = Field(default=1.0, description="Common standard deviation")


TreatmentEntry = Annotated[Union[BernoulliEntry, GaussianEntry], Field(discriminator="family")]


# Change-point


class ConstantRuleEntry(_Strict):
    name: Literal["constant"]
    value: float


class WarmupRuleEntry(_Strict):
    name: Literal["warmup"]
    p: list[float]
    zeta: list[float]
    rate: float


class StreakRuleEntry(_Strict):
    name: Literal["streak"]
    p: list[float]
    ramp: int


RuleEntry = Annotated[
    Union[ConstantRuleEntry, WarmupRuleEntry, StreakRuleEntry], Field(discriminator="name")
]


class MarkovianEntry(_Strict):
    p: list[float] = Field(..., min_length=1, description="Transition probability per treatment")


class ChangePointEntry(_Strict):
    prior: float = 0.0
    delta: Optional[float] = None
    markovian: Optional[MarkovianEntry] = None
    rule: Optional[RuleEntry] = None

    @model_validator(mode="after")
    def _one_variant(self) -> "ChangePointEntry":
        if (self.markovian is None) == (self.rule is None):
            raise ValueError("exactly one of 'markovian' or 'rule' is required")
        return self


# Procedure


class ThresholdsEntry(_Strict):
    b1: Optional[float] = None
    bK: Optional[float] = None
    d: Optional[float] = None
    b: Optional[float] = None


class CalibrateEntry(_Strict):
    alpha: float


class ProcedureEntry(_Strict):
    """Procedure block of a model file."""

    variant: Literal["proposed", "static", "dp"]
    train: Optional[int] = None
    assess: Optional[int] = None
    treatment: Optional[int] = None
    thresholds: Optional[ThresholdsEntry] = None
    calibrate: Optional[CalibrateEntry] = None
    policy: Optional[str] = None

    @model_validator(mode="after")
    def _complete(self) -> "ProcedureEntry":
        if self.variant == "dp":
            if self.policy is None:
                raise ValueError("variant 'dp' needs a 'policy' file")
            return self
        if (self.thresholds is None) == (self.calibrate is None):
            raise ValueError("exactly one of 'thresholds' or 'calibrate' is required")
        if self.variant == "proposed":
            if self.train is None or self.assess is None:
                raise ValueError("variant 'proposed' needs 'train' and 'assess'")
            if self.thresholds is not None and None in (
                self.thresholds.b1,
                self.thresholds.bK,
                self.thresholds.d,
            ):
                raise ValueError("proposed thresholds need b1, bK and d")
        else:
            if self.treatment is None:
                raise ValueError("variant 'static' needs 'treatment'")
            if self.thresholds is not None and self.thresholds.b is None:
                raise ValueError("static thresholds need b")
        return self


class ModelFile(_Strict):
    """Root of a model file."""

    name: Optional[str] = None
    treatments: list[TreatmentEntry] = Field(..., min_length=1)
    change_point: ChangePointEntry
    procedure: Optional[ProcedureEntry] = None


@dataclass(frozen=True)
class ModelBundle:
    """Everything a model file defines."""

    name: str
    responses: ResponseModel
    change_point: ChangePointModel
    procedure: Optional[ProcedureEntry] = None
    source: Optional[Path] = None

    @property
    def n_treatments(self) -> int:
        return self.responses.n_treatments


def _locate(root: Optional[yaml.Node], loc: Sequence[Union[str, int]]) -> tuple[Optional[int], Optional[int]]:
    """Find the 1-based (line, column) of the node at ``loc``.

    Path elements that do not exist in the document (pydantic inserts the
    discriminator tag of tagged unions) are skipped.
    """
    node = root
    if node is None:
        return None, None
    for part in loc:
        child = None
        if isinstance(node, yaml.MappingNode):
            for key_node, value_node in node.value:
                if key_node.value == part:
                    child = value_node
                    break
        elif isinstance(node, yaml.SequenceNode) and isinstance(part, int):
            if 0 <= part < len(node.value):
                child = node.value[part]
        if child is not None:
            node = child
    return node.start_mark.line + 1, node.start_mark.column + 1


def _key_path(loc: Sequence[Union[str, int]]) -> str:
    parts: list[str] = []
    for part in loc:
        if isinstance(part, int):
            parts.append(f"[{part}]")
        else:
            parts.append(("." if parts else "") + part)
    return "".join(parts)


def _build_responses(entries: Sequence[Union[BernoulliEntry, GaussianEntry]]) -> tuple[ResponsePair, ...]:
    pairs: list[ResponsePair] = []
    for entry in entries:
        if isinstance(entry, BernoulliEntry):
            pairs.append(BernoulliResponse(entry.f, entry.g))
        else:
            pairs.append(GaussianResponse(entry.mu0, entry.mu1, entry.sigma))
    return tuple(pairs)


def _build_rule(entry: Union[ConstantRuleEntry, WarmupRuleEntry, StreakRuleEntry], k: int) -> TransitionRule:
    if isinstance(entry, ConstantRuleEntry):
        return ConstantRule(entry.value, k)
    if isinstance(entry, WarmupRuleEntry):
        return WarmupRule(tuple(entry.p), tuple(entry.zeta), entry.rate)
    return StreakRule(tuple(entry.p), entry.ramp)


def _build_change_point(entry: ChangePointEntry, k: int) -> ChangePointModel:
    if entry.markovian is not None:
        return MarkovianChangePoint(prior=entry.prior, delta=entry.delta, p=tuple(entry.markovian.p))
    return HistoryDependentChangePoint(
        prior=entry.prior, delta=entry.delta, rule=_build_rule(entry.rule, k)
    )


def parse_model_text(text: str, source: Optional[Path] = None) -> ModelBundle:
    """Parse model-file text into a ModelBundle.

    Args:
        text: YAML document
        source: Path the text came from, for diagnostics

    Returns:
        ModelBundle

    Raises:
        ConfigError: On YAML syntax errors, schema violations or parameter
            values outside their domain
    """
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise ConfigError(
            f"invalid YAML: {getattr(e, 'problem', None) or e}",
            line=mark.line + 1 if mark else None,
            column=mark.column + 1 if mark else None,
        ) from e

    if not isinstance(data, dict):
        raise ConfigError("model file must be a mapping at the top level", line=1, column=1)

    try:
        parsed = ModelFile.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        loc = first["loc"]
        line, column = _locate(root, loc)
        raise ConfigError(first["msg"], key=_key_path(loc) or None, line=line, column=column) from e

    k = len(parsed.treatments)
    try:
        responses = ResponseModel(_build_responses(parsed.treatments))
    except InvalidArgumentError as e:
        line, column = _locate(root, ("treatments",))
        raise ConfigError(str(e), key="treatments", line=line, column=column) from e

    try:
        change_point = _build_change_point(parsed.change_point, k)
    except InvalidArgumentError as e:
        line, column = _locate(root, ("change_point",))
        raise ConfigError(str(e), key="change_point", line=line, column=column) from e

    if change_point.n_treatments != k:
        line, column = _locate(root, ("change_point",))
        raise ConfigError(
            f"change-point model defines {change_point.n_treatments} treatments, "
            f"'treatments' lists {k}",
            key="change_point",
            line=line,
            column=column,
        )

    for field_name in ("train", "assess", "treatment"):
        label = getattr(parsed.procedure, field_name, None) if parsed.procedure else None
        if label is not None and not 1 <= label <= k:
            line, column = _locate(root, ("procedure", field_name))
            raise ConfigError(
                f"treatment {label} outside 1..{k}",
                key=f"procedure.{field_name}",
                line=line,
                column=column,
            )

    name = parsed.name or (source.stem if source else "model")
    logger.debug("model_parsed", name=name, treatments=k, markovian=change_point.is_markovian)
    return ModelBundle(
        name=name,
        responses=responses,
        change_point=change_point,
        procedure=parsed.procedure,
        source=source,
    )


def load_model_file(path: Union[str, Path]) -> ModelBundle:
    """Read and parse a model file.

    Raises:
        ConfigError: If the file cannot be read or does not parse
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read model file: {e.strerror or e}", key=str(path)) from e
    return parse_model_text(text, source=path)
