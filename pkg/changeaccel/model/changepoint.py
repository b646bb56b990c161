"""Change-point models: prior probability plus transition functions."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import ClassVar, Optional, Sequence

from changeaccel.exceptions import InvalidArgumentError
from changeaccel.utils.validators import require_history, require_probability, require_treatment


class TransitionRule(ABC):
    """History-dependent transition function pi_t(x_1, ..., x_t).

    Besides evaluating pi_t, a rule declares the constants the procedures
    need: the infimum zeta_x over histories ending in x, the limiting
    transition probability p_x and the maximal transition pi*_t.
    """

    name: ClassVar[str]

    @property
    @abstractmethod
    def n_treatments(self) -> int:
        """Number of treatments the rule is defined for."""

    @abstractmethod
    def __call__(self, history: Sequence[int]) -> float:
        """Transition probability at t = len(history)."""

    @abstractmethod
    def zeta(self, treatment: int) -> float:
        """Smallest transition probability over histories ending in ``treatment``."""

    @abstractmethod
    def limit(self, treatment: int) -> float:
        """Limiting transition probability when ``treatment`` is assigned."""

    @abstractmethod
    def max_transition(self, t: int) -> float:
        """Largest transition probability over all histories of length t >= 1."""

    @abstractmethod
    def supremum(self) -> float:
        """Largest transition probability over all t and histories."""

    def never_fires(self, treatment: int) -> bool:
        """True when pi_t is 0 on every history that keeps assigning ``treatment``."""
        return False


def _probabilities(values: Sequence[float], name: str) -> tuple[float, ...]:
    values = tuple(require_probability(v, f"{name}[{i + 1}]") for i, v in enumerate(values))
    if not values:
        raise InvalidArgumentError(f"{name} needs one entry per treatment")
    return values


@dataclass(frozen=True)
class ConstantRule(TransitionRule):
    """pi_t equals ``value`` whatever the history."""

    value: float
    treatments: int
    name: ClassVar[str] = "constant"

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", require_probability(self.value, "value"))
        if self.treatments < 1:
            raise InvalidArgumentError("treatments must be positive")

    @property
    def n_treatments(self) -> int:
        return self.treatments

    def __call__(self, history: Sequence[int]) -> float:
        return self.value

    def zeta(self, treatment: int) -> float:
        return self.value

    def limit(self, treatment: int) -> float:
        return self.value

    def max_transition(self, t: int) -> float:
        return self.value

    def supremum(self) -> float:
        return self.value

    def never_fires(self, treatment: int) -> bool:
        return self.value == 0.0


@dataclass(frozen=True)
class WarmupRule(TransitionRule):
    """pi_t(..., x) = p_x - (p_x - zeta_x) * rate**(t-1).

    Starts at zeta_x and converges to p_x uniformly over histories, so the
    model is asymptotically Markovian.
    """

    p: tuple[float, ...]
    zeta_floor: tuple[float, ...]
    rate: float
    name: ClassVar[str] = "warmup"

    def __post_init__(self) -> None:
        p = _probabilities(self.p, "p")
        floor = _probabilities(self.zeta_floor, "zeta")
        if len(floor) != len(p):
            raise InvalidArgumentError("p and zeta must have one entry per treatment")
        for x, (lo, hi) in enumerate(zip(floor, p), start=1):
            if lo > hi:
                raise InvalidArgumentError(f"zeta[{x}]={lo} exceeds p[{x}]={hi}")
        rate = float(self.rate)
        if not 0.0 <= rate < 1.0:
            raise InvalidArgumentError(f"rate must lie in [0, 1), got {rate!r}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "zeta_floor", floor)
        object.__setattr__(self, "rate", rate)

    @property
    def n_treatments(self) -> int:
        return len(self.p)

    def _at(self, treatment: int, t: int) -> float:
        hi = self.p[treatment - 1]
        return hi - (hi - self.zeta_floor[treatment - 1]) * self.rate ** (t - 1)

    def __call__(self, history: Sequence[int]) -> float:
        return self._at(history[-1], len(history))

    def zeta(self, treatment: int) -> float:
        return self.zeta_floor[treatment - 1]

    def limit(self, treatment: int) -> float:
        return self.p[treatment - 1]

    def max_transition(self, t: int) -> float:
        return max(self._at(x, t) for x in range(1, self.n_treatments + 1))

    def supremum(self) -> float:
        return max(self.p)

    def never_fires(self, treatment: int) -> bool:
        # zeta_x <= p_x, so p_x = 0 pins every term at 0
        return self.p[treatment - 1] == 0.0


@dataclass(frozen=True)
class StreakRule(TransitionRule):
    """pi_t(..., x) = p_x * min(r, ramp) / ramp, r the trailing run length of x.

    Repeating a treatment builds up its effect; switching resets it.
    """

    p: tuple[float, ...]
    ramp: int
    name: ClassVar[str] = "streak"

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", _probabilities(self.p, "p"))
        if int(self.ramp) < 1:
            raise InvalidArgumentError(f"ramp must be a positive integer, got {self.ramp!r}")
        object.__setattr__(self, "ramp", int(self.ramp))

    @property
    def n_treatments(self) -> int:
        return len(self.p)

    def __call__(self, history: Sequence[int]) -> float:
        last = history[-1]
        run = 0
        for x in reversed(history):
            if x != last or run >= self.ramp:
                break
            run += 1
        return self.p[last - 1] * run / self.ramp

    def zeta(self, treatment: int) -> float:
        return self.p[treatment - 1] / self.ramp

    def limit(self, treatment: int) -> float:
        return self.p[treatment - 1]

    def max_transition(self, t: int) -> float:
        return max(self.p) * min(t, self.ramp) / self.ramp

    def supremum(self) -> float:
        return max(self.p)

    def never_fires(self, treatment: int) -> bool:
        return self.p[treatment - 1] == 0.0


TRANSITION_RULES: dict[str, type[TransitionRule]] = {
    rule.name: rule for rule in (ConstantRule, WarmupRule, StreakRule)
}


@dataclass(frozen=True)
class ChangePointModel(ABC):
    """Prior probability pi_0 plus the transition functions pi_t.

    ``delta`` is the declared transition margin: every transition
    probability and the prior stay at or below 1 - delta. When it is not
    declared, ``bound_margin`` reports the margin the model actually has.
    """

    prior: float = 0.0
    delta: Optional[float] = None
    is_markovian: ClassVar[bool] = False

    def _validate_common(self) -> None:
        prior = require_probability(self.prior, "prior", open_high=True)
        object.__setattr__(self, "prior", prior)
        if self.delta is not None:
            delta = require_probability(self.delta, "delta", open_low=True, open_high=True)
            object.__setattr__(self, "delta", delta)
            worst = max(self.supremum(), prior)
            if worst > 1.0 - delta:
                raise InvalidArgumentError(
                    f"transition probability {worst} exceeds 1 - delta = {1.0 - delta}"
                )

    @property
    @abstractmethod
    def n_treatments(self) -> int:
        """Number of treatments."""

    @abstractmethod
    def transition(self, history: Sequence[int]) -> float:
        """pi_t evaluated on the treatment history x_1..x_t."""

    @abstractmethod
    def zeta(self, treatment: int) -> float:
        """Infimum transition probability when ``treatment`` is assigned."""

    @abstractmethod
    def limit(self, treatment: int) -> float:
        """Limiting (or constant) transition probability of ``treatment``."""

    @abstractmethod
    def max_transition(self, t: int) -> float:
        """pi*_t, the maximal transition probability at time t >= 1."""

    @abstractmethod
    def supremum(self) -> float:
        """Supremum of all transition probabilities."""

    def never_changes(self, treatment: int) -> bool:
        """True when the change cannot occur while ``treatment`` is assigned forever."""
        return False

    @property
    def bound_margin(self) -> float:
        """Declared delta, or 1 minus the largest probability in the model."""
        if self.delta is not None:
            return self.delta
        return 1.0 - max(self.supremum(), self.prior)

    def fastest_treatment(self) -> int:
        """Treatment with the largest limiting transition probability (lowest label on ties)."""
        limits = [self.limit(x) for x in range(1, self.n_treatments + 1)]
        return limits.index(max(limits)) + 1


@dataclass(frozen=True)
class MarkovianChangePoint(ChangePointModel):
    """pi_t(x_1, ..., x_t) = p_{x_t} for every t and history."""

    p: tuple[float, ...] = field(default=())
    is_markovian: ClassVar[bool] = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", _probabilities(self.p, "p"))
        self._validate_common()

    @property
    def n_treatments(self) -> int:
        return len(self.p)

    def transition(self, history: Sequence[int]) -> float:
        return self.p[history[-1] - 1]

    def zeta(self, treatment: int) -> float:
        return self.p[treatment - 1]

    def limit(self, treatment: int) -> float:
        return self.p[treatment - 1]

    def max_transition(self, t: int) -> float:
        return max(self.p)

    def supremum(self) -> float:
        return max(self.p)

    def never_changes(self, treatment: int) -> bool:
        return self.p[treatment - 1] == 0.0


@dataclass(frozen=True)
class HistoryDependentChangePoint(ChangePointModel):
    """Transition probabilities given by a named history-dependent rule."""

    rule: Optional[TransitionRule] = None

    def __post_init__(self) -> None:
        if not isinstance(self.rule, TransitionRule):
            raise InvalidArgumentError("a history-dependent model needs a TransitionRule")
        self._validate_common()

    @property
    def n_treatments(self) -> int:
        return self.rule.n_treatments

    def transition(self, history: Sequence[int]) -> float:
        return self.rule(history)

    def zeta(self, treatment: int) -> float:
        return self.rule.zeta(treatment)

    def limit(self, treatment: int) -> float:
        return self.rule.limit(treatment)

    def max_transition(self, t: int) -> float:
        return self.rule.max_transition(t)

    def supremum(self) -> float:
        return self.rule.supremum()

    def never_changes(self, treatment: int) -> bool:
        return self.rule.never_fires(treatment)


def transition_prob(model: ChangePointModel, history: Sequence[int], t: int) -> float:
    """Return Pi_t = pi_t(x_1, ..., x_t).

    Raises:
        InvalidArgumentError: On an empty history, a length mismatch or an
            unknown treatment label
    """
    require_history(history, t)
    for x in history:
        require_treatment(x, model.n_treatments)
    return model.transition(history)
