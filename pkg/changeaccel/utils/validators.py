"""Input validation helpers shared by the library and the CLI."""

import math
from typing import Sequence

from changeaccel.exceptions import InvalidArgumentError


def require_probability(value: float, name: str, *, open_low: bool = False, open_high: bool = False) -> float:
    """Check that ``value`` lies in [0, 1] with optionally open ends.

    Args:
        value: Value to check
        name: Argument name used in the error message
        open_low: Exclude 0
        open_high: Exclude 1

    Returns:
        The value as a float

    Raises:
        InvalidArgumentError: If the value is NaN or out of range
    """
    value = float(value)
    low_ok = value > 0.0 if open_low else value >= 0.0
    high_ok = value < 1.0 if open_high else value <= 1.0
    if math.isnan(value) or not (low_ok and high_ok):
        low = "(0" if open_low else "[0"
        high = "1)" if open_high else "1]"
        raise InvalidArgumentError(f"{name} must lie in {low}, {high}, got {value!r}")
    return value


def require_level(alpha: float, name: str = "alpha") -> float:
    """Check a tolerance level alpha in (0, 1)."""
    return require_probability(alpha, name, open_low=True, open_high=True)


def require_positive(value: float, name: str) -> float:
    """Check that ``value`` is a finite positive number."""
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise InvalidArgumentError(f"{name} must be positive and finite, got {value!r}")
    return value


def require_treatment(treatment: int, n_treatments: int) -> int:
    """Check a 1-based treatment label against the number of treatments."""
    if isinstance(treatment, bool) or not isinstance(treatment, int):
        raise InvalidArgumentError(f"treatment must be an integer label, got {treatment!r}")
    if not 1 <= treatment <= n_treatments:
        raise InvalidArgumentError(
            f"treatment {treatment} outside 1..{n_treatments}"
        )
    return treatment


def require_history(history: Sequence[int], t: int) -> None:
    """Check that a treatment history has exactly ``t`` entries with t >= 1."""
    if t < 1 or len(history) == 0:
        raise InvalidArgumentError("transition probability needs a non-empty treatment history")
    if len(history) != t:
        raise InvalidArgumentError(
            f"history length {len(history)} does not match time index t={t}"
        )
