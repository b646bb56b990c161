"""Threshold calibration and the bounds used to judge a procedure.

All logarithms are natural.
"""

from __future__ import annotations

import math
import warnings
from typing import NamedTuple, Optional

from changeaccel.exceptions import (
    InvalidArgumentError,
    InvalidPairingError,
    InvalidTrainingTreatmentError,
    ThresholdClampWarning,
)
from changeaccel.procedures.quality import TreatmentQuality, fastest_treatment, most_informative_treatment
from changeaccel.utils.logger import get_logger
from changeaccel.utils.validators import require_level, require_probability

logger = get_logger(__name__)


class Thresholds(NamedTuple):
    """Odds thresholds of the two-stage procedure."""

    b1: float
    bK: float
    d: float


def static_thresholds(alpha: float) -> float:
    """b = (1 - alpha) / alpha, which caps the false-alarm probability at alpha."""
    alpha = require_level(alpha)
    return (1.0 - alpha) / alpha


def _clamp(value: float, name: str, alpha: float) -> float:
    if value > 1.0:
        return value
    message = f"calibrated {name}={value:.6g} is not above 1 at alpha={alpha:g}; using e"
    logger.warning("threshold_clamped", threshold=name, value=value, alpha=alpha)
    warnings.warn(message, ThresholdClampWarning, stacklevel=3)
    return math.e


def _check_pair(train: int, assess: int, quality: TreatmentQuality) -> None:
    D_i, D_j = quality[train].D, quality[assess].D
    if not D_j > D_i:
        raise InvalidPairingError(
            f"assessment treatment {assess} (D={D_j:.6g}) must have larger detection power "
            f"than training treatment {train} (D={D_i:.6g})"
        )
    if quality[train].zeta <= 0.0:
        raise InvalidTrainingTreatmentError(
            f"training treatment {train} has zeta=0 and may never trigger the change"
        )


def calibrate_thresholds(alpha: float, train: int, assess: int, quality: TreatmentQuality) -> Thresholds:
    """Choose (b_1, b_K, d) for the two-stage procedure at level alpha.

    b_K = (1 - alpha) / alpha controls the false alarm; b_1 and d minimize
    the first-order terms of the upper bound on the expected sample size.
    A value that comes out at or below 1 is raised to e with a
    ThresholdClampWarning.

    Args:
        alpha: False-alarm level in (0, 1)
        train: Training treatment i
        assess: Assessment treatment j
        quality: Treatment quality of the model

    Returns:
        Thresholds(b1, bK, d)

    Raises:
        InvalidPairingError: If D_j <= D_i
        InvalidTrainingTreatmentError: If zeta_i = 0
        InvalidArgumentError: If alpha is so large that b_1 >= b_K
    """
    alpha = require_level(alpha)
    _check_pair(train, assess, quality)
    mi, mj = quality[train], quality[assess]

    bK = (1.0 - alpha) / alpha
    reach = 1.0 / mi.zeta + math.log(bK) / mj.D
    b1 = _clamp(reach / (1.0 / mi.D - 1.0 / mj.D), "b1", alpha)
    d = _clamp(b1 * reach / (1.0 / mj.I + 1.0 / mj.J), "d", alpha)
    if b1 >= bK:
        raise InvalidArgumentError(
            f"alpha={alpha:g} gives b1={b1:.6g} >= bK={bK:.6g}; the two-stage procedure needs a smaller alpha"
        )
    logger.debug("thresholds_calibrated", alpha=alpha, train=train, assess=assess, b1=b1, bK=bK, d=d)
    return Thresholds(b1, bK, d)


def lower_bound_value(err: float, quality: TreatmentQuality) -> float:
    """lambda_* + |log err| / D_K, the first-order lower bound on the expected sample size."""
    err = require_probability(err, "err", open_low=True)
    return quality.lambda_star + abs(math.log(err)) / quality.D_max


def asymptotic_upper_value(alpha: float, quality: TreatmentQuality, train: Optional[int] = None) -> float:
    """lambda_i + |log alpha| / D_K, the first-order growth of the two-stage procedure's ESS."""
    alpha = require_level(alpha)
    train = train or fastest_treatment(quality)
    return quality[train].lam + abs(math.log(alpha)) / quality.D_max


def upper_bound_value(
    b1: float,
    bK: float,
    d: float,
    quality: TreatmentQuality,
    train: Optional[int] = None,
    assess: Optional[int] = None,
) -> float:
    """Non-asymptotic upper bound on the expected sample size of the two-stage procedure.

    Sum of five terms: the time to the change plus the final detection
    delay, the cost of extra cycles, the overshoot of the change under the
    training treatment, the training delay and the assessment delay.

    Args:
        b1: Training threshold
        bK: Detection threshold
        d: SPRT threshold
        quality: Treatment quality
        train: Training treatment (default: fastest)
        assess: Assessment treatment (default: most informative)
    """
    for name, value in (("b1", b1), ("bK", bK), ("d", d)):
        if not value > 1.0:
            raise InvalidArgumentError(f"{name} must exceed 1, got {value!r}")
    train = train or fastest_treatment(quality)
    assess = assess or most_informative_treatment(quality)
    mi, mj = quality[train], quality[assess]
    if mi.zeta <= 0.0:
        raise InvalidTrainingTreatmentError(f"training treatment {train} has zeta=0")

    log_bK = math.log(bK)
    reach = 1.0 / mi.zeta + log_bK / mj.D
    sprt_delay = 1.0 / mj.I + 1.0 / mj.J
    return (
        (mi.lam + log_bK / mj.D)
        + reach * (1.0 / b1 + 1.0 / d)
        + abs(math.log(mi.zeta)) / mi.D
        + math.log(b1) * (1.0 / mi.D - 1.0 / mj.D)
        + (math.log(d) / b1) * sprt_delay
    )


def cycle_bound(b1: float, d: float, n: int) -> float:
    """Upper bound (1/b1 + 1/d)^n on P(N > n)."""
    if n < 0:
        raise InvalidArgumentError("n must be non-negative")
    return (1.0 / b1 + 1.0 / d) ** n


def expected_cycles_bound(b1: float, d: float) -> float:
    """Upper bound 1 / (1 - eta) on E[N], eta = 1/b1 + 1/d."""
    eta = 1.0 / b1 + 1.0 / d
    if eta >= 1.0:
        return math.inf
    return 1.0 / (1.0 - eta)
