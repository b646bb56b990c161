"""Exception and warning types.

Every error carries the process exit status the CLI reports for it:
2 for configuration problems, 3 for runtime failures.
"""

from typing import Any, Optional

CONFIG_EXIT_CODE = 2
RUNTIME_EXIT_CODE = 3


class ChangeAccelError(Exception):
    """Base class for all library errors."""

    exit_code: int = RUNTIME_EXIT_CODE


# Configuration errors


class ConfigError(ChangeAccelError):
    """Malformed model file, procedure string or option value."""

    exit_code = CONFIG_EXIT_CODE

    def __init__(
        self,
        message: str,
        key: Optional[str] = None,
        line: Optional[int] = None,
        column: Optional[int] = None,
    ):
        self._message = message
        self.key = key
        self.line = line
        self.column = column
        location = ""
        if line is not None:
            location = f" (line {line}, column {column})"
        prefix = f"{key}: " if key else ""
        super().__init__(f"{prefix}{message}{location}")

    def __reduce__(self):
        return (self.__class__, (self._message, self.key, self.line, self.column))


class InvalidArgumentError(ChangeAccelError, ValueError):
    """An argument lies outside its admissible range."""

    exit_code = CONFIG_EXIT_CODE


class InvalidPairingError(InvalidArgumentError):
    """Assessment treatment does not dominate the training treatment in D_x."""


class InvalidTrainingTreatmentError(InvalidArgumentError):
    """Training treatment cannot trigger the change (zeta or p equal to zero)."""


class UnsupportedModelError(InvalidArgumentError):
    """Operation requires a Markovian change-point model."""


class UnsupportedResponseError(InvalidArgumentError):
    """Operation requires a finite response space."""


# Runtime errors


class HorizonExceededError(ChangeAccelError):
    """A replication ran past the configured step cap."""

    def __init__(self, horizon: int):
        self.horizon = horizon
        super().__init__(
            f"replication exceeded max_horizon={horizon} steps; "
            "the procedure most likely never stops under this model"
        )

    def __reduce__(self):
        return (self.__class__, (self.horizon,))


class ConvergenceError(ChangeAccelError):
    """Value iteration reached max_iter without meeting the tolerance."""

    def __init__(self, residual: float, iterations: int, tol: float):
        self.residual = residual
        self.iterations = iterations
        self.tol = tol
        super().__init__(
            f"value iteration did not converge after {iterations} iterations "
            f"(residual {residual:.3e} > tol {tol:.3e})"
        )

    def __reduce__(self):
        return (self.__class__, (self.residual, self.iterations, self.tol))


class CalibrationError(ChangeAccelError):
    """No cost on the calibration grid meets the error constraint."""

    def __init__(self, alpha: float, table: Optional[list[Any]] = None):
        self.alpha = alpha
        self.table = table or []
        super().__init__(
            f"no grid cost achieves Err <= {alpha:g}; "
            "extend the c-grid toward smaller costs"
        )

    def __reduce__(self):
        return (self.__class__, (self.alpha, self.table))


class EvaluationAbortedError(ChangeAccelError):
    """A replication failed, so the aggregate report is discarded."""

    def __init__(self, replication: int, cause: Exception):
        self.replication = replication
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", RUNTIME_EXIT_CODE)
        super().__init__(f"replication {replication} failed: {cause}")

    def __reduce__(self):
        return (self.__class__, (self.replication, self.cause))


class ResultStorageError(ChangeAccelError):
    """Writing or reading a result file failed."""


# Warnings


class ThresholdClampWarning(UserWarning):
    """A calibrated threshold fell to or below 1 and was raised to e."""


class MissingPolicyWarning(UserWarning):
    """Table reproduction skipped DP rows because no policy file was found."""
