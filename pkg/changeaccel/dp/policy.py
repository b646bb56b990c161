"""Solved value functions and policies, and their JSON files."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from changeaccel.exceptions import ConfigError, InvalidArgumentError, ResultStorageError
from changeaccel.model.changepoint import ChangePointModel
from changeaccel.model.responses import ResponseModel
from changeaccel.utils.logger import get_logger

logger = get_logger(__name__)

STOP = 0


@dataclass(frozen=True, eq=False)
class ValueFunction:
    """Optimal cost-to-go J on a grid for per-observation cost c."""

    grid: np.ndarray
    values: np.ndarray
    c: float

    def __call__(self, z: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        return np.interp(z, self.grid, self.values)

    def is_concave(self, tol: float = 1e-9) -> bool:
        """Three-point concavity J_k >= l J_{k-1} + (1 - l) J_{k+1} - tol at every interior node."""
        z, v = self.grid, self.values
        left, mid, right = z[:-2], z[1:-1], z[2:]
        lam = (right - mid) / (right - left)
        chord = lam * v[:-2] + (1.0 - lam) * v[2:]
        return bool(np.all(v[1:-1] >= chord - tol))


def model_signature(responses: ResponseModel, change_point: ChangePointModel) -> list[list[float]]:
    """Per treatment: p_x followed by the pre- and post-change response probabilities."""
    rows = []
    for x, pair in enumerate(responses.treatments, start=1):
        support = pair.finite_support()
        row = [change_point.limit(x)]
        if support is not None:
            row += support.pre.tolist() + support.post.tolist()
        rows.append(row)
    return rows


@dataclass(frozen=True, eq=False)
class DPPolicy:
    """Stop-or-continue policy read off a solved value function.

    ``actions[k]`` is STOP (0) or the treatment label to assign at grid
    node k. The stopping region is [b_c, 1].
    """

    grid: np.ndarray
    actions: np.ndarray
    values: np.ndarray
    b_c: float
    c: float
    prior: float
    signature: list[list[float]]
    continuation: int
    grid_kind: str = "tail"
    grid_size: int = 0
    tol: float = 0.0
    iterations: int = 0
    residual: float = 0.0
    alpha: Optional[float] = None

    @property
    def value_function(self) -> ValueFunction:
        return ValueFunction(self.grid, self.values, self.c)

    @property
    def stop_region_is_interval(self) -> bool:
        """True when the stop actions form one block that ends at z = 1."""
        stops = np.flatnonzero(self.actions == STOP)
        if stops.size == 0 or stops[-1] != len(self.grid) - 1:
            return False
        return bool(np.all(np.diff(stops) == 1))

    def action_at(self, z: float) -> int:
        """STOP when z >= b_c, else the treatment of the nearest continuation node."""
        if z >= self.b_c:
            return STOP
        last = int(np.searchsorted(self.grid, self.b_c, side="left")) - 1
        k = int(np.searchsorted(self.grid, z, side="left"))
        k = min(k, last)
        if k > 0 and z - self.grid[k - 1] < self.grid[k] - z:
            k -= 1
        action = int(self.actions[k])
        # Isolated stop nodes below b_c can only come from ties within tol.
        while action == STOP and k > 0:
            k -= 1
            action = int(self.actions[k])
        return action if action != STOP else self.continuation

    def matches(self, responses: ResponseModel, change_point: ChangePointModel) -> bool:
        return (
            self.signature == model_signature(responses, change_point)
            and self.prior == change_point.prior
        )


class PolicyFile(BaseModel):
    """On-disk form of a DPPolicy."""

    format: str = Field(default="changeaccel-policy/1")
    c: float
    b_c: float
    prior: float
    alpha: Optional[float] = None
    continuation: int
    signature: list[list[float]]
    grid_kind: str
    grid_size: int
    tol: float
    iterations: int
    residual: float
    grid: list[float]
    values: list[float]
    actions: list[int]


def save_policy(policy: DPPolicy, path: Union[str, Path]) -> Path:
    """Write a policy as JSON. Floats are written in shortest round-trip form.

    Raises:
        ResultStorageError: If the file cannot be written
    """
    path = Path(path)
    record = PolicyFile(
        c=policy.c,
        b_c=policy.b_c,
        prior=policy.prior,
        alpha=policy.alpha,
        continuation=policy.continuation,
        signature=policy.signature,
        grid_kind=policy.grid_kind,
        grid_size=policy.grid_size,
        tol=policy.tol,
        iterations=policy.iterations,
        residual=policy.residual,
        grid=policy.grid.tolist(),
        values=policy.values.tolist(),
        actions=[int(a) for a in policy.actions],
    )
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(record.model_dump()), encoding="utf-8")
    except OSError as e:
        logger.error("policy_write_failed", path=str(path), error=str(e), exc_info=True)
        raise ResultStorageError(f"cannot write policy file {path}: {e}") from e
    logger.info("policy_saved", path=str(path), c=policy.c, b_c=policy.b_c)
    return path


def load_policy(path: Union[str, Path]) -> DPPolicy:
    """Read a policy written by ``save_policy``.

    Raises:
        ConfigError: If the file is missing or malformed
    """
    path = Path(path)
    try:
        record = PolicyFile.model_validate(json.loads(path.read_text(encoding="utf-8")))
    except OSError as e:
        raise ConfigError(f"cannot read policy file: {e.strerror or e}", key=str(path)) from e
    except (json.JSONDecodeError, ValidationError) as e:
        raise ConfigError(f"malformed policy file: {e}", key=str(path)) from e
    if not (len(record.grid) == len(record.values) == len(record.actions)):
        raise ConfigError("grid, values and actions differ in length", key=str(path))
    return DPPolicy(
        grid=np.array(record.grid, dtype=float),
        actions=np.array(record.actions, dtype=np.int64),
        values=np.array(record.values, dtype=float),
        b_c=record.b_c,
        c=record.c,
        prior=record.prior,
        signature=record.signature,
        continuation=record.continuation,
        grid_kind=record.grid_kind,
        grid_size=record.grid_size,
        tol=record.tol,
        iterations=record.iterations,
        residual=record.residual,
        alpha=record.alpha,
    )


def require_matching(policy: DPPolicy, responses: ResponseModel, change_point: ChangePointModel) -> None:
    if not policy.matches(responses, change_point):
        raise InvalidArgumentError("policy was solved for a different model")
