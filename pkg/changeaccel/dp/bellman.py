"""One-step dynamic programming on the posterior probability.

For treatment x with transition probability p_x and a response y the
posterior probability z moves to

    psi(z, x, y) = m g_x(y) / phi(y; z, x),   m = z + p_x (1 - z)
    phi(y; z, x) = m g_x(y) + (1 - p_x)(1 - z) f_x(y)

and the operator is

    T_c J (z) = min(1 - z, c + min_x sum_y phi(y; z, x) J(psi(z, x, y)))

with J evaluated between grid nodes by linear interpolation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from changeaccel.exceptions import UnsupportedModelError, UnsupportedResponseError
from changeaccel.model.changepoint import ChangePointModel
from changeaccel.model.responses import FiniteSupport, ResponseModel
from changeaccel.utils.validators import require_positive


def require_dp_model(responses: ResponseModel, change_point: ChangePointModel) -> list[FiniteSupport]:
    """Return the finite supports of all treatments, or raise if the DP does not apply."""
    if not change_point.is_markovian:
        raise UnsupportedModelError("dynamic programming needs a Markovian change-point model")
    supports = [pair.finite_support() for pair in responses.treatments]
    if any(support is None for support in supports):
        raise UnsupportedResponseError("dynamic programming needs a finite response space")
    return supports


def predictive_density(z: np.ndarray, p: float, support: FiniteSupport) -> np.ndarray:
    """phi(y; z, x) for every grid point (rows) and response value (columns)."""
    z = np.asarray(z, dtype=float)[:, None]
    moved = z + p * (1.0 - z)
    return moved * support.post[None, :] + (1.0 - p) * (1.0 - z) * support.pre[None, :]


def posterior_update(z: np.ndarray, p: float, support: FiniteSupport) -> np.ndarray:
    """psi(z, x, y) for every grid point (rows) and response value (columns)."""
    z = np.asarray(z, dtype=float)[:, None]
    moved = z + p * (1.0 - z)
    joint = moved * support.post[None, :]
    updated = joint / (joint + (1.0 - p) * (1.0 - z) * support.pre[None, :])
    return np.clip(updated, 0.0, 1.0)


@dataclass(frozen=True)
class _Transition:
    # Interpolation of J at psi(z, x, y): (1 - w) J[lo] + w J[lo + 1]
    weight: np.ndarray  # phi, shape (n, |Y|)
    lo: np.ndarray
    w: np.ndarray


class BellmanOperator:
    """T_c on a fixed grid, with psi, phi and interpolation weights precomputed."""

    def __init__(self, grid: np.ndarray, c: float, responses: ResponseModel, change_point: ChangePointModel):
        self.c = require_positive(c, "c")
        self.grid = np.asarray(grid, dtype=float)
        supports = require_dp_model(responses, change_point)
        self.stop_cost = 1.0 - self.grid
        last = len(self.grid) - 1
        self._transitions = []
        for x, support in enumerate(supports, start=1):
            p = change_point.limit(x)
            phi = predictive_density(self.grid, p, support)
            psi = posterior_update(self.grid, p, support)
            lo = np.clip(np.searchsorted(self.grid, psi, side="right") - 1, 0, last - 1)
            left, right = self.grid[lo], self.grid[lo + 1]
            w = np.clip((psi - left) / (right - left), 0.0, 1.0)
            self._transitions.append(_Transition(weight=phi, lo=lo, w=w))

    @property
    def n_treatments(self) -> int:
        return len(self._transitions)

    def continuation(self, values: np.ndarray) -> np.ndarray:
        """c + sum_y phi J(psi) per treatment, shape (K, n)."""
        rows = []
        for tr in self._transitions:
            interpolated = (1.0 - tr.w) * values[tr.lo] + tr.w * values[tr.lo + 1]
            rows.append(self.c + np.sum(tr.weight * interpolated, axis=1))
        return np.vstack(rows)

    def __call__(self, values: np.ndarray) -> np.ndarray:
        return np.minimum(self.stop_cost, self.continuation(values).min(axis=0))
