"""Single-replication simulator of the coupled latent/response dynamics.

Each replication owns two uniform streams: U drives the latent
transitions (U_0 decides L_0) and V drives the responses. Both are Philox
counter streams keyed by (seed, replication, stream id), so the t-th
uniform of a replication never depends on which other replications ran
before it or in which process.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from changeaccel.config import settings
from changeaccel.exceptions import HorizonExceededError, InvalidArgumentError
from changeaccel.model.changepoint import ChangePointModel
from changeaccel.model.responses import ResponseModel
from changeaccel.utils.validators import require_treatment

STREAM_LATENT = 0
STREAM_RESPONSE = 1


class CounterStream:
    """Uniforms on [0, 1) addressed by (seed, replication, stream id)."""

    BLOCK = 512

    def __init__(self, seed: int, replication: int, stream_id: int):
        if seed < 0 or replication < 0:
            raise InvalidArgumentError("seed and replication index must be non-negative")
        key = np.random.SeedSequence([int(seed), int(replication), int(stream_id)])
        self._generator = np.random.Generator(np.random.Philox(key))
        self._buffer: list[float] = []
        self._pos = 0
        self.drawn = 0

    def next(self) -> float:
        if self._pos == len(self._buffer):
            self._buffer = self._generator.random(self.BLOCK).tolist()
            self._pos = 0
        u = self._buffer[self._pos]
        self._pos += 1
        self.drawn += 1
        return u


class TrialEngine:
    """One replication of the system dynamics.

    L_0 is drawn from the prior at construction. Every ``step`` advances
    time by one: the latent state jumps to 1 with probability Pi_t when it
    is still 0, then a response is drawn from f_x or g_x according to the
    post-transition state.
    """

    def __init__(
        self,
        responses: ResponseModel,
        change_point: ChangePointModel,
        seed: int,
        replication: int = 0,
        max_horizon: Optional[int] = None,
    ):
        """Initialize the replication.

        Args:
            responses: Response model
            change_point: Change-point model
            seed: Base seed of the experiment
            replication: Replication index within the experiment
            max_horizon: Step cap (defaults to settings.MAX_HORIZON)
        """
        if responses.n_treatments != change_point.n_treatments:
            raise InvalidArgumentError(
                f"response model has {responses.n_treatments} treatments, "
                f"change-point model has {change_point.n_treatments}"
            )
        self.responses = responses
        self.change_point = change_point
        self.seed = seed
        self.replication = replication
        self.max_horizon = max_horizon or settings.MAX_HORIZON

        self._latent_stream = CounterStream(seed, replication, STREAM_LATENT)
        self._response_stream = CounterStream(seed, replication, STREAM_RESPONSE)

        self.t = 0
        self.history: list[int] = []
        self.last_transition: Optional[float] = None
        self.latent = 1 if self._latent_stream.next() < change_point.prior else 0
        self.change_time: Optional[int] = 0 if self.latent else None

    @property
    def n_treatments(self) -> int:
        return self.responses.n_treatments

    def step(self, treatment: int) -> tuple[float, int]:
        """Assign ``treatment`` at time t+1 and observe the response.

        Returns:
            (response, latent state after the step)

        Raises:
            HorizonExceededError: If the step cap is reached
        """
        if self.t >= self.max_horizon:
            raise HorizonExceededError(self.max_horizon)
        require_treatment(treatment, self.n_treatments)

        self.t += 1
        self.history.append(treatment)
        pi = self.change_point.transition(self.history)
        self.last_transition = pi

        # U_t is consumed on every step so that t indexes both streams.
        u = self._latent_stream.next()
        if not self.latent and u < pi:
            self.latent = 1
            self.change_time = self.t

        y = self.responses.sample(treatment, self.latent == 1, self._response_stream.next())
        return y, self.latent

    def resolve_change_time(self, treatment: int) -> Optional[int]:
        """Return Theta, continuing only the latent chain if needed.

        After a procedure stops before the change, the latent chain is run
        forward on stream U under ``treatment`` (no responses are drawn).
        Returns None when the change can never happen under ``treatment``.
        """
        if self.change_time is not None:
            return self.change_time
        if self.change_point.never_changes(treatment):
            return None

        history = list(self.history)
        t = self.t
        while True:
            if t >= self.max_horizon:
                raise HorizonExceededError(self.max_horizon)
            t += 1
            history.append(treatment)
            if self._latent_stream.next() < self.change_point.transition(history):
                return t
