"""Response models: a pre-/post-change density pair for every treatment."""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy.special import ndtri, rel_entr

from changeaccel.config import settings
from changeaccel.exceptions import InvalidArgumentError
from changeaccel.utils.validators import require_positive, require_probability, require_treatment

# Smallest positive uniform handed to an inverse CDF.
_TINY = float(np.nextafter(0.0, 1.0))


class KLPair(NamedTuple):
    """Kullback-Leibler numbers of one treatment, in nats.

    ``I`` is KL(g || f) and ``J`` is KL(f || g). Standard errors are zero
    for closed-form families.
    """

    I: float
    J: float
    I_se: float = 0.0
    J_se: float = 0.0


class FiniteSupport(NamedTuple):
    """Response values with their pre- and post-change probabilities."""

    values: np.ndarray
    pre: np.ndarray
    post: np.ndarray


class ResponsePair(ABC):
    """Pre-change density f and post-change density g of one treatment.

    Subclasses map a single uniform to a response (the inverse CDF of f or
    g), so the response stream of a trial is a plain stream of uniforms.
    """

    family: str = "custom"

    @abstractmethod
    def sample(self, changed: bool, u: float) -> float:
        """Map a uniform ``u`` in [0, 1) to a response drawn from g (changed) or f."""

    @abstractmethod
    def log_density_ratio(self, y: float) -> float:
        """Return log(g(y) / f(y))."""

    def finite_support(self) -> Optional[FiniteSupport]:
        """Return the finite response space, or None for continuous families."""
        return None

    def kl_divergences(self, draws: Optional[int] = None, seed: int = 0) -> KLPair:
        """Monte Carlo estimate of (I, J) for families without a closed form.

        Args:
            draws: Number of draws under each density
            seed: Seed of the sampling generator

        Returns:
            KLPair with standard errors of both estimates
        """
        draws = draws or settings.KL_MC_DRAWS
        rng = np.random.default_rng(seed)
        post_llr = np.fromiter(
            (self.log_density_ratio(self.sample(True, u)) for u in rng.random(draws)),
            dtype=float,
            count=draws,
        )
        pre_llr = -np.fromiter(
            (self.log_density_ratio(self.sample(False, u)) for u in rng.random(draws)),
            dtype=float,
            count=draws,
        )
        root = math.sqrt(draws)
        return KLPair(
            I=float(post_llr.mean()),
            J=float(pre_llr.mean()),
            I_se=float(post_llr.std(ddof=1) / root),
            J_se=float(pre_llr.std(ddof=1) / root),
        )


@dataclass(frozen=True)
class BernoulliResponse(ResponsePair):
    """Bernoulli responses with P(Y=1) = f before and g after the change.

    ``g`` defaults to 1 - f.
    """

    f: float
    g: Optional[float] = None
    family: str = field(default="bernoulli", init=False)
    _llr: tuple[float, float] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        f = require_probability(self.f, "f", open_low=True, open_high=True)
        g = 1.0 - f if self.g is None else require_probability(self.g, "g", open_low=True, open_high=True)
        if g == f:
            raise InvalidArgumentError(
                f"Bernoulli parameters f={f} and g={g} coincide; the treatment carries no information"
            )
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "_llr", (math.log((1.0 - g) / (1.0 - f)), math.log(g / f)))

    def sample(self, changed: bool, u: float) -> int:
        return 1 if u < (self.g if changed else self.f) else 0

    def log_density_ratio(self, y: float) -> float:
        return self._llr[1] if y else self._llr[0]

    def finite_support(self) -> FiniteSupport:
        return FiniteSupport(
            values=np.array([0.0, 1.0]),
            pre=np.array([1.0 - self.f, self.f]),
            post=np.array([1.0 - self.g, self.g]),
        )

    def kl_divergences(self, draws: Optional[int] = None, seed: int = 0) -> KLPair:
        f, g = self.f, self.g
        return KLPair(
            I=float(rel_entr(g, f) + rel_entr(1.0 - g, 1.0 - f)),
            J=float(rel_entr(f, g) + rel_entr(1.0 - f, 1.0 - g)),
        )


@dataclass(frozen=True)
class GaussianResponse(ResponsePair):
    """Normal responses with a mean shift from ``mu0`` to ``mu1``."""

    mu0: float
    mu1: float
    sigma: float = 1.0
    family: str = field(default="gaussian", init=False)

    def __post_init__(self) -> None:
        require_positive(self.sigma, "sigma")
        if not (math.isfinite(self.mu0) and math.isfinite(self.mu1)):
            raise InvalidArgumentError("Gaussian means must be finite")
        if self.mu0 == self.mu1:
            raise InvalidArgumentError(
                f"Gaussian means mu0={self.mu0} and mu1={self.mu1} coincide; the treatment carries no information"
            )

    def sample(self, changed: bool, u: float) -> float:
        mean = self.mu1 if changed else self.mu0
        return mean + self.sigma * float(ndtri(max(u, _TINY)))

    def log_density_ratio(self, y: float) -> float:
        two_var = 2.0 * self.sigma * self.sigma
        return ((y - self.mu0) ** 2 - (y - self.mu1) ** 2) / two_var

    def kl_divergences(self, draws: Optional[int] = None, seed: int = 0) -> KLPair:
        kl = (self.mu1 - self.mu0) ** 2 / (2.0 * self.sigma * self.sigma)
        return KLPair(I=kl, J=kl)


@dataclass(frozen=True)
class ResponseModel:
    """Response pairs of treatments 1..K."""

    treatments: tuple[ResponsePair, ...]

    def __post_init__(self) -> None:
        pairs = tuple(self.treatments)
        if not pairs:
            raise InvalidArgumentError("a response model needs at least one treatment")
        for pair in pairs:
            if not isinstance(pair, ResponsePair):
                raise InvalidArgumentError(f"{pair!r} is not a ResponsePair")
        object.__setattr__(self, "treatments", pairs)

    @classmethod
    def bernoulli(cls, f: Sequence[float]) -> "ResponseModel":
        """Symmetric Bernoulli model: f_x before, 1 - f_x after the change."""
        return cls(tuple(BernoulliResponse(value) for value in f))

    @property
    def n_treatments(self) -> int:
        return len(self.treatments)

    @property
    def is_finite(self) -> bool:
        return all(pair.finite_support() is not None for pair in self.treatments)

    def pair(self, treatment: int) -> ResponsePair:
        require_treatment(treatment, self.n_treatments)
        return self.treatments[treatment - 1]

    def sample(self, treatment: int, changed: bool, u: float) -> float:
        return self.treatments[treatment - 1].sample(changed, u)

    def log_density_ratio(self, treatment: int, y: float) -> float:
        return self.treatments[treatment - 1].log_density_ratio(y)


def kl_divergences(model: ResponseModel, treatment: int) -> KLPair:
    """Return (I_x, J_x) in nats for ``treatment``.

    Raises:
        InvalidArgumentError: If the treatment label is out of range or the
            divergences are not strictly positive and finite
    """
    kl = model.pair(treatment).kl_divergences()
    for name, value in (("I", kl.I), ("J", kl.J)):
        if not math.isfinite(value) or value <= 0.0:
            raise InvalidArgumentError(
                f"{name}_{treatment} = {value!r}; divergences must be positive and finite"
            )
    return kl
