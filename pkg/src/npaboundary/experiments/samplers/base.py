"""
Base classes for scatter initial-point samplers.
"""

import logging
import math
from abc import ABC, abstractmethod
from typing import Callable

import numpy as np

from ...config.settings import Settings
from ...core.bell import correlations_from_realization
from ...core.exceptions import SamplerExhaustedError
from ...core.models import CorrelationPoint, Realization, SampleMode

logger = logging.getLogger(__name__)


def sample_random_point(rng: np.random.Generator) -> CorrelationPoint:
    """Eight i.i.d. uniform moments on [-1, 1]."""
    return CorrelationPoint.from_values(rng.uniform(-1.0, 1.0, size=8))


def sample_base_realization(rng: np.random.Generator) -> Realization:
    """Angles uniform on [-pi, pi), chi uniform on (0, pi/4]."""
    thetas = rng.uniform(-math.pi, math.pi, size=4)
    chi = 0.25 * math.pi * (1.0 - rng.random())
    return Realization((thetas[0], thetas[1]), (thetas[2], thetas[3]), chi)


class BaseSampler(ABC):
    """Base class for samplers; one subclass per SampleMode."""

    def __init__(self, settings: Settings):
        self.settings = settings
        self.mode = self.get_mode()

    @abstractmethod
    def get_mode(self) -> SampleMode:
        """The mode this sampler implements."""
        pass

    @abstractmethod
    def draw(self, rng: np.random.Generator) -> CorrelationPoint:
        """Draw one correlation point."""
        pass

    def is_realization_sampler(self) -> bool:
        return False


class BaseRealizationSampler(BaseSampler):
    """Samplers whose points come from two-qubit realizations."""

    @abstractmethod
    def draw_realization(self, rng: np.random.Generator) -> Realization:
        """Draw one realization passing this sampler's filter."""
        pass

    def draw(self, rng: np.random.Generator) -> CorrelationPoint:
        return correlations_from_realization(self.draw_realization(rng))

    def is_realization_sampler(self) -> bool:
        return True

    def _reject_until(self, rng: np.random.Generator,
                      accept: Callable[[Realization], bool]) -> Realization:
        """Draw base realizations until one is accepted or the budget runs out."""
        budget = self.settings.rejection_budget
        for attempt in range(1, budget + 1):
            candidate = sample_base_realization(rng)
            if accept(candidate):
                logger.debug("%s: accepted after %d draws", self.mode.value, attempt)
                return candidate
        raise SamplerExhaustedError(
            f"{self.mode.value} sampler rejected {budget} consecutive draws"
        )
