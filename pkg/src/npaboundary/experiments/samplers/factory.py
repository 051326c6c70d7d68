"""
Factory for creating scatter samplers.
"""

from typing import Dict, List, Optional, Type

from ...config.settings import Settings
from ...core.models import SampleMode
from .base import BaseSampler
from .realizations import (
    Crit1Sampler,
    Crit12Sampler,
    PositiveRealizationSampler,
    RandomPointSampler,
    RealizationSampler,
)


class SamplerFactory:
    """Factory for creating sampler instances."""

    # Registry of supported modes
    _samplers: Dict[SampleMode, Type[BaseSampler]] = {
        SampleMode.RANDOM_POINT: RandomPointSampler,
        SampleMode.REALIZATION: RealizationSampler,
        SampleMode.REALIZATION_POSITIVE: PositiveRealizationSampler,
        SampleMode.REALIZATION_CRIT1: Crit1Sampler,
        SampleMode.REALIZATION_CRIT12: Crit12Sampler,
    }

    @classmethod
    def create(cls, mode: SampleMode, settings: Optional[Settings] = None) -> BaseSampler:
        """Create a sampler instance."""
        if mode not in cls._samplers:
            raise ValueError(f"Sample mode '{mode.value}' is not supported")
        return cls._samplers[mode](settings or Settings())

    @classmethod
    def get_supported_modes(cls) -> List[SampleMode]:
        return list(cls._samplers.keys())

    @classmethod
    def register(cls, mode: SampleMode, sampler_class: Type[BaseSampler]) -> None:
        """Register a sampler class for a mode."""
        cls._samplers[mode] = sampler_class
