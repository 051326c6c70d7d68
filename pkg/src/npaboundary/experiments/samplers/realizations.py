"""
Concrete samplers: random points and filtered two-qubit realizations.
"""

import logging
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import least_squares

from ...config.settings import Settings
from ...core.bell import (
    branch_condition,
    correlations_from_realization,
    criterion_report,
    guessing_probabilities,
    positivity_product,
    scaled_correlators,
    tlm_gap,
)
from ...core.exceptions import NpaBoundaryError, SamplerExhaustedError
from ...core.models import CorrelationPoint, Realization, SampleMode, ScaleSide
from .base import (
    BaseRealizationSampler,
    BaseSampler,
    sample_base_realization,
    sample_random_point,
)

logger = logging.getLogger(__name__)


class RealizationFilter(Enum):
    """Acceptance rule applied to base realizations."""
    NONE = "none"
    POSITIVE = "positive"
    CRIT1 = "crit1"
    CRIT12 = "crit12"


def _is_positive(r: Realization) -> bool:
    try:
        return positivity_product(correlations_from_realization(r)) >= 0.0
    except NpaBoundaryError:
        return False


def _is_crit1(r: Realization) -> bool:
    return branch_condition(r) and _is_positive(r)


class RandomPointSampler(BaseSampler):
    """Uniform points of the no-constraint box [-1, 1]^8."""

    def get_mode(self) -> SampleMode:
        return SampleMode.RANDOM_POINT

    def draw(self, rng: np.random.Generator) -> CorrelationPoint:
        return sample_random_point(rng)


class RealizationSampler(BaseRealizationSampler):
    """Unfiltered two-qubit realizations."""

    def get_mode(self) -> SampleMode:
        return SampleMode.REALIZATION

    def draw_realization(self, rng: np.random.Generator) -> Realization:
        return sample_base_realization(rng)


class PositiveRealizationSampler(BaseRealizationSampler):
    """Realizations whose positivity product is nonnegative."""

    def get_mode(self) -> SampleMode:
        return SampleMode.REALIZATION_POSITIVE

    def draw_realization(self, rng: np.random.Generator) -> Realization:
        return self._reject_until(rng, _is_positive)


class Crit1Sampler(BaseRealizationSampler):
    """Realizations with sin^2(2 chi) = S+ on every pair, hence equal S+ values."""

    def get_mode(self) -> SampleMode:
        return SampleMode.REALIZATION_CRIT1

    def draw_realization(self, rng: np.random.Generator) -> Realization:
        return self._reject_until(rng, _is_crit1)


def _scaled_tlm_equations(theta_b: Sequence[float], chi: float, theta_a: Sequence[float]) -> np.ndarray:
    """Signed scaled-TLM gaps (by-B, by-A) as functions of Bob's angles."""
    r = Realization(tuple(theta_a), (float(theta_b[0]), float(theta_b[1])), chi)
    p = correlations_from_realization(r)
    d_b, d_a = guessing_probabilities(r)
    return np.array([
        tlm_gap(scaled_correlators(p, d_b, ScaleSide.BY_B)),
        tlm_gap(scaled_correlators(p, d_a, ScaleSide.BY_A)),
    ])


def solve_crit12(base: Realization, start: Sequence[float], tol: float) -> Optional[Realization]:
    """Solve both scaled-TLM equalities for Bob's angles with chi and Alice's angles fixed.

    Returns None when the damped solve does not land on a realization passing
    the full criterion at tol.
    """
    try:
        result = least_squares(
            _scaled_tlm_equations,
            np.asarray(start, dtype=float),
            args=(base.chi, base.theta_a),
            method="lm",
            xtol=1e-15,
            ftol=1e-15,
            gtol=1e-15,
            max_nfev=2000,
        )
    except (NpaBoundaryError, ValueError) as exc:
        logger.debug("crit12 root-finding failed: %s", exc)
        return None
    candidate = Realization(base.theta_a, (float(result.x[0]), float(result.x[1])), base.chi)
    if not _is_crit1(candidate):
        return None
    try:
        report = criterion_report(candidate, tol)
    except NpaBoundaryError:
        return None
    return candidate if report.satisfied else None


class Crit12Sampler(BaseRealizationSampler):
    """Realizations satisfying the full five-equality criterion."""

    def get_mode(self) -> SampleMode:
        return SampleMode.REALIZATION_CRIT12

    def draw_realization(self, rng: np.random.Generator) -> Realization:
        for start in range(1, self.settings.crit12_starts + 1):
            base = self._reject_until(rng, _is_crit1)
            found = solve_crit12(base, base.theta_b, self.settings.crit12_tol)
            if found is not None:
                logger.debug("crit12: converged on start %d", start)
                return found
        raise SamplerExhaustedError(
            f"crit12 root-finding failed on {self.settings.crit12_starts} starts"
        )


_FILTER_SAMPLERS = {
    RealizationFilter.NONE: RealizationSampler,
    RealizationFilter.POSITIVE: PositiveRealizationSampler,
    RealizationFilter.CRIT1: Crit1Sampler,
    RealizationFilter.CRIT12: Crit12Sampler,
}


def sample_realization(rng: np.random.Generator,
                       filter: RealizationFilter = RealizationFilter.NONE,
                       settings: Optional[Settings] = None) -> Realization:
    """Draw one realization passing the given filter."""
    sampler = _FILTER_SAMPLERS[filter](settings or Settings())
    return sampler.draw_realization(rng)
