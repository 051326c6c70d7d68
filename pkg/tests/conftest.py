"""Shared fixtures; puts src/ on the import path like the entry script does."""

import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from npaboundary.core.models import CorrelationPoint, Realization  # noqa: E402

SQRT2_HALF = math.sqrt(2.0) / 2.0


@pytest.fixture
def chsh_realization():
    """Realization reaching the Tsirelson bound."""
    return Realization((0.0, math.pi / 2), (math.pi / 4, -math.pi / 4), math.pi / 4)


@pytest.fixture
def chsh_point():
    return CorrelationPoint((0.0, 0.0), (0.0, 0.0), ((SQRT2_HALF, SQRT2_HALF), (SQRT2_HALF, -SQRT2_HALF)))


@pytest.fixture
def pr_box():
    return CorrelationPoint((0.0, 0.0), (0.0, 0.0), ((1.0, 1.0), (1.0, -1.0)))


@pytest.fixture
def zero_point():
    return CorrelationPoint.zero()


@pytest.fixture
def rng():
    return np.random.default_rng(42)
