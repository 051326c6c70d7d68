"""
Closed-form quantum values and the Bell functionals they belong to.
"""

import math
from enum import Enum

from ..core.exceptions import DomainError
from ..core.models import BellFunctional

CHSH_GAMMA = ((1.0, 1.0), (1.0, -1.0))
TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)


class QbFamily(Enum):
    """Biased CHSH families with known quantum maxima."""
    QB2 = "qb2"
    QB3 = "qb3"

    @classmethod
    def parse(cls, label: str) -> "QbFamily":
        for family in cls:
            if family.value == label.strip().lower():
                return family
        raise ValueError(f"Unknown family '{label}' (expected qb2 or qb3)")


def _check_domain(x: float) -> None:
    if not 0.0 <= x <= 2.0:
        raise DomainError(f"x={x} outside [0, 2]")


def quantum_value_qb2(x: float) -> float:
    _check_domain(x)
    return math.sqrt(2.0 * x * x + 8.0)


def quantum_value_qb3(x: float) -> float:
    """Piecewise maximum; x = 1 takes the linear branch (both branches give 3)."""
    _check_domain(x)
    if x >= 1.0:
        return x + 2.0
    x2 = x * x
    return (math.sqrt((2.0 - x2) * (4.0 - 3.0 * x2)) - x2) / (1.0 - x2)


def quantum_value(family: QbFamily, x: float) -> float:
    if family is QbFamily.QB2:
        return quantum_value_qb2(x)
    return quantum_value_qb3(x)


def chsh_functional() -> BellFunctional:
    return BellFunctional(gamma=CHSH_GAMMA)


def qb_functional(family: QbFamily, x: float) -> BellFunctional:
    """CHSH correlator part plus the family's marginal bias."""
    if not math.isfinite(x):
        raise DomainError(f"x={x} is not finite")
    if family is QbFamily.QB2:
        return BellFunctional(alpha=(x, 0.0), beta=(0.0, 0.0), gamma=CHSH_GAMMA)
    return BellFunctional(alpha=(x, x), beta=(-x, 0.0), gamma=CHSH_GAMMA)
