"""
Core data models for the simplest Bell scenario.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .exceptions import (
    InvalidPointError,
    InvalidRealizationError,
    UnsupportedLevelError,
)

Pair = Tuple[float, float]
Grid = Tuple[Pair, Pair]

# Entries may overshoot [-1, 1] by trigonometric round-off.
_ENTRY_SLACK = 1e-12


def normalize_angle(theta: float) -> float:
    """Map an angle to [-pi, pi)."""
    wrapped = math.fmod(theta + math.pi, 2.0 * math.pi)
    if wrapped < 0.0:
        wrapped += 2.0 * math.pi
    return wrapped - math.pi


class Level(Enum):
    """NPA hierarchy level."""
    ONE = "1"
    ONE_AB = "1+AB"
    TWO = "2"
    THREE = "3"
    FOUR = "4"

    @property
    def rank(self) -> int:
        """Position in the hierarchy, coarsest first."""
        return _LEVEL_ORDER.index(self)

    @property
    def column_suffix(self) -> str:
        """Suffix used in CSV column names (lambda_1ab, value_2, ...)."""
        return self.value.replace("+", "").lower()

    @property
    def max_word_length(self) -> int:
        """Longest basis word at this level."""
        return 2 if self is Level.ONE_AB else int(self.value)

    @classmethod
    def parse(cls, label: str) -> "Level":
        """Parse '1', '1+AB', '1ab', '2', ... case-insensitively."""
        key = label.strip().upper().replace(" ", "")
        if key == "1AB":
            key = "1+AB"
        for level in cls:
            if level.value == key:
                return level
        raise UnsupportedLevelError(f"Unsupported level '{label}' (expected one of 1, 1+AB, 2, 3, 4)")

    @classmethod
    def parse_list(cls, text: str) -> List["Level"]:
        """Parse a comma-separated level list and sort it coarsest first."""
        levels = {cls.parse(part) for part in text.split(",") if part.strip()}
        if not levels:
            raise UnsupportedLevelError("Empty level list")
        return sorted(levels, key=lambda level: level.rank)

    def __str__(self) -> str:
        return self.value


_LEVEL_ORDER = [Level.ONE, Level.ONE_AB, Level.TWO, Level.THREE, Level.FOUR]


class SampleMode(Enum):
    """How scatter initial points are drawn."""
    RANDOM_POINT = "random"
    REALIZATION = "real"
    REALIZATION_POSITIVE = "real8"
    REALIZATION_CRIT1 = "crit1"
    REALIZATION_CRIT12 = "crit12"

    @classmethod
    def parse(cls, label: str) -> "SampleMode":
        for mode in cls:
            if mode.value == label.strip().lower():
                return mode
        raise ValueError(f"Unknown sample mode '{label}'")


@dataclass(frozen=True)
class Realization:
    """Two-qubit realization: measurement angles and Schmidt angle chi."""
    theta_a: Pair
    theta_b: Pair
    chi: float

    def __post_init__(self):
        values = list(self.theta_a) + list(self.theta_b) + [self.chi]
        if len(self.theta_a) != 2 or len(self.theta_b) != 2:
            raise InvalidRealizationError("theta_a and theta_b need exactly two angles each")
        if not all(math.isfinite(v) for v in values):
            raise InvalidRealizationError(f"Non-finite realization parameter in {values}")
        if not 0.0 < self.chi <= math.pi / 4 + 1e-15:
            raise InvalidRealizationError(f"chi={self.chi} outside (0, pi/4]")
        object.__setattr__(self, "theta_a", tuple(normalize_angle(t) for t in self.theta_a))
        object.__setattr__(self, "theta_b", tuple(normalize_angle(t) for t in self.theta_b))
        object.__setattr__(self, "chi", min(float(self.chi), math.pi / 4))

    @classmethod
    def from_values(cls, values: Iterable[float]) -> "Realization":
        """Build from (thetaA0, thetaA1, thetaB0, thetaB1, chi)."""
        v = [float(x) for x in values]
        if len(v) != 5:
            raise InvalidRealizationError(f"Expected 5 realization parameters, got {len(v)}")
        return cls((v[0], v[1]), (v[2], v[3]), v[4])

    def as_tuple(self) -> Tuple[float, float, float, float, float]:
        return (*self.theta_a, *self.theta_b, self.chi)

    @property
    def sin2chi(self) -> float:
        return math.sin(2.0 * self.chi)

    @property
    def cos2chi(self) -> float:
        return math.cos(2.0 * self.chi)


@dataclass(frozen=True)
class CorrelationPoint:
    """The eight observed moments <A_x>, <B_y>, <A_x B_y>."""
    a: Pair
    b: Pair
    c: Grid

    def __post_init__(self):
        a = tuple(float(v) for v in self.a)
        b = tuple(float(v) for v in self.b)
        c = tuple(tuple(float(v) for v in row) for row in self.c)
        if len(a) != 2 or len(b) != 2 or len(c) != 2 or any(len(row) != 2 for row in c):
            raise InvalidPointError("A correlation point needs 2 + 2 marginals and 2x2 correlators")
        entries = list(a) + list(b) + [v for row in c for v in row]
        for v in entries:
            if not math.isfinite(v) or abs(v) > 1.0 + _ENTRY_SLACK:
                raise InvalidPointError(f"Moment {v} outside [-1, 1]")
        clip = lambda v: max(-1.0, min(1.0, v))
        object.__setattr__(self, "a", tuple(clip(v) for v in a))
        object.__setattr__(self, "b", tuple(clip(v) for v in b))
        object.__setattr__(self, "c", tuple(tuple(clip(v) for v in row) for row in c))

    @classmethod
    def from_values(cls, values: Iterable[float]) -> "CorrelationPoint":
        """Build from (a0, a1, b0, b1, c00, c01, c10, c11)."""
        v = [float(x) for x in values]
        if len(v) != 8:
            raise InvalidPointError(f"Expected 8 moments, got {len(v)}")
        return cls((v[0], v[1]), (v[2], v[3]), ((v[4], v[5]), (v[6], v[7])))

    @classmethod
    def zero(cls) -> "CorrelationPoint":
        return cls((0.0, 0.0), (0.0, 0.0), ((0.0, 0.0), (0.0, 0.0)))

    def as_values(self) -> Tuple[float, ...]:
        return (*self.a, *self.b, *self.c[0], *self.c[1])

    def correlators(self) -> np.ndarray:
        return np.array(self.c, dtype=float)


@dataclass(frozen=True)
class BellFunctional:
    """Linear functional sum alpha_x <A_x> + beta_y <B_y> + gamma_xy <A_x B_y>."""
    alpha: Pair = (0.0, 0.0)
    beta: Pair = (0.0, 0.0)
    gamma: Grid = ((0.0, 0.0), (0.0, 0.0))

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(v) for v in self.alpha))
        object.__setattr__(self, "beta", tuple(float(v) for v in self.beta))
        object.__setattr__(self, "gamma", tuple(tuple(float(v) for v in row) for row in self.gamma))
        coefficients = list(self.alpha) + list(self.beta) + [v for row in self.gamma for v in row]
        if len(coefficients) != 8 or not all(math.isfinite(v) for v in coefficients):
            raise ValueError(f"Bell functional needs 8 finite coefficients, got {coefficients}")

    @classmethod
    def from_values(cls, values: Iterable[float]) -> "BellFunctional":
        """Same coefficient order as CorrelationPoint.from_values."""
        v = [float(x) for x in values]
        if len(v) != 8:
            raise ValueError(f"Expected 8 coefficients, got {len(v)}")
        return cls((v[0], v[1]), (v[2], v[3]), ((v[4], v[5]), (v[6], v[7])))


@dataclass(frozen=True)
class SBranch:
    """Entanglement-usage parameters of one setting pair."""
    j: float
    k: float
    s_plus: float
    s_minus: float


@dataclass(frozen=True)
class CriterionReport:
    """Residuals of the five-equality extremality criterion for a realization."""
    s_plus: Grid
    s_minus: Grid
    eq11_residual: float
    eq8_product: float
    tlm_scaled_residual_b: float
    tlm_scaled_residual_a: float
    d_b: Pair
    d_a: Pair
    branch_condition: bool
    tolerance: float

    @property
    def eq11_satisfied(self) -> bool:
        return self.eq11_residual <= self.tolerance

    @property
    def eq8_satisfied(self) -> bool:
        return self.eq8_product >= -self.tolerance

    @property
    def tlm_b_satisfied(self) -> bool:
        return self.tlm_scaled_residual_b <= self.tolerance

    @property
    def tlm_a_satisfied(self) -> bool:
        return self.tlm_scaled_residual_a <= self.tolerance

    @property
    def satisfied(self) -> bool:
        """All five equalities plus the positivity product."""
        return (self.eq11_satisfied and self.eq8_satisfied
                and self.tlm_b_satisfied and self.tlm_a_satisfied)

    @property
    def max_residual(self) -> float:
        return max(self.eq11_residual, self.tlm_scaled_residual_b, self.tlm_scaled_residual_a)


@dataclass
class TableRow:
    """One x of a Table I style comparison."""
    x: float
    quantum: float
    value_per_level: Dict[Level, float] = field(default_factory=dict)
    status_per_level: Dict[Level, str] = field(default_factory=dict)
    certified: bool = True

    def gap(self, level: Level) -> float:
        """Relaxation value minus the quantum oracle."""
        return self.value_per_level[level] - self.quantum


@dataclass
class ScatterRecord:
    """Maximum lambda per level for one sampled initial point."""
    sample_id: int
    mode: SampleMode
    seed: int
    lambda_per_level: Dict[Level, float] = field(default_factory=dict)
    deviated: bool = False
    status_per_level: Dict[Level, str] = field(default_factory=dict)
    certified: bool = True
    point: Optional[CorrelationPoint] = None

    def lambda_gap(self, low: Level, high: Level) -> float:
        return self.lambda_per_level[low] - self.lambda_per_level[high]


@dataclass
class ScatterSummary:
    """Aggregate statistics of a scatter run."""
    count: int
    deviated: int
    max_gap: float
    lambda_min: Dict[Level, float] = field(default_factory=dict)
    lambda_max: Dict[Level, float] = field(default_factory=dict)
    non_optimal: int = 0
    uncertified: int = 0

    @property
    def deviated_fraction(self) -> float:
        return self.deviated / self.count if self.count else 0.0


class ScaleSide(Enum):
    """Which guessing probability divides the correlators."""
    BY_B = "by-B"
    BY_A = "by-A"


@dataclass
class CrossCheckResult:
    """Criterion residuals on realizations that maximize random functionals."""
    tolerance: float
    max_residuals: List[float] = field(default_factory=list)
    satisfied: List[bool] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.satisfied)

    @property
    def passed(self) -> int:
        return sum(self.satisfied)

    @property
    def pass_fraction(self) -> float:
        return self.passed / self.count if self.count else 0.0
