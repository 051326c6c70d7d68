"""
Assembly of the two semidefinite problem shapes over a moment structure.

Both are stated as: maximize objective . y subject to f0 + sum_i y_i f[i] >= 0.
"""

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Tuple

import numpy as np

from ..core.models import BellFunctional, CorrelationPoint
from .structure import MomentStructure, correlator_word, marginal_word
from .words import IDENTITY, Word

LAMBDA_LABEL = "lambda"


@dataclass(frozen=True, eq=False)
class SdpProblem:
    """Linear matrix inequality maximization instance."""
    f0: np.ndarray
    f: np.ndarray
    objective: np.ndarray
    labels: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        f0 = np.asarray(self.f0, dtype=float)
        f = np.asarray(self.f, dtype=float)
        objective = np.asarray(self.objective, dtype=float)
        if f0.ndim != 2 or f0.shape[0] != f0.shape[1]:
            raise ValueError(f"f0 must be square, got shape {f0.shape}")
        n = f0.shape[0]
        if f.ndim != 3 or f.shape[1:] != (n, n):
            raise ValueError(f"f must have shape (m, {n}, {n}), got {f.shape}")
        if objective.shape != (f.shape[0],):
            raise ValueError(f"objective must have length {f.shape[0]}, got {objective.shape}")
        if not np.allclose(f0, f0.T) or not np.allclose(f, np.transpose(f, (0, 2, 1))):
            raise ValueError("Constraint matrices must be symmetric")
        if self.labels and len(self.labels) != f.shape[0]:
            raise ValueError("One label per variable expected")
        object.__setattr__(self, "f0", f0)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "objective", objective)

    @property
    def n(self) -> int:
        return self.f0.shape[0]

    @property
    def m(self) -> int:
        return self.f.shape[0]

    def matrix(self, y) -> np.ndarray:
        """f0 + sum_i y_i f[i]."""
        return self.f0 + np.tensordot(np.asarray(y, dtype=float), self.f, axes=1)


def fixed_moments(p: CorrelationPoint) -> Dict[Word, float]:
    """Observed value of every pinned moment class."""
    values = {IDENTITY: 1.0}
    for setting in (0, 1):
        values[marginal_word("A", setting)] = p.a[setting]
        values[marginal_word("B", setting)] = p.b[setting]
    for x, y in product((0, 1), (0, 1)):
        values[correlator_word(x, y)] = p.c[x][y]
    return values


def functional_coefficients(f: BellFunctional) -> Dict[Word, float]:
    coefficients = {}
    for setting in (0, 1):
        coefficients[marginal_word("A", setting)] = f.alpha[setting]
        coefficients[marginal_word("B", setting)] = f.beta[setting]
    for x, y in product((0, 1), (0, 1)):
        coefficients[correlator_word(x, y)] = f.gamma[x][y]
    return coefficients


def lambda_problem(s: MomentStructure, p: CorrelationPoint) -> SdpProblem:
    """Maximize lambda with Gamma(y) - lambda I >= 0 and the observed moments pinned."""
    f0 = np.zeros((s.dim, s.dim))
    for word, value in fixed_moments(p).items():
        f0 += value * s.basis_matrices[s.fixed_classes[word]]

    free = s.free_indices
    words = s.class_words
    f = np.concatenate([s.basis_matrices[free], -np.eye(s.dim)[np.newaxis]], axis=0)
    objective = np.zeros(len(free) + 1)
    objective[-1] = 1.0
    labels = tuple(str(words[i]) for i in free) + (LAMBDA_LABEL,)
    return SdpProblem(f0=f0, f=f, objective=objective, labels=labels)


def value_problem(s: MomentStructure, f: BellFunctional) -> SdpProblem:
    """Maximize the Bell functional over Gamma(y) >= 0 with the identity moment at 1."""
    identity = s.fixed_classes[IDENTITY]
    variables = [i for i in range(s.num_classes) if i != identity]
    words = s.class_words
    coefficients = functional_coefficients(f)
    objective = np.array([coefficients.get(words[i], 0.0) for i in variables])
    return SdpProblem(
        f0=np.array(s.basis_matrices[identity]),
        f=s.basis_matrices[variables],
        objective=objective,
        labels=tuple(str(words[i]) for i in variables),
    )
