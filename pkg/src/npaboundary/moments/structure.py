"""
Symbolic layout of NPA moment matrices.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..core.models import Level
from .words import A0, A1, B0, B1, IDENTITY, Word, adjoint, basis_words, word_class

logger = logging.getLogger(__name__)


def marginal_word(party: str, setting: int) -> Word:
    return Word(((A0, A1) if party == "A" else (B0, B1))[setting:setting + 1])


def correlator_word(x: int, y: int) -> Word:
    return Word(((A0, A1)[x], (B0, B1)[y]))


FIXED_WORDS: Tuple[Word, ...] = (
    IDENTITY,
    marginal_word("A", 0), marginal_word("A", 1),
    marginal_word("B", 0), marginal_word("B", 1),
    *(correlator_word(x, y) for x, y in product((0, 1), (0, 1))),
)


@dataclass(frozen=True, eq=False)
class MomentStructure:
    """Which moment class sits in each cell of the level's moment matrix."""
    level: Level
    basis: Tuple[Word, ...]
    classes: Dict[Word, int]
    fixed_classes: Dict[Word, int]
    cell_classes: np.ndarray
    basis_matrices: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    @property
    def class_words(self) -> List[Word]:
        """Representative word of each class, by variable index."""
        words = [IDENTITY] * self.num_classes
        for word, index in self.classes.items():
            words[index] = word
        return words

    @property
    def free_indices(self) -> List[int]:
        fixed = set(self.fixed_classes.values())
        return [i for i in range(self.num_classes) if i not in fixed]

    def class_index(self, word: Word) -> int:
        """Variable index of the class containing word (KeyError if absent)."""
        return self.classes[word_class(word)]

    def moment_matrix(self, values: Sequence[float]) -> np.ndarray:
        """Assemble Gamma from one value per class."""
        return np.tensordot(np.asarray(values, dtype=float), self.basis_matrices, axes=1)


def _freeze(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@lru_cache(maxsize=None)
def build_structure(level: Level) -> MomentStructure:
    """Assign each cell (u, v) the class of u^dagger v; classes numbered by first occurrence."""
    basis = tuple(basis_words(level))
    dim = len(basis)
    classes: Dict[Word, int] = {}
    cells = np.empty((dim, dim), dtype=int)
    for row, u in enumerate(basis):
        u_dagger = adjoint(u)
        for col, v in enumerate(basis):
            representative = word_class(u_dagger * v)
            if representative not in classes:
                classes[representative] = len(classes)
            cells[row, col] = classes[representative]

    indicators = np.zeros((len(classes), dim, dim))
    rows, cols = np.indices((dim, dim))
    indicators[cells, rows, cols] = 1.0

    fixed = {word: classes[word_class(word)] for word in FIXED_WORDS}
    logger.debug("Level %s: dim %d, %d moment classes (%d free)",
                 level, dim, len(classes), len(classes) - len(fixed))
    return MomentStructure(
        level=level,
        basis=basis,
        classes=classes,
        fixed_classes=fixed,
        cell_classes=_freeze(cells),
        basis_matrices=_freeze(indicators),
    )
