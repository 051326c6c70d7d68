"""
Operator words over the dichotomic observables A0, A1, B0, B1.

Letters are Hermitian involutions and Alice's letters commute with Bob's,
so every product has a unique canonical form: an alternating A-block
followed by an alternating B-block.
"""

import re
from dataclasses import dataclass
from itertools import product
from typing import Iterable, List, Tuple

from ..core.exceptions import UnsupportedLevelError
from ..core.models import Level

PARTIES = ("A", "B")
SETTINGS = (0, 1)

_LETTER_PATTERN = re.compile(r"([AB])([01])")


@dataclass(frozen=True, order=True)
class Letter:
    """One measurement observable."""
    party: str
    setting: int

    def __str__(self) -> str:
        return f"{self.party}{self.setting}"


A0, A1 = Letter("A", 0), Letter("A", 1)
B0, B1 = Letter("B", 0), Letter("B", 1)


@dataclass(frozen=True)
class Word:
    """Canonical operator string; the empty word is the identity."""
    letters: Tuple[Letter, ...] = ()

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse 'A0A1B1' (or '1' / '' for the identity) and reduce it."""
        text = text.replace(" ", "")
        if text in ("", "1", "I"):
            return IDENTITY
        if _LETTER_PATTERN.sub("", text):
            raise ValueError(f"Cannot parse operator word '{text}'")
        return reduce(Letter(party, int(setting)) for party, setting in _LETTER_PATTERN.findall(text))

    @property
    def a_block(self) -> Tuple[Letter, ...]:
        return tuple(letter for letter in self.letters if letter.party == "A")

    @property
    def b_block(self) -> Tuple[Letter, ...]:
        return tuple(letter for letter in self.letters if letter.party == "B")

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def sort_key(self) -> Tuple:
        """Basis order: length, balanced blocks first, longer A-block first, then settings."""
        a, b = self.a_block, self.b_block
        return (
            len(self.letters),
            -min(len(a), len(b)),
            -len(a),
            tuple(letter.setting for letter in a),
            tuple(letter.setting for letter in b),
        )

    def __mul__(self, other: "Word") -> "Word":
        return reduce(self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return "".join(str(letter) for letter in self.letters) or "1"


IDENTITY = Word()


def _cancel(block: Iterable[Letter]) -> List[Letter]:
    stack: List[Letter] = []
    for letter in block:
        if stack and stack[-1] == letter:
            stack.pop()
        else:
            stack.append(letter)
    return stack


def reduce(letters: Iterable[Letter]) -> Word:
    """Canonical form: move A letters before B letters, then cancel squares."""
    letters = tuple(letters)
    a_part = _cancel(letter for letter in letters if letter.party == "A")
    b_part = _cancel(letter for letter in letters if letter.party == "B")
    return Word(tuple(a_part + b_part))


def adjoint(w: Word) -> Word:
    """Letters are Hermitian, so the adjoint is the reversed word."""
    return reduce(reversed(w.letters))


def word_class(w: Word) -> Word:
    """Representative of {w, adjoint(w)}: real moments do not tell them apart."""
    partner = adjoint(w)
    return min(w, partner, key=Word.sort_key)


def _alternating_blocks(party: str, length: int) -> List[Tuple[Letter, ...]]:
    if length == 0:
        return [()]
    blocks = []
    for start in SETTINGS:
        blocks.append(tuple(Letter(party, (start + i) % 2) for i in range(length)))
    return blocks


def canonical_words(max_length: int) -> List[Word]:
    """Every canonical word of length <= max_length, in basis order."""
    words = []
    for total in range(max_length + 1):
        for len_a in range(total + 1):
            for a_block, b_block in product(_alternating_blocks("A", len_a),
                                            _alternating_blocks("B", total - len_a)):
                words.append(Word(a_block + b_block))
    return sorted(words, key=Word.sort_key)


def basis_words(level: Level) -> List[Word]:
    """Monomials indexing the moment matrix at the given level."""
    if not isinstance(level, Level):
        raise UnsupportedLevelError(f"Unsupported level {level!r}")
    if level is Level.ONE:
        return canonical_words(1)
    if level is Level.ONE_AB:
        products = [Word((a, b)) for a, b in product((A0, A1), (B0, B1))]
        return canonical_words(1) + sorted(products, key=Word.sort_key)
    return canonical_words(level.max_word_length)
