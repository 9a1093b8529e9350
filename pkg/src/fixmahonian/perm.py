"""
Permutations in one-line notation, words with non-negative letters, and the
primitive statistics built on descents, inversions and fixed points.

Positions are 1-based throughout: ``des_set((3, 1, 2)) == (1,)``.

>>> p = Permutation.parse("1 3 6 5 4 7 2")
>>> inverse(p)
Permutation(1, 7, 2, 5, 4, 3, 6)
>>> ides_set(p), imaj(p)
((2, 4, 5), 11)
"""

from __future__ import annotations

import itertools
import re
from contextlib import contextmanager
from typing import Iterator, Sequence

__all__ = [
    "Permutation", "ZeroWord", "PositionSet", "WordParseError",
    "parse_letters", "permutations", "identity",
    "inverse", "des_set", "des", "maj", "ides_set", "ides_set_by_adjacency",
    "imaj", "inv", "fix_set", "fix", "reduce", "format_set",
    "maj_mutation",
]

# sorted tuple of 1-based positions; hashable and usable as a dict key
PositionSet = tuple

_SEPARATORS = re.compile(r"[\s,]+")

# mutation hook: subtracted from every descent position inside maj();
# only ever nonzero inside maj_mutation()
_maj_position_shift = 0


class WordParseError(ValueError):
    """Raised for malformed permutation or word text.

    ``position`` is the 1-based index of the first offending letter, or
    ``None`` if the problem is not tied to a single letter.
    """

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (letter {position})"
        super().__init__(message)
        self.position = position


def parse_letters(text: str) -> tuple[int, ...]:
    """Split ``text`` on whitespace and/or commas into non-negative integers."""
    tokens = [tok for tok in _SEPARATORS.split(text.strip()) if tok]
    letters = []
    for k, tok in enumerate(tokens, start=1):
        if not tok.isdigit():
            raise WordParseError(f"not a non-negative integer: {tok!r}", k)
        letters.append(int(tok))
    return tuple(letters)


class Permutation(tuple):
    """A permutation of ``1..n`` stored as its one-line word.

    Instances are plain tuples, so indexing is 0-based while every statistic
    in this package reports 1-based positions.
    """

    __slots__ = ()

    def __new__(cls, word: Sequence[int] = ()):
        word = tuple(word)
        n = len(word)
        seen = [False] * (n + 1)
        for k, a in enumerate(word, start=1):
            if not isinstance(a, int) or a < 1 or a > n:
                raise WordParseError(f"letter {a!r} outside 1..{n}", k)
            if seen[a]:
                raise WordParseError(f"letter {a} repeated", k)
            seen[a] = True
        return tuple.__new__(cls, word)

    @classmethod
    def _trusted(cls, word: Sequence[int]) -> Permutation:
        return tuple.__new__(cls, word)

    @classmethod
    def parse(cls, text: str) -> Permutation:
        """Parse ``"3 1 2"``, ``"3,1,2"`` or the compact form ``"312"``.

        The compact form is accepted only for a single token of at least two
        digits, which can never be a valid permutation in the spaced form.
        """
        stripped = text.strip()
        if stripped.isdigit() and len(stripped) > 1:
            return cls(int(c) for c in stripped)
        return cls(parse_letters(text))

    @property
    def order(self) -> int:
        return len(self)

    def __repr__(self):
        return f"Permutation{tuple(self)!r}"

    def __str__(self):
        return " ".join(map(str, self))


class ZeroWord(tuple):
    """A word of non-negative integers whose nonzero letters are distinct."""

    __slots__ = ()

    def __new__(cls, letters: Sequence[int] = ()):
        letters = tuple(letters)
        seen = set()
        for k, a in enumerate(letters, start=1):
            if not isinstance(a, int) or a < 0:
                raise WordParseError(f"letter {a!r} is not a non-negative integer", k)
            if a:
                if a in seen:
                    raise WordParseError(f"nonzero letter {a} repeated", k)
                seen.add(a)
        return tuple.__new__(cls, letters)

    @classmethod
    def _trusted(cls, letters: Sequence[int]) -> ZeroWord:
        return tuple.__new__(cls, letters)

    @classmethod
    def parse(cls, text: str) -> ZeroWord:
        """Same forms as :meth:`Permutation.parse`; ``"0403102"`` is read digit by digit."""
        stripped = text.strip()
        if stripped.isdigit() and len(stripped) > 1:
            return cls(int(c) for c in stripped)
        return cls(parse_letters(text))

    @property
    def length(self) -> int:
        return len(self)

    def __repr__(self):
        return f"ZeroWord({' '.join(map(str, self))!r})"

    def __str__(self):
        return " ".join(map(str, self))


def identity(n: int) -> Permutation:
    return Permutation._trusted(range(1, n + 1))


def permutations(n: int) -> Iterator[Permutation]:
    """All of S_n in lexicographic order (streamed)."""
    trusted = Permutation._trusted
    for word in itertools.permutations(range(1, n + 1)):
        yield trusted(word)


def format_set(positions: Sequence[int]) -> str:
    return "{" + ",".join(map(str, positions)) + "}"


def inverse(p: Sequence[int]) -> Permutation:
    result = [0] * len(p)
    for k, a in enumerate(p, start=1):
        result[a - 1] = k
    return Permutation._trusted(result)


def des_set(w: Sequence[int]) -> PositionSet:
    """Descent positions of any word: ``{i : w_i > w_{i+1}}``."""
    return tuple(i for i in range(1, len(w)) if w[i - 1] > w[i])


def des(w: Sequence[int]) -> int:
    return sum(1 for i in range(1, len(w)) if w[i - 1] > w[i])


def maj(w: Sequence[int]) -> int:
    """Major index: the sum of the descent positions."""
    if _maj_position_shift:
        return sum(i - _maj_position_shift for i in des_set(w))
    return sum(des_set(w))


def ides_set(p: Sequence[int]) -> PositionSet:
    return des_set(inverse(p))


def ides_set_by_adjacency(p: Sequence[int]) -> PositionSet:
    """The values ``i`` such that ``i + 1`` sits to the left of ``i`` in ``p``."""
    where = {a: k for k, a in enumerate(p)}
    return tuple(i for i in range(1, len(p)) if where[i + 1] < where[i])


def imaj(p: Sequence[int]) -> int:
    return sum(ides_set(p))


def inv(p: Sequence[int]) -> int:
    n = len(p)
    return sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])


def fix_set(p: Sequence[int]) -> PositionSet:
    return tuple(k for k, a in enumerate(p, start=1) if a == k)


def fix(p: Sequence[int]) -> int:
    return sum(1 for k, a in enumerate(p, start=1) if a == k)


def reduce(word: Sequence[int]) -> Permutation:
    """Replace each letter by its rank among the word's letters.

    >>> reduce((8, 1, 3, 4, 9, 7))
    Permutation(5, 1, 2, 3, 6, 4)
    """
    rank = {a: r for r, a in enumerate(sorted(word), start=1)}
    if len(rank) != len(word):
        seen = set()
        for k, a in enumerate(word, start=1):
            if a in seen:
                raise WordParseError(f"cannot reduce: letter {a} repeated", k)
            seen.add(a)
    return Permutation._trusted(rank[a] for a in word)


@contextmanager
def maj_mutation(shift: int = 1):
    """Temporarily corrupt :func:`maj` by counting descents from ``1 - shift``.

    Exists so the verifier can prove its suites are sensitive: any suite that
    still passes inside this block is not really checking maj.
    """
    global _maj_position_shift
    previous = _maj_position_shift
    _maj_position_shift = shift
    try:
        yield
    finally:
        _maj_position_shift = previous
