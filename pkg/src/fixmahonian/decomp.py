"""
Fixed and pixed decompositions of permutations and the statistics they induce.

A permutation is recovered from its fixed decomposition ``(FIX, Der)`` and,
separately, from its pixed decomposition ``(PIX, Desar)``.  The zero-padded
encodings ``zder`` and ``zdesar`` put each decomposition into a single word
over ``0, 1, 2, ...`` so that statistics on permutations become statistics on
words (``maf == mafz . zder``, ``mag == mafz . zdesar``).

>>> sigma = Permutation.parse("8 2 1 3 5 6 4 9 7")
>>> zder(sigma)
ZeroWord('5 0 1 2 0 0 3 6 4')
>>> dez_set(sigma), maz(sigma), maf(sigma)
((1, 4, 8), 13, 13)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .perm import (
    Permutation, PositionSet, WordParseError, ZeroWord,
    des_set, fix_set, imaj, inverse, maj, permutations, reduce,
)

__all__ = [
    "DecompositionError", "FixedDecomposition", "PixedDecomposition",
    "ShuffleClassId",
    "is_derangement", "is_desarrangement",
    "fixed_decomposition", "fixed_recompose", "der",
    "zder", "zder_inverse", "dez_set", "dez", "maz", "maf", "maf_by_offsets",
    "pixed_factorization", "pixed_decomposition", "pixed_recompose",
    "pix_set", "pix", "desar", "mag",
    "zdesar", "zdesar_by_inverse", "zdesar_inverse",
    "zero_set", "zero_count", "pos", "mafz",
    "shuffle_class", "shuffle_class_of",
    "enumerate_derangements", "enumerate_desarrangements",
]


class DecompositionError(ValueError):
    """A decomposition or encoding was handed data violating its precondition."""


def _triangle(k: int) -> int:
    return k * (k + 1) // 2


# --- predicates -------------------------------------------------------------

def is_derangement(p: Sequence[int]) -> bool:
    return all(a != k for k, a in enumerate(p, start=1))


def is_desarrangement(word: Sequence[int]) -> bool:
    """True iff the initial strictly decreasing run has even length.

    A virtual ``+infinity`` follows the last letter, so ``21`` qualifies while
    ``321``, ``12`` and the empty word do not.
    """
    n = len(word)
    if len(set(word)) != n:
        raise WordParseError("desarrangement test needs distinct letters")
    if n == 0:
        return False
    run = 1
    while run < n and word[run - 1] > word[run]:
        run += 1
    return run % 2 == 0


# --- fixed decomposition ----------------------------------------------------

@dataclass(frozen=True)
class FixedDecomposition:
    fix_set: PositionSet
    derangement_part: Permutation

    @property
    def order(self) -> int:
        return len(self.fix_set) + len(self.derangement_part)


def der(p: Sequence[int]) -> Permutation:
    return reduce([a for k, a in enumerate(p, start=1) if a != k])


def fixed_decomposition(p: Sequence[int]) -> FixedDecomposition:
    return FixedDecomposition(fix_set(p), der(p))


def _check_position_set(positions: Sequence[int], n: int, what: str) -> None:
    if list(positions) != sorted(set(positions)) or (
            positions and (positions[0] < 1 or positions[-1] > n)):
        raise DecompositionError(
            f"{what} must be a strictly increasing subset of 1..{n}, got {tuple(positions)}")


def fixed_recompose(d: FixedDecomposition) -> Permutation:
    n = d.order
    _check_position_set(d.fix_set, n, "fixed-point set")
    if not is_derangement(d.derangement_part):
        raise DecompositionError(
            f"derangement part {d.derangement_part} has a fixed point")
    fixed = set(d.fix_set)
    moved = [k for k in range(1, n + 1) if k not in fixed]
    word = list(range(1, n + 1))
    for j, r in zip(moved, d.derangement_part):
        word[j - 1] = moved[r - 1]
    return Permutation._trusted(word)


def zder(p: Sequence[int]) -> ZeroWord:
    """Zero out the fixed points and reduce the remaining letters in place."""
    moved = sorted(a for k, a in enumerate(p, start=1) if a != k)
    rank = {a: r for r, a in enumerate(moved, start=1)}
    return ZeroWord._trusted(0 if a == k else rank[a] for k, a in enumerate(p, start=1))


def zero_set(w: Sequence[int]) -> PositionSet:
    return tuple(k for k, a in enumerate(w, start=1) if a == 0)


def zero_count(w: Sequence[int]) -> int:
    return sum(1 for a in w if a == 0)


def pos(w: Sequence[int]) -> tuple[int, ...]:
    """The subword of positive letters."""
    return tuple(a for a in w if a)


def _positive_part_as_permutation(w: Sequence[int]) -> Permutation:
    v = pos(w)
    try:
        return Permutation(v)
    except WordParseError as exc:
        raise DecompositionError(
            f"positive letters {v} of {tuple(w)} do not form a permutation of "
            f"1..{len(v)}") from exc


def zder_inverse(w: Sequence[int]) -> Permutation:
    v = _positive_part_as_permutation(w)
    if not is_derangement(v):
        raise DecompositionError(
            f"positive part {v} of {tuple(w)} has a fixed point; the word "
            "does not encode any permutation")
    return fixed_recompose(FixedDecomposition(zero_set(w), v))


def dez_set(p: Sequence[int]) -> PositionSet:
    return des_set(zder(p))


def dez(p: Sequence[int]) -> int:
    return len(dez_set(p))


def maz(p: Sequence[int]) -> int:
    return maj(zder(p))


def maf(p: Sequence[int]) -> int:
    fixed = fix_set(p)
    return sum(fixed) - _triangle(len(fixed)) + maj(der(p))


def maf_by_offsets(p: Sequence[int]) -> int:
    """maf as the sum of ``i_k - k`` over the k-th fixed point, plus maj Der."""
    return sum(i - k for k, i in enumerate(fix_set(p), start=1)) + maj(der(p))


def mafz(w: Sequence[int]) -> int:
    zeros = zero_set(w)
    return sum(zeros) - _triangle(len(zeros)) + maj(pos(w))


# --- pixed decomposition ----------------------------------------------------

@dataclass(frozen=True)
class PixedDecomposition:
    pix_set: PositionSet
    desarrangement_part: Permutation

    @property
    def order(self) -> int:
        return len(self.pix_set) + len(self.desarrangement_part)


def pixed_factorization(p: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split ``p`` as (increasing prefix, longest desarrangement right factor)."""
    p = tuple(p)
    for start in range(len(p)):
        if is_desarrangement(p[start:]):
            return p[:start], p[start:]
    return p, ()


def pix_set(p: Sequence[int]) -> PositionSet:
    return tuple(pixed_factorization(p)[0])


def pix(p: Sequence[int]) -> int:
    return len(pixed_factorization(p)[0])


def desar(p: Sequence[int]) -> Permutation:
    return reduce(pixed_factorization(p)[1])


def pixed_decomposition(p: Sequence[int]) -> PixedDecomposition:
    prefix, suffix = pixed_factorization(p)
    return PixedDecomposition(tuple(prefix), reduce(suffix))


def pixed_recompose(d: PixedDecomposition) -> Permutation:
    n = d.order
    _check_position_set(d.pix_set, n, "pix set")
    part = d.desarrangement_part
    if part and not is_desarrangement(part):
        raise DecompositionError(f"{part} is not a desarrangement")
    chosen = set(d.pix_set)
    rest = [a for a in range(1, n + 1) if a not in chosen]
    return Permutation._trusted(list(d.pix_set) + [rest[r - 1] for r in part])


def mag(p: Sequence[int]) -> int:
    prefix, suffix = pixed_factorization(p)
    return sum(prefix) - _triangle(len(prefix)) + imaj(reduce(suffix))


def zdesar(p: Sequence[int]) -> ZeroWord:
    """Shuffle ``Desar(p)^-1`` into zeros placed at the positions ``PIX p``."""
    prefix, suffix = pixed_factorization(p)
    letters = iter(inverse(reduce(suffix)))
    chosen = set(prefix)
    return ZeroWord._trusted(
        0 if i in chosen else next(letters) for i in range(1, len(p) + 1))


def zdesar_by_inverse(p: Sequence[int]) -> ZeroWord:
    """Same word as :func:`zdesar`, read off ``p^-1`` shifted down by ``pix p``."""
    prefix = pixed_factorization(p)[0]
    k = len(prefix)
    chosen = set(prefix)
    return ZeroWord._trusted(
        0 if i in chosen else a - k for i, a in enumerate(inverse(p), start=1))


def zdesar_inverse(w: Sequence[int]) -> Permutation:
    v = _positive_part_as_permutation(w)
    part = inverse(v)
    if part and not is_desarrangement(part):
        raise DecompositionError(
            f"inverse {part} of the positive part of {tuple(w)} is not a "
            "desarrangement; the word does not encode any permutation")
    return pixed_recompose(PixedDecomposition(zero_set(w), part))


# --- shuffle classes and enumerators ----------------------------------------

@dataclass(frozen=True, order=True)
class ShuffleClassId:
    """All interleavings of ``total_length - len(positive_word)`` zeros with
    ``positive_word``."""
    total_length: int
    positive_word: tuple[int, ...]

    def __post_init__(self):
        v = tuple(self.positive_word)
        object.__setattr__(self, "positive_word", v)
        if any(a <= 0 for a in v) or len(set(v)) != len(v):
            raise DecompositionError(f"positive word {v} must have distinct positive letters")
        if len(v) > self.total_length:
            raise DecompositionError(
                f"positive word {v} longer than total length {self.total_length}")

    @property
    def size(self) -> int:
        from math import comb
        return comb(self.total_length, len(self.positive_word))

    def __str__(self):
        return f"Sh(0^{self.total_length - len(self.positive_word)} {' '.join(map(str, self.positive_word))})"


def shuffle_class_of(w: Sequence[int]) -> ShuffleClassId:
    return ShuffleClassId(len(w), pos(w))


def shuffle_class(cid: ShuffleClassId) -> Iterator[ZeroWord]:
    """Members of the class, ordered lexicographically by their zero set.

    That order coincides with the lexicographic order of the words.
    """
    n, v = cid.total_length, cid.positive_word
    for zeros in itertools.combinations(range(n), n - len(v)):
        word = [0] * n
        letters = iter(v)
        zero_at = set(zeros)
        for i in range(n):
            if i not in zero_at:
                word[i] = next(letters)
        yield ZeroWord._trusted(word)


def enumerate_derangements(n: int) -> Iterator[Permutation]:
    """D_n in lexicographic order; D_0 holds the empty permutation."""
    return (p for p in permutations(n) if is_derangement(p))


def enumerate_desarrangements(n: int) -> Iterator[Permutation]:
    """K_n in lexicographic order; by convention K_0 holds the empty permutation."""
    if n == 0:
        return iter([Permutation()])
    return (p for p in permutations(n) if is_desarrangement(p))
