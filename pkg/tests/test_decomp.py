import math

import pytest
from hypothesis import given, strategies as st

from fixmahonian.decomp import (
    DecompositionError, FixedDecomposition, PixedDecomposition, ShuffleClassId,
    der, desar, dez, dez_set, enumerate_derangements, enumerate_desarrangements,
    fixed_decomposition, fixed_recompose, is_derangement, is_desarrangement,
    maf, maf_by_offsets, mafz, mag, maz, pix, pix_set, pixed_decomposition,
    pixed_factorization, pixed_recompose, pos, shuffle_class, shuffle_class_of,
    zder, zder_inverse, zdesar, zdesar_by_inverse, zdesar_inverse, zero_set,
)
from fixmahonian.perm import Permutation, des_set, ides_set, imaj, inverse, maj, permutations

perms = st.integers(0, 9).flatmap(lambda n: st.permutations(range(1, n + 1))).map(Permutation)


def P(text):
    return Permutation.parse(text)


def desarrangement_by_definition(word):
    """Some k >= 1 with y1 > ... > y_2k < y_{2k+1}, where y_{n+1} is +infinity."""
    y = list(word) + [math.inf]
    n = len(word)
    for k in range(1, n // 2 + 1):
        if all(y[i] > y[i + 1] for i in range(2 * k - 1)) and y[2 * k - 1] < y[2 * k]:
            return True
    return False


# --- worked examples ----------------------------------------------------------

def test_fixed_decomposition_example():
    sigma = P("8 2 1 3 5 6 4 9 7")
    assert zder(sigma) == (5, 0, 1, 2, 0, 0, 3, 6, 4)
    assert dez_set(sigma) == (1, 4, 8)
    assert dez(sigma) == 3
    assert maz(sigma) == 13
    assert der(sigma) == (5, 1, 2, 3, 6, 4)
    assert fixed_decomposition(sigma).fix_set == (2, 5, 6)
    assert maf(sigma) == maf_by_offsets(sigma) == 13


def test_pixed_decomposition_example():
    sigma = P("3 5 7 4 2 8 1 9 6")
    assert pixed_factorization(sigma) == ((3, 5, 7), (4, 2, 8, 1, 9, 6))
    assert pix_set(sigma) == (3, 5, 7)
    assert pix(sigma) == 3
    assert desar(sigma) == (3, 2, 5, 1, 6, 4)
    assert imaj(desar(sigma)) == 7
    assert inverse(desar(sigma)) == (4, 2, 1, 6, 3, 5)
    assert zdesar(sigma) == (4, 2, 0, 1, 0, 6, 0, 3, 5)
    assert mag(sigma) == 16


def test_zder_word_example():
    # printed maf is 10 but (1+3+6)-(1+2+3)+maj(4312) = 4+3 = 7
    sigma = P("1 7 3 5 2 6 4")
    w = zder(sigma)
    assert w == (0, 4, 0, 3, 1, 0, 2)
    assert zero_set(w) == (1, 3, 6)
    assert pos(w) == (4, 3, 1, 2)
    assert des_set(w) == dez_set(sigma) == (2, 4, 5)
    assert maf(sigma) == mafz(w) == 7
    assert maz(sigma) == 11


def test_zdesar_word_example():
    sigma = P("1 3 6 5 4 7 2")
    assert inverse(sigma) == (1, 7, 2, 5, 4, 3, 6)
    w = zdesar(sigma)
    assert w == (0, 4, 0, 2, 1, 0, 3)
    assert zero_set(w) == pix_set(sigma) == (1, 3, 6)
    assert desar(sigma) == (3, 2, 4, 1)
    assert pos(w) == inverse(desar(sigma)) == (4, 2, 1, 3)
    assert mag(sigma) == mafz(w) == 7
    assert ides_set(sigma) == des_set(w) == (2, 4, 5)


# --- desarrangements and factorization ------------------------------------------

@pytest.mark.parametrize("word, expected", [
    ((2, 1), True),
    ((3, 2, 1), False),
    ((1, 2), False),
    ((), False),
    ((4, 2, 8, 1, 9, 6), True),
    ((4, 3, 2, 1), True),
    ((2, 1, 3), True),
])
def test_is_desarrangement(word, expected):
    assert is_desarrangement(word) is expected


@given(perms)
def test_desarrangement_matches_definition(p):
    assert is_desarrangement(p) == desarrangement_by_definition(p)


@given(perms)
def test_pixed_factorization_unique_split(p):
    splits = [k for k in range(len(p) + 1)
              if all(p[i] < p[i + 1] for i in range(k - 1))
              and (k == len(p) or desarrangement_by_definition(p[k:]))]
    assert len(splits) == 1
    prefix, suffix = pixed_factorization(p)
    assert len(prefix) == splits[0]
    assert prefix + suffix == tuple(p)


# --- round trips --------------------------------------------------------------------

@given(perms)
def test_fixed_round_trip(p):
    d = fixed_decomposition(p)
    assert is_derangement(d.derangement_part)
    assert fixed_recompose(d) == p
    assert zder_inverse(zder(p)) == p


@given(perms)
def test_pixed_round_trip(p):
    d = pixed_decomposition(p)
    assert d.desarrangement_part == () or is_desarrangement(d.desarrangement_part)
    assert pixed_recompose(d) == p
    assert zdesar_inverse(zdesar(p)) == p
    assert zdesar(p) == zdesar_by_inverse(p)


@given(perms)
def test_encodings_carry_statistics(p):
    assert dez_set(p) == des_set(zder(p))
    assert maz(p) == maj(zder(p))
    assert maf(p) == mafz(zder(p)) == maf_by_offsets(p)
    assert mag(p) == mafz(zdesar(p))
    assert ides_set(p) == des_set(zdesar(p))
    assert zero_set(zdesar(p)) == pix_set(p)


@pytest.mark.parametrize("word", [(0, 1, 0), (1, 0, 2), (0, 2, 1, 2), (0, 3, 1)])
def test_zder_inverse_rejects_non_encodings(word):
    with pytest.raises(DecompositionError):
        zder_inverse(word)


@pytest.mark.parametrize("word", [(1, 2), (0, 3, 2, 1), (0, 2, 2), (4, 0)])
def test_zdesar_inverse_rejects_non_encodings(word):
    with pytest.raises(DecompositionError):
        zdesar_inverse(word)


def test_recompose_validates():
    with pytest.raises(DecompositionError):
        fixed_recompose(FixedDecomposition((1,), Permutation((1, 2))))
    with pytest.raises(DecompositionError):
        fixed_recompose(FixedDecomposition((3, 1), Permutation((2, 1))))
    with pytest.raises(DecompositionError):
        pixed_recompose(PixedDecomposition((1,), Permutation((1, 2))))


# --- shuffle classes and counts ---------------------------------------------------------

def test_shuffle_class_order_and_size():
    cid = ShuffleClassId(5, (2, 1))
    members = list(shuffle_class(cid))
    assert len(members) == cid.size == 10
    assert members == sorted(members)
    assert all(shuffle_class_of(w) == cid for w in members)
    assert str(cid) == "Sh(0^3 2 1)"


def test_shuffle_class_id_validates():
    with pytest.raises(DecompositionError):
        ShuffleClassId(2, (1, 2, 3))
    with pytest.raises(DecompositionError):
        ShuffleClassId(4, (1, 1))


@pytest.mark.parametrize("n, count", list(enumerate([1, 0, 1, 2, 9, 44, 265, 1854])))
def test_derangement_desarrangement_counts(n, count):
    ders = list(enumerate_derangements(n))
    desars = list(enumerate_desarrangements(n))
    assert len(ders) == len(desars) == count
    assert ders == sorted(ders)
    brute = sum(1 for p in permutations(n) if all(p[i] != i + 1 for i in range(n)))
    assert brute == count
