from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fixmahonian.perm import des, fix, maj, permutations
from fixmahonian.qseries import (
    ExactPolynomial, PoleError, USeries, certify_gf_q, combinatorial_gf,
    eq_rhs_pair_coefficients, gf_coefficients_q, gf_coefficients_t, q_integer,
    q_pochhammer, truncated_pochhammer_inf,
)

Y, t, q = (ExactPolynomial.var(v) for v in ("Y", "t", "q"))

small_polys = st.dictionaries(
    st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 3)),
    st.integers(-4, 4), max_size=4).map(ExactPolynomial)


def brute_triple(n):
    """Sum of Y^fix t^des q^maj by direct enumeration."""
    counts = Counter((fix(p), des(p), maj(p)) for p in permutations(n))
    total = ExactPolynomial()
    for (a, b, c), k in counts.items():
        total = total + ExactPolynomial.monomial(k, Y=a, t=b, q=c)
    return total


@pytest.mark.parametrize("poly, text", [
    (ExactPolynomial(), "0"),
    (Y ** 2 + t * q, "Y^2 + t*q"),
    (3 * Y - 2, "3*Y - 2"),
    (-(q ** 3), "-q^3"),
    (1 - t * q + 2 * Y * t, "2*Y*t - t*q + 1"),
])
def test_str(poly, text):
    assert str(poly) == text


@given(small_polys, small_polys, small_polys)
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a + b) - b == a
    assert a * b == b * a


@given(small_polys)
def test_json_round_trip(a):
    assert ExactPolynomial.from_json(a.to_json()) == a


def test_coefficient_and_subs():
    p = Y ** 2 * t + 3 * t * q ** 2 + Y
    assert p.coefficient("t", 1) == Y ** 2 + 3 * q ** 2
    assert p.subs(t=1) == Y ** 2 + 3 * q ** 2 + Y
    assert p.evaluate(Y=2, t=3, q=1) == 12 + 9 + 2
    assert p.degree("Y") == 2


def test_q_pochhammer_small():
    a = ExactPolynomial.var("Y")
    assert q_pochhammer(a, 0) == ExactPolynomial.constant(1)
    assert q_pochhammer(a, 2) == (1 - Y) * (1 - Y * q)
    assert q_integer(3) == 1 + q + q ** 2


@settings(max_examples=30)
@given(st.lists(small_polys, min_size=1, max_size=4), st.integers(1, 4), st.sampled_from([1, -1]))
def test_useries_reciprocal(tail, order, unit):
    coeffs = [ExactPolynomial.constant(unit)] + tail
    series = USeries(coeffs[:order + 1], order)
    assert series * series.reciprocal() == USeries.one(order)


def test_useries_rejects_non_unit():
    with pytest.raises(ValueError):
        USeries([ExactPolynomial.constant(2)], 2).reciprocal()


@pytest.mark.parametrize("n", range(6))
def test_gf_coefficients_match_enumeration(n):
    assert gf_coefficients_t(n)[n] == brute_triple(n) == combinatorial_gf(n, "triple")


def test_small_gf_values():
    polys = gf_coefficients_t(2)
    assert polys[0] == ExactPolynomial.constant(1)
    assert polys[1] == Y
    assert polys[2] == Y ** 2 + t * q


def test_pair_mode_is_t_specialization():
    assert combinatorial_gf(4, "pair") == combinatorial_gf(4, "triple").subs(t=1)
    with pytest.raises(ValueError):
        combinatorial_gf(3, "quad")


def test_certify_passes_on_true_polynomials():
    report = certify_gf_q(4)
    assert report["mismatches"] == []
    assert report["points"] > 0


def test_certify_catches_a_perturbed_polynomial():
    polys = gf_coefficients_q(3)
    polys[3] = polys[3] + q
    assert certify_gf_q(3, polys)["mismatches"]


def test_numeric_route_poles():
    with pytest.raises(PoleError):
        truncated_pochhammer_inf(1, 1, 3)
    with pytest.raises(PoleError):
        certify_gf_q(2, q_points=[1, 2, 3, 4, 5, 6])


def test_rhs_at_a_point_equals_enumeration():
    value = eq_rhs_pair_coefficients(Fraction(1, 3), 2, 4)[4]
    assert value == combinatorial_gf(4, "pair").evaluate(Y=Fraction(2), q=Fraction(1, 3))
