"""
Exact polynomials in ``Y, t, q`` and truncated power series in ``u`` over them.

Used to extract the polynomials ``A_n(Y, t, q)`` from their factorial
generating function and compare them with the statistic sums over S_n.
Everything is integer (or ``Fraction``) arithmetic; nothing is ever rounded.

>>> gf_coefficients_t(2)[2]
ExactPolynomial('Y^2 + t*q')
"""

from __future__ import annotations

import json
from collections import Counter
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .perm import des, fix, maj, permutations

__all__ = [
    "VARIABLES", "ExactPolynomial", "USeries", "PoleError", "TruncationError",
    "q_pochhammer", "q_integer", "gf_coefficients_t", "gf_coefficients_q",
    "combinatorial_gf", "truncated_pochhammer_inf", "eq_rhs_pair_coefficients",
    "certify_gf_q",
]

VARIABLES = ("Y", "t", "q")
_INDEX = {name: k for k, name in enumerate(VARIABLES)}
_ZERO_EXP = (0, 0, 0)


class PoleError(ValueError):
    """An evaluation point makes a denominator vanish."""


class TruncationError(AssertionError):
    """Coefficients that must cancel after truncation did not."""


class ExactPolynomial:
    """Sparse polynomial: ``{(deg_Y, deg_t, deg_q): int}`` without zero entries."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, int, int], int] | None = None):
        clean = {}
        if terms:
            for exps, c in terms.items():
                if c:
                    if len(exps) != 3 or min(exps) < 0:
                        raise ValueError(f"bad exponent vector {exps}")
                    clean[tuple(exps)] = int(c)
        self._terms = clean

    @classmethod
    def _raw(cls, terms: dict) -> ExactPolynomial:
        poly = object.__new__(cls)
        poly._terms = terms
        return poly

    @classmethod
    def constant(cls, c: int) -> ExactPolynomial:
        return cls._raw({_ZERO_EXP: c} if c else {})

    @classmethod
    def monomial(cls, coeff: int = 1, Y: int = 0, t: int = 0, q: int = 0) -> ExactPolynomial:
        return cls._raw({(Y, t, q): coeff} if coeff else {})

    @classmethod
    def var(cls, name: str, power: int = 1) -> ExactPolynomial:
        exps = [0, 0, 0]
        exps[_INDEX[name]] = power
        return cls._raw({tuple(exps): 1})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self, name: str) -> int:
        """Largest exponent of ``name``; -1 for the zero polynomial."""
        k = _INDEX[name]
        return max((e[k] for e in self._terms), default=-1)

    @staticmethod
    def _coerce(other) -> ExactPolynomial:
        if isinstance(other, ExactPolynomial):
            return other
        if isinstance(other, int):
            return ExactPolynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return ExactPolynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return ExactPolynomial._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        get = out.get
        for (a1, b1, c1), x in self._terms.items():
            for (a2, b2, c2), y in other._terms.items():
                e = (a1 + a2, b1 + b2, c1 + c2)
                out[e] = get(e, 0) + x * y
        return ExactPolynomial._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = ExactPolynomial.constant(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, Y: int = 0, t: int = 0, q: int = 0) -> ExactPolynomial:
        """Multiply by the monomial ``Y^Y t^t q^q``."""
        return ExactPolynomial._raw(
            {(a + Y, b + t, c + q): x for (a, b, c), x in self._terms.items()})

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def coefficient(self, name: str, k: int) -> ExactPolynomial:
        """Coefficient of ``name^k``, as a polynomial in the other variables."""
        i = _INDEX[name]
        out = {}
        for e, c in self._terms.items():
            if e[i] == k:
                e = list(e)
                e[i] = 0
                out[tuple(e)] = c
        return ExactPolynomial._raw(out)

    def subs(self, **values: int) -> ExactPolynomial:
        """Substitute integers for some variables, e.g. ``p.subs(t=1)``."""
        out: dict = {}
        for e, c in self._terms.items():
            e = list(e)
            for name, value in values.items():
                i = _INDEX[name]
                c *= value ** e[i]
                e[i] = 0
            key = tuple(e)
            out[key] = out.get(key, 0) + c
        return ExactPolynomial._raw({e: c for e, c in out.items() if c})

    def evaluate(self, Y=1, t=1, q=1):
        """Exact value at a point; works with ``int`` and ``Fraction``."""
        return sum((c * Y ** a * t ** b * q ** d for (a, b, d), c in self._terms.items()),
                   Fraction(0) if any(isinstance(v, Fraction) for v in (Y, t, q)) else 0)

    def sorted_terms(self) -> list[tuple[tuple[int, int, int], int]]:
        """Terms in graded lexicographic order, highest first (Y > t > q)."""
        return sorted(self._terms.items(), key=lambda item: (sum(item[0]), item[0]), reverse=True)

    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for exps, c in self.sorted_terms():
            factors = []
            for name, e in zip(VARIABLES, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            if not pieces:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f"{'+' if c > 0 else '-'} {body}")
        return " ".join(pieces)

    def __repr__(self):
        return f"ExactPolynomial({str(self)!r})"

    def to_json(self) -> str:
        return json.dumps([[list(e), c] for e, c in self.sorted_terms()])

    @classmethod
    def from_json(cls, text: str) -> ExactPolynomial:
        return cls({tuple(e): c for e, c in json.loads(text)})


_ONE = ExactPolynomial.constant(1)
_ZERO = ExactPolynomial()


def q_integer(k: int) -> ExactPolynomial:
    """``1 + q + ... + q^(k-1)``."""
    return ExactPolynomial._raw({(0, 0, i): 1 for i in range(k)})


class USeries:
    """Power series in ``u`` with polynomial coefficients, exact mod ``u^(order+1)``."""

    __slots__ = ("order", "coefficients")

    def __init__(self, coefficients: Sequence[ExactPolynomial | int], order: int):
        coeffs = [ExactPolynomial._coerce(c) for c in list(coefficients)[:order + 1]]
        coeffs += [_ZERO] * (order + 1 - len(coeffs))
        self.order = order
        self.coefficients = coeffs

    @classmethod
    def one(cls, order: int) -> USeries:
        return cls([_ONE], order)

    @classmethod
    def u(cls, order: int, coeff: ExactPolynomial | int = 1) -> USeries:
        """The series ``coeff * u``."""
        return cls([_ZERO, coeff], order)

    def __getitem__(self, k: int) -> ExactPolynomial:
        return self.coefficients[k]

    def _check(self, other: USeries) -> int:
        if not isinstance(other, USeries):
            raise TypeError("USeries arithmetic needs another USeries")
        return min(self.order, other.order)

    def __add__(self, other):
        n = self._check(other)
        return USeries([a + b for a, b in zip(self.coefficients, other.coefficients)], n)

    def __sub__(self, other):
        n = self._check(other)
        return USeries([a - b for a, b in zip(self.coefficients, other.coefficients)], n)

    def __neg__(self):
        return USeries([-a for a in self.coefficients], self.order)

    def __mul__(self, other):
        if isinstance(other, (ExactPolynomial, int)):
            return USeries([a * other for a in self.coefficients], self.order)
        n = self._check(other)
        out = []
        for k in range(n + 1):
            acc = _ZERO
            for i in range(k + 1):
                a, b = self.coefficients[i], other.coefficients[k - i]
                if not a.is_zero() and not b.is_zero():
                    acc = acc + a * b
            out.append(acc)
        return USeries(out, n)

    __rmul__ = __mul__

    def substitute_q_shift(self, k: int) -> USeries:
        """Replace ``u`` by ``u q^k``."""
        return USeries([c.shift(q=i * k) for i, c in enumerate(self.coefficients)], self.order)

    def reciprocal(self) -> USeries:
        """Inverse series; the constant term must be the constant 1 or -1."""
        c0 = self.coefficients[0]
        if c0 == 1:
            unit = 1
        elif c0 == -1:
            unit = -1
        else:
            raise ValueError(f"constant term {c0} is not a unit")
        out = [ExactPolynomial.constant(unit)]
        for k in range(1, self.order + 1):
            acc = _ZERO
            for i in range(1, k + 1):
                a = self.coefficients[i]
                if not a.is_zero():
                    acc = acc + a * out[k - i]
            out.append(acc * (-unit))
        return USeries(out, self.order)

    def __eq__(self, other):
        return (isinstance(other, USeries) and self.order == other.order
                and self.coefficients == other.coefficients)

    def __repr__(self):
        body = ", ".join(f"u^{k}: {c}" for k, c in enumerate(self.coefficients) if not c.is_zero())
        return f"USeries({{{body}}}, order={self.order})"


def q_pochhammer(a, k: int):
    """``(a; q)_k = (1 - a)(1 - a q) ... (1 - a q^(k-1))``.

    ``a`` is an :class:`ExactPolynomial` (result is a polynomial) or a
    :class:`USeries` (result is a series of the same order).
    """
    if k < 0:
        raise ValueError("negative length")
    if isinstance(a, USeries):
        result = USeries.one(a.order)
        one = USeries.one(a.order)
        for i in range(k):
            factor = a * ExactPolynomial.var("q", i) if i else a
            result = result * (one - factor)
        return result
    a = ExactPolynomial._coerce(a)
    result = _ONE
    for i in range(k):
        result = result * (1 - a.shift(q=i))
    return result


def _gf_term(s: int, order: int) -> USeries:
    """``(1 - u[s+1]_q)^-1 (u;q)_{s+1} / (uY;q)_{s+1}`` up to ``u^order``."""
    geometric = (USeries.one(order) - USeries.u(order, q_integer(s + 1))).reciprocal()
    numerator = q_pochhammer(USeries.u(order), s + 1)
    denominator = q_pochhammer(USeries.u(order, ExactPolynomial.var("Y")), s + 1)
    return geometric * numerator * denominator.reciprocal()


def gf_coefficients_t(n_max: int) -> list[ExactPolynomial]:
    """``A_0 .. A_{n_max}`` in ``Y, t, q`` from the factorial generating function.

    The sum over ``s`` is cut at ``T = n_max + 1``.  After multiplying back by
    ``(t;q)_{n+1}`` the coefficients of ``t^n .. t^T`` must cancel; if they do
    not, :class:`TruncationError` is raised.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    cutoff = n_max + 1
    per_s = [_gf_term(s, n_max) for s in range(cutoff + 1)]
    t = ExactPolynomial.var("t")
    results = []
    for n in range(n_max + 1):
        summed = _ZERO
        for s, series in enumerate(per_s):
            summed = summed + series[n].shift(t=s)
        product = q_pochhammer(t, n + 1) * summed
        kept, leftover = {}, []
        for e, c in product.terms.items():
            if e[1] <= max(n - 1, 0):
                kept[e] = c
            elif e[1] <= cutoff:
                leftover.append(e)
        if leftover:
            raise TruncationError(
                f"A_{n}: t-coefficients {sorted({e[1] for e in leftover})} did not cancel")
        results.append(ExactPolynomial(kept))
    return results


def gf_coefficients_q(n_max: int) -> list[ExactPolynomial]:
    """``A_n(Y, q) = A_n(Y, 1, q)`` for ``n = 0 .. n_max``."""
    return [a.subs(t=1) for a in gf_coefficients_t(n_max)]


def combinatorial_gf(n: int, mode: str = "triple") -> ExactPolynomial:
    """Sum of ``Y^fix t^des q^maj`` (``mode="triple"``) or ``Y^fix q^maj``
    (``mode="pair"``) over S_n."""
    if mode not in ("triple", "pair"):
        raise ValueError(f"unknown mode {mode!r}")
    triple = mode == "triple"
    counts = Counter(
        (fix(p), des(p) if triple else 0, maj(p)) for p in permutations(n))
    return ExactPolynomial(counts)


# --- numeric route for the t -> 1 identity ----------------------------------

def _series_mul(a: list, b: list) -> list:
    n = len(a) - 1
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n + 1)]


def _series_reciprocal(a: list) -> list:
    if a[0] == 0:
        raise PoleError("series with zero constant term has no reciprocal")
    out = [Fraction(1) / a[0]]
    for k in range(1, len(a)):
        out.append(-sum(a[i] * out[k - i] for i in range(1, k + 1)) / a[0])
    return out


def _q_factorial(q: Fraction, k: int) -> Fraction:
    value = Fraction(1)
    for i in range(1, k + 1):
        value *= 1 - q ** i
    return value


def truncated_pochhammer_inf(a, q, order: int) -> list[Fraction]:
    """Coefficients of ``u^0 .. u^order`` in ``(a u; q)_infinity`` at a numeric ``q``.

    Uses Euler's expansion ``sum_k (-a)^k q^(k(k-1)/2) u^k / (q;q)_k``.
    """
    q = Fraction(q)
    if q in (1, -1):
        raise PoleError(f"q = {q} is a root of unity")
    out = []
    for k in range(order + 1):
        out.append(Fraction(-a) ** k * q ** (k * (k - 1) // 2) / _q_factorial(q, k))
    return out


def eq_rhs_pair_coefficients(q, Y, order: int) -> list[Fraction]:
    """``[u^n]`` of ``(1 - u/(1-q))^-1 (u;q)_inf / (uY;q)_inf`` times ``(q;q)_n``.

    At every valid point this must equal ``A_n(Y, q)``.
    """
    q, Y = Fraction(q), Fraction(Y)
    if q in (1, -1):
        raise PoleError(f"q = {q} is a pole (root of unity)")
    ratio = 1 / (1 - q)
    geometric = [ratio ** k for k in range(order + 1)]
    numerator = truncated_pochhammer_inf(1, q, order)
    denominator = truncated_pochhammer_inf(Y, q, order)
    series = _series_mul(_series_mul(geometric, numerator), _series_reciprocal(denominator))
    return [c * _q_factorial(q, n) for n, c in enumerate(series)]


def certify_gf_q(n_max: int, polys: Sequence[ExactPolynomial] | None = None,
                 q_points: Iterable | None = None) -> dict:
    """Check ``A_n(Y, q)`` against the closed form on a grid of exact points.

    Expanding the closed form, ``[u^n]`` times ``(q;q)_n`` is a sum of
    q-multinomials times ``[i]_q!`` times powers of q, so both sides are
    polynomials of Y-degree <= n and q-degree <= n(n-1)/2.  The default grid
    uses ``n + n(n+1)/2 + 1`` q points (a safe margin) and ``n + 1`` Y points,
    so agreement on it proves the identity.  Returns ``{"points": k, "mismatches": [...]}``.
    """
    if polys is None:
        polys = gf_coefficients_q(n_max)
    q_bound = n_max + n_max * (n_max + 1) // 2
    if q_points is None:
        q_points = [Fraction(k + 2) for k in range(q_bound + 1)]
    q_points = [Fraction(x) for x in q_points]
    bad_points = [x for x in q_points if x in (1, -1)]
    if bad_points:
        raise PoleError(f"q points {bad_points} are poles")
    if len(set(q_points)) <= q_bound:
        raise ValueError(f"need more than {q_bound} distinct q points")
    mismatches = []
    count = 0
    for q in q_points:
        for Y in range(n_max + 1):
            rhs = eq_rhs_pair_coefficients(q, Y, n_max)
            for n, poly in enumerate(polys[:n_max + 1]):
                count += 1
                if poly.evaluate(Y=Fraction(Y), t=1, q=q) != rhs[n]:
                    mismatches.append((n, q, Y))
    return {"points": count, "mismatches": mismatches}
