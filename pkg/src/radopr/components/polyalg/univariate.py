from fractions import Fraction
from math import lcm
from typing import Dict, List, Mapping, Sequence

import sympy as sp

from src.radopr.components.polyalg.rational import Scalar, as_fraction, format_fraction
from src.radopr.entity.errors import ZeroPolynomialError

W = sp.Symbol("w")


class UnivariatePoly:
    """Polynomial in one variable with exact rational coefficients.

    ``coefficients[k]`` is the coefficient of w^k; trailing zeros are trimmed so
    the leading coefficient is nonzero unless the polynomial is zero.
    """

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Sequence[Scalar]):
        coeffs = [as_fraction(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coefficients = tuple(coeffs)

    @classmethod
    def from_terms(cls, terms: Mapping[int, Scalar]) -> "UnivariatePoly":
        if not terms:
            return cls(())
        if min(terms) < 0:
            raise ValueError("univariate exponents must be non-negative")
        coeffs = [Fraction(0)] * (max(terms) + 1)
        for k, c in terms.items():
            coeffs[k] += as_fraction(c)
        return cls(coeffs)

    @classmethod
    def from_sympy(cls, poly: sp.Poly) -> "UnivariatePoly":
        coeffs = [sp.Rational(c) for c in reversed(poly.all_coeffs())]
        return cls([Fraction(int(c.p), int(c.q)) for c in coeffs])

    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def terms(self) -> Dict[int, Fraction]:
        return {k: c for k, c in enumerate(self.coefficients) if c}

    def evaluate(self, w: Scalar) -> Fraction:
        w = as_fraction(w)
        total = Fraction(0)
        for c in reversed(self.coefficients):
            total = total * w + c
        return total

    __call__ = evaluate

    def integral_multiple(self) -> "UnivariatePoly":
        """Smallest positive rational multiple with integer coefficients."""
        if self.is_zero():
            return self
        scale = lcm(*(c.denominator for c in self.coefficients))
        return UnivariatePoly([c * scale for c in self.coefficients])

    def to_sympy(self, symbol: sp.Symbol = W) -> sp.Poly:
        coeffs = [sp.Rational(c.numerator, c.denominator) for c in reversed(self.coefficients)]
        return sp.Poly(coeffs or [0], symbol, domain=sp.QQ)

    def to_json(self) -> List[str]:
        return [format_fraction(c) for c in self.coefficients]

    def __eq__(self, other) -> bool:
        if not isinstance(other, UnivariatePoly):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def __repr__(self) -> str:
        return f"UnivariatePoly({str(self.to_sympy().as_expr())!r})"


def _sign_variations(sequence: Sequence[sp.Poly], point: sp.Rational) -> int:
    signs = [sp.sign(p.eval(point)) for p in sequence]
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count_roots(Q: UnivariatePoly, lo: Scalar, hi: Scalar) -> int:
    """Number of distinct real roots of Q in the closed interval [lo, hi].

    Works on the square-free part so repeated roots count once. Raises
    ZeroPolynomialError for the zero polynomial, whose root set is everything.
    """
    if Q.is_zero():
        raise ZeroPolynomialError("the zero polynomial has no finite root count")
    lo, hi = as_fraction(lo), as_fraction(hi)
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    if Q.degree == 0:
        return 0
    poly = Q.to_sympy().sqf_part()
    a = sp.Rational(lo.numerator, lo.denominator)
    b = sp.Rational(hi.numerator, hi.denominator)
    if a == b:
        return 1 if poly.eval(a) == 0 else 0
    sequence = sp.sturm(poly)
    # V(a) - V(b) counts roots in (a, b]
    count = _sign_variations(sequence, a) - _sign_variations(sequence, b)
    if poly.eval(a) == 0:
        count += 1
    return count


def has_root_in(Q: UnivariatePoly, lo: Scalar, hi: Scalar) -> bool:
    """Root test where the zero polynomial counts as having a root everywhere."""
    if Q.is_zero():
        return True
    return sturm_count_roots(Q, lo, hi) > 0


def rational_roots(Q: UnivariatePoly) -> List[Fraction]:
    """All distinct rational roots of Q, ascending, by the rational root test."""
    if Q.is_zero():
        raise ZeroPolynomialError("every rational is a root of the zero polynomial")
    P = Q.integral_multiple()
    coeffs = [int(c) for c in P.coefficients]
    roots = set()
    # strip the factor w^k
    shift = next(k for k, c in enumerate(coeffs) if c)
    if shift:
        roots.add(Fraction(0))
        coeffs = coeffs[shift:]
    if len(coeffs) == 1:
        return sorted(roots)
    reduced = UnivariatePoly(coeffs)
    for p in sp.divisors(abs(coeffs[0])):
        for q in sp.divisors(abs(coeffs[-1])):
            for candidate in (Fraction(p, q), Fraction(-p, q)):
                if candidate not in roots and reduced.evaluate(candidate) == 0:
                    roots.add(candidate)
    return sorted(roots)


def real_roots_upper_bound(Q: UnivariatePoly) -> Fraction:
    """Cauchy bound: every real root has absolute value below the result."""
    if Q.is_zero() or Q.degree == 0:
        return Fraction(0)
    lead = abs(Q.coefficients[-1])
    return 1 + max(abs(c) for c in Q.coefficients[:-1]) / lead
