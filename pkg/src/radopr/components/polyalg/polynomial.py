import re
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

from src.radopr.components.polyalg.rational import Scalar, as_fraction, format_fraction
from src.radopr.entity.errors import (
    DimensionMismatchError,
    NegativeExponentError,
    PolynomialSyntaxError,
    UnknownVariableError,
)

MultiIndex = Tuple[int, ...]


def degree(alpha: MultiIndex) -> int:
    return sum(alpha)


def is_homogeneous(indices: Iterable[MultiIndex]) -> bool:
    """True iff every multi-index has the same total degree (vacuous for 0 or 1)."""
    return len({degree(alpha) for alpha in indices}) <= 1


def canonical_order(indices: Iterable[MultiIndex]) -> List[MultiIndex]:
    """Lexicographic leading-term order; the first element serves as a block base."""
    return sorted(indices, reverse=True)


class Polynomial:
    """Sparse polynomial in a fixed number of positional variables.

    Coefficients are exact rationals; anything parsed from text is integral.
    Zero coefficients are never stored. Instances are immutable.
    """

    __slots__ = ("_nvars", "_terms", "_variables", "_hash")

    def __init__(
        self,
        nvars: int,
        terms: Optional[Mapping[MultiIndex, Scalar]] = None,
        variables: Optional[Sequence[str]] = None,
    ):
        if nvars < 1:
            raise ValueError("a polynomial needs at least one variable")
        if variables is not None and len(variables) != nvars:
            raise DimensionMismatchError(
                f"{len(variables)} variable names given for {nvars} variables"
            )
        clean: Dict[MultiIndex, Fraction] = {}
        for alpha, coefficient in (terms or {}).items():
            alpha = tuple(int(e) for e in alpha)
            if len(alpha) != nvars:
                raise DimensionMismatchError(
                    f"multi-index {alpha} does not have length {nvars}"
                )
            if any(e < 0 for e in alpha):
                raise NegativeExponentError(f"negative exponent in {alpha}")
            value = clean.get(alpha, Fraction(0)) + as_fraction(coefficient)
            if value:
                clean[alpha] = value
            else:
                clean.pop(alpha, None)
        self._nvars = nvars
        self._terms = clean
        self._variables = tuple(variables) if variables else default_variables(nvars)
        self._hash = None

    # construction helpers

    @classmethod
    def zero(cls, nvars: int, variables: Optional[Sequence[str]] = None) -> "Polynomial":
        return cls(nvars, {}, variables)

    @classmethod
    def monomial(
        cls,
        alpha: MultiIndex,
        coefficient: Scalar = 1,
        variables: Optional[Sequence[str]] = None,
    ) -> "Polynomial":
        return cls(len(alpha), {tuple(alpha): coefficient}, variables)

    def _like(self, terms: Mapping[MultiIndex, Scalar], nvars: Optional[int] = None) -> "Polynomial":
        nvars = self._nvars if nvars is None else nvars
        names = self._variables if nvars == self._nvars else None
        return Polynomial(nvars, terms, names)

    # read access

    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def variables(self) -> Tuple[str, ...]:
        return self._variables

    @property
    def terms(self) -> Dict[MultiIndex, Fraction]:
        return dict(self._terms)

    def coefficient(self, alpha: MultiIndex) -> Fraction:
        return self._terms.get(tuple(alpha), Fraction(0))

    def support(self) -> Set[MultiIndex]:
        return set(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    def has_constant_term(self) -> bool:
        return (0,) * self._nvars in self._terms

    def is_homogeneous(self) -> bool:
        return is_homogeneous(self._terms)

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(degree(alpha) for alpha in self._terms)

    def homogeneous_components(self) -> Dict[int, "Polynomial"]:
        parts: Dict[int, Dict[MultiIndex, Fraction]] = {}
        for alpha, c in self._terms.items():
            parts.setdefault(degree(alpha), {})[alpha] = c
        return {d: self._like(t) for d, t in sorted(parts.items())}

    def restrict(self, indices: Iterable[MultiIndex]) -> "Polynomial":
        """The sub-polynomial carried by the given multi-indices."""
        return self._like({a: self._terms[a] for a in indices if a in self._terms})

    # arithmetic

    def __add__(self, other: "Polynomial") -> "Polynomial":
        other = self._coerce(other)
        merged = dict(self._terms)
        for alpha, c in other._terms.items():
            merged[alpha] = merged.get(alpha, Fraction(0)) + c
        return self._like(merged)

    def __neg__(self) -> "Polynomial":
        return self._like({a: -c for a, c in self._terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-self._coerce(other))

    def __mul__(self, other: Union["Polynomial", int, Fraction]) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self._like({a: c * other for a, c in self._terms.items()})
        other = self._coerce(other)
        product: Dict[MultiIndex, Fraction] = {}
        for alpha, c in self._terms.items():
            for beta, d in other._terms.items():
                key = tuple(a + b for a, b in zip(alpha, beta))
                product[key] = product.get(key, Fraction(0)) + c * d
        return self._like(product)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise NegativeExponentError("polynomials only take non-negative powers")
        result = self._like({(0,) * self._nvars: 1})
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self._like({(0,) * self._nvars: other})
        if not isinstance(other, Polynomial):
            raise TypeError(f"cannot combine a polynomial with {type(other).__name__}")
        if other._nvars != self._nvars:
            raise DimensionMismatchError(
                f"cannot combine polynomials in {self._nvars} and {other._nvars} variables"
            )
        return other

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._nvars == other._nvars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._nvars, frozenset(self._terms.items())))
        return self._hash

    # evaluation and transforms

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self._nvars:
            raise DimensionMismatchError(
                f"point has {len(point)} coordinates, polynomial has {self._nvars} variables"
            )
        values = [as_fraction(v) for v in point]
        total = Fraction(0)
        for alpha, c in self._terms.items():
            term = c
            for v, e in zip(values, alpha):
                if e:
                    term *= v ** e
            total += term
        return total

    def __call__(self, *point: Scalar) -> Fraction:
        return self.evaluate(point)

    def permute(self, order: Sequence[int]) -> "Polynomial":
        """Reorder variables: new variable i is old variable ``order[i]``."""
        if sorted(order) != list(range(self._nvars)):
            raise ValueError(f"{list(order)} is not a permutation of {self._nvars} variables")
        terms = {tuple(alpha[j] for j in order): c for alpha, c in self._terms.items()}
        names = [self._variables[j] for j in order]
        return Polynomial(self._nvars, terms, names)

    def scale_variables(self, factor: Scalar) -> "Polynomial":
        """P(x_1*f, ..., x_n*f): the coefficient of alpha picks up f^|alpha|."""
        f = as_fraction(factor)
        return self._like({a: c * f ** degree(a) for a, c in self._terms.items()})

    def __repr__(self) -> str:
        return f"Polynomial({render_polynomial(self)!r})"

    def __str__(self) -> str:
        return render_polynomial(self)


def default_variables(nvars: int) -> Tuple[str, ...]:
    if nvars <= 3:
        return ("x", "y", "z")[:nvars]
    return tuple(f"x{i + 1}" for i in range(nvars))


def support(P: Polynomial) -> Set[MultiIndex]:
    return P.support()


# text form

_TOKEN = re.compile(
    r"""
    (?P<space>\s+)
  | (?P<number>\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<power>\*\*|\^)
  | (?P<op>[+\-*/=()])
    """,
    re.VERBOSE,
)

_MINUS_SIGNS = {"−": "-", "–": "-"}


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    for bad, good in _MINUS_SIGNS.items():
        text = text.replace(bad, good)
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise PolynomialSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = match.lastgroup
        if kind != "space":
            tokens.append((kind, match.group(), pos))
        pos = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    # expr   := sign? term (('+'|'-') term)*
    # term   := factor ('*' factor)*
    # factor := INT ('/' INT)? | NAME (('^'|'**') INT)?

    def __init__(self, text: str, variables: Sequence[str]):
        self.tokens = _tokenize(text)
        self.index = 0
        self.variables = list(variables)
        self.positions = {name: i for i, name in enumerate(self.variables)}

    def peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.index]

    def take(self) -> Tuple[str, str, int]:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect_number(self) -> int:
        kind, value, pos = self.take()
        if kind == "op" and value == "-":
            if self.peek()[0] == "number":
                raise NegativeExponentError(f"negative exponent at column {pos}")
        if kind != "number":
            raise PolynomialSyntaxError("expected an integer", pos)
        return int(value)

    def equation(self) -> Dict[MultiIndex, Fraction]:
        lhs = self.expression()
        kind, value, pos = self.peek()
        if kind == "op" and value == "=":
            self.take()
            rhs = self.expression()
            for alpha, c in rhs.items():
                lhs[alpha] = lhs.get(alpha, Fraction(0)) - c
            kind, value, pos = self.peek()
        if kind != "end":
            raise PolynomialSyntaxError(f"unexpected {value!r}", pos)
        return lhs

    def expression(self) -> Dict[MultiIndex, Fraction]:
        terms: Dict[MultiIndex, Fraction] = {}
        sign = 1
        kind, value, _ = self.peek()
        if kind == "op" and value in "+-":
            self.take()
            sign = -1 if value == "-" else 1
        while True:
            alpha, c = self.term()
            terms[alpha] = terms.get(alpha, Fraction(0)) + sign * c
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.take()
                sign = -1 if value == "-" else 1
                continue
            return terms

    def term(self) -> Tuple[MultiIndex, Fraction]:
        exponents = [0] * len(self.variables)
        coefficient_box = [Fraction(1)]
        self.factor(exponents, coefficient_box)
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.take()
                self.factor(exponents, coefficient_box)
                continue
            return tuple(exponents), coefficient_box[0]

    def factor(self, exponents: List[int], coefficient_box: List[Fraction]) -> None:
        kind, value, pos = self.take()
        if kind == "number":
            numerator = int(value)
            nxt_kind, nxt_value, _ = self.peek()
            if nxt_kind == "op" and nxt_value == "/":
                self.take()
                denominator = self.expect_number()
                if denominator == 0:
                    raise PolynomialSyntaxError("zero denominator", pos)
                coefficient_box[0] *= Fraction(numerator, denominator)
            else:
                coefficient_box[0] *= numerator
            return
        if kind == "op" and value == "(":
            # only a parenthesised coefficient such as (1/8)
            inner_kind, inner_value, inner_pos = self.take()
            if inner_kind != "number":
                raise PolynomialSyntaxError("expected a coefficient inside parentheses", inner_pos)
            numerator = int(inner_value)
            denominator = 1
            if self.peek()[:2] == ("op", "/"):
                self.take()
                denominator = self.expect_number()
                if denominator == 0:
                    raise PolynomialSyntaxError("zero denominator", inner_pos)
            close_kind, close_value, close_pos = self.take()
            if (close_kind, close_value) != ("op", ")"):
                raise PolynomialSyntaxError("expected ')'", close_pos)
            coefficient_box[0] *= Fraction(numerator, denominator)
            return
        if kind == "name":
            if value not in self.positions:
                raise UnknownVariableError(
                    f"variable {value!r} at column {pos} is not one of {self.variables}"
                )
            power = 1
            if self.peek()[0] == "power":
                self.take()
                power = self.expect_number()
            exponents[self.positions[value]] += power
            return
        if kind == "end":
            raise PolynomialSyntaxError("unexpected end of input", pos)
        raise PolynomialSyntaxError(f"unexpected {value!r}", pos)


def infer_variables(text: str) -> List[str]:
    """Variable names used in ``text``, sorted alphabetically."""
    names = {value for kind, value, _ in _tokenize(text) if kind == "name"}
    return sorted(names)


def parse_polynomial(text: str, variables: Optional[Sequence[str]] = None) -> Polynomial:
    """Parse ``text`` (a polynomial or an equation ``LHS = RHS``) over ``variables``.

    Without an explicit variable order the names found in the text are used in
    alphabetical order.
    """
    if variables is None:
        variables = infer_variables(text)
    if not variables:
        raise PolynomialSyntaxError("no variables in input", 0)
    terms = _Parser(text, variables).equation()
    return Polynomial(len(variables), terms, variables)


def _render_monomial(alpha: MultiIndex, names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, alpha):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def render_polynomial(P: Polynomial) -> str:
    """Canonical text: terms by decreasing degree, then decreasing multi-index."""
    if P.is_zero():
        return "0"
    ordered = sorted(P.support(), key=lambda a: (degree(a), a), reverse=True)
    pieces = []
    for alpha in ordered:
        c = P.coefficient(alpha)
        sign = "-" if c < 0 else "+"
        magnitude = abs(c)
        monomial = _render_monomial(alpha, P.variables)
        if c.denominator != 1:
            scalar = f"({format_fraction(magnitude)})"
        else:
            scalar = str(magnitude.numerator)
        if not monomial:
            body = scalar
        elif magnitude == 1:
            body = monomial
        else:
            body = f"{scalar}*{monomial}"
        pieces.append((sign, body))
    first_sign, first_body = pieces[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def difference(alpha: MultiIndex, beta: MultiIndex) -> Tuple[int, ...]:
    return tuple(a - b for a, b in zip(alpha, beta))
