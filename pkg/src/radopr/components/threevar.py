"""Three-variable polynomials.

Covers the H-form z^e H(x z^rho, y) of polynomials with a complete functional,
its p-adic partition regularity test, and the necessary condition for
inhomogeneous polynomials whose functionals all have order 0.
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Any, Callable, Dict, List, Optional, Tuple

import sympy as sp

from src.radopr import logger
from src.radopr.components.functionals import (
    Direction,
    FunctionalSearch,
    RadoFunctional,
    explore_functionals,
)
from src.radopr.components.polyalg import (
    MultiIndex,
    Polynomial,
    UnivariatePoly,
    canonical_order,
    degree,
    format_fraction,
    rational_roots,
)
from src.radopr.entity.config_entity import MixedSearchConfig, SearchBounds
from src.radopr.entity.errors import CertificateError, PreconditionError, SupportTooLargeError
from src.radopr.entity.verdict_entity import Verdict

# identity, (x y), (y z), (x z), then the two 3-cycles
PERMUTATIONS: Tuple[Tuple[int, int, int], ...] = (
    (0, 1, 2),
    (1, 0, 2),
    (0, 2, 1),
    (2, 1, 0),
    (1, 2, 0),
    (2, 0, 1),
)


class Domain(str, Enum):
    NATURALS = "N"
    RATIONALS = "Q"


def _inverse(order) -> Tuple[int, ...]:
    inverse = [0] * len(order)
    for i, j in enumerate(order):
        inverse[j] = i
    return tuple(inverse)


def _require_three_variable_inhomogeneous(P: Polynomial) -> None:
    if P.nvars != 3:
        raise PreconditionError(f"expected 3 variables, got {P.nvars}")
    if P.has_constant_term():
        raise PreconditionError("polynomial has a constant term")
    if P.is_homogeneous():
        raise PreconditionError("polynomial is homogeneous")


@dataclass(frozen=True)
class HFormExtraction:
    """P(x, y, z) = z^{r - rho a_0} H(x z^rho, y) after the recorded permutation."""

    permutation: Tuple[int, int, int]
    r: int
    rho: Fraction
    a_0: int
    H: Polynomial
    enumeration: Tuple[MultiIndex, ...]

    @property
    def z_exponent(self) -> int:
        return int(self.r - self.rho * self.a_0)

    @property
    def m(self) -> int:
        return self.rho.numerator

    @property
    def n(self) -> int:
        return self.rho.denominator

    def to_json(self) -> Dict[str, Any]:
        return {
            "permutation": list(self.permutation),
            "r": self.r,
            "rho": format_fraction(self.rho),
            "a_0": self.a_0,
            "z_exponent": self.z_exponent,
            "H": {f"{a},{b}": format_fraction(c) for (a, b), c in sorted(self.H.terms.items())},
            "enumeration": [list(a) for a in self.enumeration],
        }


def _extract(Pp: Polynomial, order) -> Optional[HFormExtraction]:
    supp = canonical_order(Pp.support())
    if len({a[0] + a[1] for a in supp}) != 1:
        return None
    xs = [a[0] for a in supp]
    lowest, highest = min(xs), max(xs)
    if xs.count(lowest) == 1:
        last = supp[xs.index(lowest)]
    elif xs.count(highest) == 1:
        last = supp[xs.index(highest)]
    else:
        return None
    rest = [a for a in supp if a != last]
    slopes = {Fraction(a[2] - last[2], a[0] - last[0]) for a in rest}
    if len(slopes) != 1:
        return None
    rho = slopes.pop()
    if rho == 0:
        return None
    if any((rho * a[0]).denominator != 1 for a in supp):
        return None
    H = Polynomial(2, {(a[0], a[1]): Pp.coefficient(a) for a in supp}, ("s", "t"))
    first = rest[0]
    return HFormExtraction(tuple(order), first[2], rho, first[0], H, tuple(rest + [last]))


def has_complete_functional_structure(P: Polynomial) -> Optional[HFormExtraction]:
    """First permutation under which P reads z^e H(x z^rho, y) with H homogeneous."""
    _require_three_variable_inhomogeneous(P)
    for order in PERMUTATIONS:
        extraction = _extract(P.permute(order), order)
        if extraction is not None:
            logger.debug(f"H-form of {P} under permutation {order}: rho={extraction.rho}")
            return extraction
    return None


def expand_hform(extraction: HFormExtraction, variables=None) -> Polynomial:
    """z^e H(x z^rho, y) mapped back through the permutation."""
    e, rho = extraction.z_exponent, extraction.rho
    terms = {}
    for (a, b), c in extraction.H.terms.items():
        terms[(a, b, int(e + rho * a))] = c
    permuted = Polynomial(3, terms)
    restored = permuted.permute(_inverse(extraction.permutation))
    if variables is not None:
        restored = Polynomial(3, restored.terms, variables)
    return restored


@dataclass(frozen=True)
class PowerTestInput:
    """Data of a^n x^n z^m = b^n y^n: is a/b an m/n-power?"""

    a: int
    b: int
    m: int
    n: int = 1

    def __post_init__(self):
        if self.a == 0 or self.b == 0 or self.m == 0:
            raise PreconditionError("a, b and m must be nonzero")
        if self.n <= 0:
            raise PreconditionError("n must be positive")
        if gcd(self.a, self.b) != 1 or gcd(self.m, self.n) != 1:
            raise PreconditionError(f"{self} does not have coprime pairs")

    @classmethod
    def of(cls, ratio: Fraction, rho: Fraction) -> "PowerTestInput":
        """The equation x z^rho = ratio * y."""
        ratio, rho = Fraction(ratio), Fraction(rho)
        return cls(ratio.denominator, ratio.numerator, rho.numerator, rho.denominator)

    def valuations(self) -> Dict[int, int]:
        """nu_p(a/b) for every prime dividing a or b."""
        nu: Dict[int, int] = {}
        for p, k in sp.factorint(abs(self.a)).items():
            nu[int(p)] = nu.get(int(p), 0) + int(k)
        for p, k in sp.factorint(abs(self.b)).items():
            nu[int(p)] = nu.get(int(p), 0) - int(k)
        return nu

    def to_json(self) -> Dict[str, int]:
        return {"a": self.a, "b": self.b, "m": self.m, "n": self.n}


def _sign_allows(r: PowerTestInput) -> bool:
    negative = (r.a < 0) != (r.b < 0) and r.n % 2 == 1
    return not negative or r.m % 2 != 0


def obstructing_primes(r: PowerTestInput) -> List[int]:
    return sorted(p for p, v in r.valuations().items() if (r.n * v) % abs(r.m) != 0)


def is_power_in_Q(r: PowerTestInput) -> bool:
    """Some rational q has q^m = (a/b)^n."""
    return _sign_allows(r) and not obstructing_primes(r)


def is_power_in_N(r: PowerTestInput) -> Optional[int]:
    """The natural l with a^n l^m = b^n, if any."""
    if (r.a < 0) != (r.b < 0) and r.n % 2 == 1:
        return None
    l = 1
    for p, v in r.valuations().items():
        exponent = Fraction(-r.n * v, r.m)
        if exponent.denominator != 1 or exponent < 0:
            return None
        l *= p ** int(exponent)
    return l


def nu_p(k: int, p: int) -> int:
    return int(sp.multiplicity(p, k))


def nu_p_coloring(primes: List[int], m: int, n: int = 1) -> Callable[[int], Tuple[int, ...]]:
    """k -> (n nu_p(k) mod |m|) for each prime; the product coloring over the primes."""
    modulus = abs(m)

    def color(k: int) -> Tuple[int, ...]:
        return tuple((n * nu_p(k, p)) % modulus for p in primes)

    return color


def _ratio_polynomial(extraction: HFormExtraction) -> UnivariatePoly:
    """H(theta, 1) as a polynomial in X = theta^n; every s-exponent of H is a multiple of n."""
    n = extraction.n
    return UnivariatePoly.from_terms({a // n: c for (a, _), c in extraction.H.terms.items()})


@dataclass
class RatioCandidate:
    X: Fraction
    test: PowerTestInput
    in_Q: bool
    l: Optional[int]
    primes: List[int] = field(default_factory=list)

    def to_json(self) -> Dict[str, Any]:
        return {
            "X": format_fraction(self.X),
            "test": self.test.to_json(),
            "power_in_Q": self.in_Q,
            "l": self.l,
            "obstructing_primes": self.primes,
        }


def ratio_candidates(extraction: HFormExtraction) -> List[RatioCandidate]:
    """Nonzero rational X = theta^n with H(theta, 1) = 0; each factor reads x^n z^m = X y^n."""
    G = _ratio_polynomial(extraction)
    candidates = []
    for X in rational_roots(G):
        if X == 0:
            continue
        test = PowerTestInput(X.denominator, X.numerator, extraction.m, 1)
        candidates.append(
            RatioCandidate(X, test, is_power_in_Q(test), is_power_in_N(test), obstructing_primes(test))
        )
    return candidates


def hform_solutions(
    P: Polynomial,
    extraction: HFormExtraction,
    l: int,
    count: int = 3,
) -> List[Tuple[int, ...]]:
    """x = l^{c1}, z = l^{c2}, y = l^{c3} with (c1, c2, c3) = (j, 1 + nk, j + mk),
    mapped back to the original variables and checked exactly."""
    m, n = extraction.m, extraction.n
    order = extraction.permutation
    found: List[Tuple[int, ...]] = []
    for total in range(4 * count + 8):
        for k in range(total + 1):
            j = total - k
            c1, c2, c3 = j, 1 + n * k, j + m * k
            if min(c1, c2, c3) < 0:
                continue
            permuted = (l ** c1, l ** c3, l ** c2)
            point = [0, 0, 0]
            for i, v in enumerate(permuted):
                point[order[i]] = v
            point = tuple(point)
            if point in found:
                continue
            if P.evaluate(point) != 0:
                raise CertificateError(f"{point} built from l={l} is not a solution of {P}")
            found.append(point)
            if len(found) >= count:
                return found
    return found


def decide_Hform_pr(
    P: Polynomial,
    over: Domain = Domain.NATURALS,
    sample_count: int = 3,
) -> Verdict:
    """Partition regularity of z^e H(x z^rho, y) = 0 from the rational linear factors of H.

    Over Q the equation is PR iff some factor ratio is an m/n-power in Q. Over N
    only positive ratios carry solutions: PR when one of them is a power in N,
    not PR when none of them is a power in Q (the nu_p colorings of the failing
    factors combine into an avoiding coloring), undecided in between.
    """
    over = Domain(over)
    extraction = has_complete_functional_structure(P)
    if extraction is None:
        raise PreconditionError(f"{P} has no complete-functional structure")
    candidates = ratio_candidates(extraction)
    payload: Dict[str, Any] = {
        "extraction": extraction.to_json(),
        "over": over.value,
        "candidates": [c.to_json() for c in candidates],
    }
    route = "threevar-hform"
    if over is Domain.RATIONALS:
        passing = [c for c in candidates if c.in_Q]
        if passing:
            return Verdict.proved_pr(route, {**payload, "X": format_fraction(passing[0].X)})
        return Verdict.proved_not_pr(route, payload, reason="no factor ratio is a power in Q")

    positive = [c for c in candidates if c.X > 0]
    witnessed = [c for c in positive if c.l is not None]
    if witnessed:
        best = witnessed[0]
        solutions = hform_solutions(P, extraction, best.l, sample_count)
        logger.info(f"{P} is PR over N with witness l={best.l}")
        return Verdict.proved_pr(
            route,
            {**payload, "X": format_fraction(best.X), "l": best.l,
             "sample_solutions": [list(s) for s in solutions]},
        )
    if all(not c.in_Q for c in positive):
        primes = sorted({c.primes[0] for c in positive if c.primes})
        logger.info(f"{P} is not PR over N; obstructing primes {primes}")
        return Verdict.proved_not_pr(
            route,
            {**payload, "obstructing_primes": primes,
             "coloring": {"kind": "nu_p", "primes": primes, "modulus": abs(extraction.m),
                          "multiplier": extraction.n}},
            reason="no positive factor ratio is a power in Q",
        )
    return Verdict.unknown(route, "a factor ratio is a power in Q but not in N", payload)


class CaseTag(str, Enum):
    CASE1 = "Case1"
    CASE2A = "Case2a"
    CASE2B = "Case2b"
    CASE3 = "Case3"
    NOT_APPLICABLE = "NotApplicable"


@dataclass(frozen=True)
class BlockPart:
    index: int
    R: Polynomial
    degree: int
    s_degree: int
    chi: int = 0
    q: Optional[Fraction] = None
    rho: Optional[Fraction] = None

    def to_json(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "R": str(self.R),
            "degree": self.degree,
            "s_degree": self.s_degree,
            "chi": self.chi,
            "q": None if self.q is None else format_fraction(self.q),
            "rho": None if self.rho is None else format_fraction(self.rho),
        }


@dataclass(frozen=True)
class ThreeVarDecomposition:
    case_tag: CaseTag
    variables: Tuple[int, ...] = ()
    H: Optional[Polynomial] = None
    parts: Tuple[BlockPart, ...] = ()

    def reassemble(self) -> Polynomial:
        total = None
        for part in self.parts:
            total = part.R if total is None else total + part.R
        return total

    def to_json(self) -> Dict[str, Any]:
        return {
            "case": self.case_tag.value,
            "variables": list(self.variables),
            "H": None if self.H is None else str(self.H),
            "parts": [p.to_json() for p in self.parts],
        }


def inhomogeneous_necessary_decompose(P: Polynomial, f: RadoFunctional) -> ThreeVarDecomposition:
    """Split P along the blocks of a verified functional and classify by I_0.

    The variables whose columns lie in I_0 of the augmented matrix have constant
    total degree in every block, and the degree gap of an unpinned block equals
    chi_i q_i with chi_i = 1 when its inequality column is in I_0.
    """
    if P.nvars == 3 and P.is_homogeneous():
        return ThreeVarDecomposition(CaseTag.NOT_APPLICABLE)
    _require_three_variable_inhomogeneous(P)
    if not f.verified or not f.certificate or not f.certificate.get("mixed_columns"):
        raise PreconditionError("functional is not verified")
    n = P.nvars
    first = f.certificate["mixed_columns"]["blocks"][0]
    S = tuple(sorted(c for c in first if c < n))
    z_in_first = {c - n for c in first if c >= n}
    q = [Fraction(v) for v in f.certificate.get("q", [])]
    tag = {1: CaseTag.CASE1, 3: CaseTag.CASE3}.get(len(S))
    if len(S) == 2:
        tag = CaseTag.CASE2A if f.order == 0 else CaseTag.CASE2B
    if tag is None:
        raise CertificateError(f"first block {first} matches no case")

    def s_degree(alpha) -> int:
        return sum(alpha[i] for i in S)

    components = P.homogeneous_components()
    L_0 = degree(f.base(0))
    H = components.get(L_0)
    parts = []
    for i, block in enumerate(f.blocks):
        values = {s_degree(a) for a in block}
        if len(values) != 1:
            raise CertificateError(f"block {i} has varying degree in the variables {S}")
        R = P.restrict(block)
        part = BlockPart(i, R, R.total_degree(), values.pop())
        if i > f.order:
            j = i - f.order - 1
            chi = 1 if j in z_in_first else 0
            gap = s_degree(f.base(f.order)) - part.s_degree
            if gap != chi * q[j]:
                raise CertificateError(f"block {i}: degree gap {gap} differs from {chi}*{q[j]}")
            rho = None if H is None else Fraction(H.total_degree() - part.degree) / q[j]
            part = BlockPart(i, R, part.degree, part.s_degree, chi, q[j], rho)
        parts.append(part)
    decomposition = ThreeVarDecomposition(tag, S, H, tuple(parts))
    if decomposition.reassemble() != P:
        raise CertificateError("block parts do not reassemble the polynomial")
    return decomposition


def _has_zero_sum_subset(coefficients: List[Fraction]) -> bool:
    sums = {Fraction(0)}
    for c in coefficients:
        if c == 0 or -c in sums:
            return True
        sums |= {s + c for s in sums}
    return False


def check_inhomogeneous_necessary(
    P: Polynomial,
    bounds: SearchBounds = SearchBounds(),
    mixed: MixedSearchConfig = MixedSearchConfig(),
    search: Optional[FunctionalSearch] = None,
) -> Verdict:
    """ProvedNotPR when no order-0 functional leaves a homogeneous part H with a
    zero-sum set of coefficients. Needs every upper functional to have order 0."""
    _require_three_variable_inhomogeneous(P)
    route = "threevar-necessary"
    if search is None:
        try:
            search = explore_functionals(P, bounds, Direction.UPPER, mixed)
        except SupportTooLargeError as e:
            return Verdict.unknown(route, str(e))
    higher = [f for f in search.functionals if f.order >= 1]
    if higher:
        raise PreconditionError(f"{P} admits functionals of order {higher[0].order}")
    if not search.complete:
        return Verdict.unknown(route, "the functional search was not exhaustive")
    if not search.functionals:
        return Verdict.unknown(route, "no verified functional was found")
    checked = []
    for f in search.functionals:
        decomposition = inhomogeneous_necessary_decompose(P, f)
        H = decomposition.H
        passes = H is not None and _has_zero_sum_subset(list(H.terms.values()))
        checked.append({"functional": f.to_json(), "decomposition": decomposition.to_json(),
                        "zero_sum": passes})
        if passes:
            return Verdict.unknown(
                route, "a decomposition has a zero-sum coefficient set in H",
                {"decompositions": checked},
            )
    logger.info(f"{P} is not PR: no decomposition has a zero-sum H")
    return Verdict.proved_not_pr(route, {"decompositions": checked},
                                 reason="no homogeneous part H has a zero-sum coefficient set")


def obstruction_coloring(verdict: Verdict) -> Optional[Callable[[int], Tuple[int, ...]]]:
    """The nu_p coloring recorded in a ProvedNotPR H-form verdict."""
    recipe = verdict.certificate.get("coloring")
    if not recipe:
        return None
    return nu_p_coloring(recipe["primes"], recipe["modulus"], recipe["multiplier"])


def coloring_classes(color: Callable[[int], Tuple[int, ...]], N: int) -> List[List[int]]:
    """Group 1..N by color, classes ordered by first member."""
    classes: Dict[Tuple[int, ...], List[int]] = {}
    for k in range(1, N + 1):
        classes.setdefault(color(k), []).append(k)
    return list(classes.values())

