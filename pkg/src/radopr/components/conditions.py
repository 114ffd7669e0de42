"""Maximal Rado condition, Q-polynomials and complete-functional certification."""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product
from math import ceil, lcm
from typing import Any, Dict, List, Optional, Tuple

from src.radopr import logger
from src.radopr.components.functionals import (
    Direction,
    FunctionalSearch,
    RadoFunctional,
    build_functional_system,
    explore_functionals,
)
from src.radopr.components.polyalg import (
    Polynomial,
    UnivariatePoly,
    as_fraction,
    degree,
    has_root_in,
    rational_roots,
    real_roots_upper_bound,
    solve_constant,
    sturm_count_roots,
)
from src.radopr.entity.config_entity import (
    CertificationConfig,
    MaximalRadoConfig,
    MixedSearchConfig,
    SearchBounds,
)
from src.radopr.entity.errors import PreconditionError, SupportTooLargeError
from src.radopr.entity.verdict_entity import ConditionReport, ConditionStatus, Verdict


@dataclass(frozen=True)
class QPolynomial:
    base: UnivariatePoly
    context: Dict[str, Any] = field(default_factory=dict, compare=False)

    def to_json(self) -> Dict[str, Any]:
        return {"coefficients": self.base.to_json(), **self.context}


class TargetKind(str, Enum):
    NATURALS = "naturals"
    POWERS = "powers"


@dataclass(frozen=True)
class TargetSet:
    """A subset of the naturals closed under exponentiation: all of N, or {l^k : k >= 1}."""

    kind: TargetKind = TargetKind.NATURALS
    generator: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", TargetKind(self.kind))
        if self.kind is TargetKind.POWERS and (self.generator is None or self.generator < 2):
            raise PreconditionError("powers of l need an integer generator l >= 2")

    @classmethod
    def parse(cls, text: str) -> "TargetSet":
        """``N`` or ``powers:<l>``."""
        text = text.strip()
        if text in ("N", "naturals"):
            return cls()
        if text.startswith("powers:"):
            return cls(TargetKind.POWERS, int(text.split(":", 1)[1]))
        raise PreconditionError(f"unknown target set {text!r}")

    def contains(self, value: Fraction) -> bool:
        if value.denominator != 1 or value < 1:
            return False
        if self.kind is TargetKind.NATURALS:
            return True
        n = int(value)
        while n % self.generator == 0 and n > 1:
            n //= self.generator
        return n == 1 and value > 1

    def default_element(self) -> int:
        return 2 if self.kind is TargetKind.NATURALS else self.generator

    def to_json(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "generator": self.generator}


def _block_sums(f: RadoFunctional, P: Polynomial) -> List[Fraction]:
    return [sum((P.coefficient(a) for a in block), Fraction(0)) for block in f.blocks]


def functional_constant(f: RadoFunctional, P: Polynomial) -> Fraction:
    """The constant solution s of A_hat t = b_hat."""
    if f.certificate and "s" in f.certificate:
        return as_fraction(f.certificate["s"])
    system = build_functional_system(f, P)
    s = solve_constant(system.A_hat, system.b_hat)
    if s is None:
        raise PreconditionError("functional has no constant solution")
    return s


def _require_verified(f: RadoFunctional) -> None:
    if not f.verified:
        raise PreconditionError("functional is not verified")
    if f.direction is not Direction.UPPER:
        raise PreconditionError("Q-polynomials are defined for upper functionals")


def q_polynomial(P: Polynomial, f: RadoFunctional, q: int) -> QPolynomial:
    """sum_{i<=m} q^{d_i} sum_{alpha in J_i} c_alpha w^{|alpha|}, with d_m = 0."""
    _require_verified(f)
    if q < 2:
        raise PreconditionError(f"q must be at least 2, got {q}")
    increments = list(f.increments) + [0]
    terms: Dict[int, Fraction] = {}
    for i in range(f.order + 1):
        weight = Fraction(q) ** increments[i]
        for alpha in f.blocks[i]:
            k = degree(alpha)
            terms[k] = terms.get(k, Fraction(0)) + weight * P.coefficient(alpha)
    return QPolynomial(UnivariatePoly.from_terms(terms), {"order": f.order, "q": q})


def complete_q_polynomial(P: Polynomial, f: RadoFunctional) -> QPolynomial:
    """sum_i cbar_i w^{d_i} over all blocks, with d_l = 0."""
    _require_verified(f)
    if not f.is_complete:
        raise PreconditionError(f"functional of order {f.order} with {f.length + 1} blocks is not complete")
    increments = list(f.increments) + [0]
    terms: Dict[int, Fraction] = {}
    for d, cbar in zip(increments, _block_sums(f, P)):
        terms[d] = terms.get(d, Fraction(0)) + cbar
    return QPolynomial(UnivariatePoly.from_terms(terms), {"order": f.order, "form": "complete"})


def _ceil_bound(Q: UnivariatePoly) -> int:
    return int(ceil(real_roots_upper_bound(Q))) + 1


def _first_q_with_root(Q: UnivariatePoly) -> Optional[int]:
    """Least q >= 2 such that Q has a root in [1, q]; None when no root is >= 1."""
    if Q.is_zero():
        return 2
    hi = max(2, _ceil_bound(Q))
    if not has_root_in(Q, 1, hi):
        return None
    lo = 2
    while lo < hi:
        mid = (lo + hi) // 2
        if has_root_in(Q, 1, mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def _last_q_with_root_above(F: UnivariatePoly) -> Optional[int]:
    """Greatest q >= 2 such that F has a root >= q; None when there is none."""
    top = max(2, _ceil_bound(F))
    if not has_root_in(F, 2, top):
        return None
    lo, hi = 2, top
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if has_root_in(F, mid, top):
            lo = mid
        else:
            hi = mid - 1
    return lo


def _root_in_unit_interval(G: UnivariatePoly) -> bool:
    """A root in (0, 1]."""
    count = sturm_count_roots(G, 0, 1)
    if G.evaluate(0) == 0:
        count -= 1
    return count > 0


@dataclass
class _Coverage:
    """Integers q >= 2 covered so far: everything, [2, low_until], [from_q, inf)."""

    everything: bool = False
    low_until: int = 1
    from_q: Optional[int] = None
    sources: List[Dict[str, Any]] = field(default_factory=list)

    def first_gap(self) -> Optional[int]:
        if self.everything:
            return None
        gap = max(2, self.low_until + 1)
        if self.from_q is not None and self.from_q <= gap:
            return None
        return gap


def _chain_family_polynomial(f: RadoFunctional, P: Polynomial, positive: bool) -> UnivariatePoly:
    """Polynomial in v whose roots decide the whole family sharing the blocks of f.

    For s > 0, Q(w) = w^{L_m} F(q^s w) with F(v) = sum cbar_i v^{L_i - L_m}; the
    windows [q^s, q^{s+1}] over s >= 1 tile [q, inf). For s < 0 they tile (0, 1]
    and the exponents are shifted to be non-negative.
    """
    degrees = f.block_degrees()[: f.order + 1]
    cbar = _block_sums(f, P)[: f.order + 1]
    floor_degree = degrees[f.order] if positive else min(degrees)
    terms: Dict[int, Fraction] = {}
    for L, c in zip(degrees, cbar):
        terms[L - floor_degree] = terms.get(L - floor_degree, Fraction(0)) + c
    return UnivariatePoly.from_terms(terms)


def maximal_rado_check(
    P: Polynomial,
    config: MaximalRadoConfig = MaximalRadoConfig(),
    bounds: SearchBounds = SearchBounds(),
    mixed: MixedSearchConfig = MixedSearchConfig(),
    search: Optional[FunctionalSearch] = None,
) -> ConditionReport:
    """Whether every q >= 2 has an upper functional whose Q-polynomial has a root in [1, q].

    Order-0 functionals cover [q_0, inf) for the least q_0 with a root in [1, q_0].
    Functionals of order m >= 1 come in families indexed by the constant s, and a
    family of one sign either covers an initial segment [2, R] (s > 0) or every q
    (s < 0). Per-sample Sturm checks are reported alongside.
    """
    if search is None:
        try:
            search = explore_functionals(P, bounds, Direction.UPPER, mixed)
        except SupportTooLargeError as e:
            return ConditionReport(ConditionStatus.UNKNOWN, reason=str(e))
    coverage = _Coverage()
    families = set()
    for f in search.functionals:
        if f.order == 0:
            Q = q_polynomial(P, f, 2).base
            q0 = _first_q_with_root(Q)
            if q0 is None:
                continue
            if coverage.from_q is None or q0 < coverage.from_q:
                coverage.from_q = q0
            coverage.sources.append(
                {"functional": f.to_json(), "kind": "order-0", "from_q": q0, "Q": Q.to_json()}
            )
            continue
        positive = functional_constant(f, P) > 0
        key = (f.blocks, f.order, positive)
        if key in families:
            continue
        families.add(key)
        F = _chain_family_polynomial(f, P, positive)
        entry = {"functional": f.to_json(), "kind": "chain", "sign": "+" if positive else "-", "F": F.to_json()}
        if F.is_zero():
            coverage.everything = True
            entry["covers"] = "all"
        elif positive:
            R = _last_q_with_root_above(F)
            if R is None:
                continue
            coverage.low_until = max(coverage.low_until, R)
            entry["covers"] = [2, R]
        else:
            if not _root_in_unit_interval(F):
                continue
            coverage.everything = True
            entry["covers"] = "all"
        coverage.sources.append(entry)

    samples = {}
    for q in config.q_samples:
        passing = [
            i for i, f in enumerate(search.functionals)
            if has_root_in(q_polynomial(P, f, q).base, 1, q)
        ]
        samples[str(q)] = passing
    details = {
        "coverage": coverage.sources,
        "samples": samples,
        "functionals": len(search.functionals),
        "search": {"unknown": search.unknown, "truncated": search.truncated},
    }
    gap = coverage.first_gap()
    if gap is None:
        logger.info(f"maximal Rado condition holds for {P}")
        return ConditionReport(ConditionStatus.HOLDS, details=details)
    if not search.complete:
        return ConditionReport(
            ConditionStatus.UNKNOWN, details=details,
            reason=f"q={gap} uncovered but the functional search was not exhaustive",
        )
    logger.info(f"maximal Rado condition fails for {P} at q={gap}")
    return ConditionReport(
        ConditionStatus.FAILS, witness_q=gap, details=details,
        reason=f"no upper functional has a Q-polynomial root in [1, {gap}]",
    )


@dataclass(frozen=True)
class PRCertificate:
    functional: RadoFunctional
    root: int
    Q: UnivariatePoly
    target: TargetSet
    sample_solutions: Tuple[Tuple[int, ...], ...]

    kind = "complete-functional-root"

    def to_json(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "functional": self.functional.to_json(),
            "root": self.root,
            "Q": self.Q.to_json(),
            "target": self.target.to_json(),
            "sample_solutions": [list(x) for x in self.sample_solutions],
        }


def _integral_kernel(vectors) -> List[Tuple[int, ...]]:
    basis = []
    for v in vectors:
        scale = lcm(*(c.denominator for c in v)) if v else 1
        basis.append(tuple(int(c * scale) for c in v))
    return basis


def generate_solutions(
    P: Polynomial,
    f: RadoFunctional,
    s: int,
    count: int = 3,
    kernel_radius: int = 4,
) -> Tuple[List[Tuple[int, ...]], bool]:
    """Solutions x_i = s^{u_i} with A_hat u = b_hat and every u_i >= 1.

    u runs over the constant solution plus integer kernel combinations with
    coefficients in [-kernel_radius, kernel_radius], ordered by their l1 norm and
    then lexicographically. Returns the solutions and whether fewer than
    ``count`` were found.
    """
    if s < 1:
        raise PreconditionError(f"root {s} is not a natural number")
    system = build_functional_system(f, P)
    c = functional_constant(f, P)
    if c.denominator != 1:
        raise PreconditionError(f"constant solution {c} is not an integer")
    n = P.nvars
    kernel = _integral_kernel(system.A_hat.kernel())
    combos = sorted(
        product(range(-kernel_radius, kernel_radius + 1), repeat=len(kernel)),
        key=lambda k: (sum(abs(x) for x in k), k),
    )
    found: List[Tuple[int, ...]] = []
    seen = set()
    for k in combos:
        u = [int(c) + sum(kj * v[i] for kj, v in zip(k, kernel)) for i in range(n)]
        if any(x < 1 for x in u):
            continue
        x = tuple(s ** e for e in u)
        if x in seen:
            continue
        if P.evaluate(x) != 0:
            raise PreconditionError(f"s={s} does not make {x} a solution; is s a root of the Q-polynomial?")
        seen.add(x)
        found.append(x)
        if len(found) >= count:
            break
    short = len(found) < count
    if short:
        logger.warning(f"only {len(found)} of {count} solutions within kernel radius {kernel_radius}")
    return found, short


def certify_pr_complete(
    P: Polynomial,
    f: RadoFunctional,
    target: TargetSet = TargetSet(),
    config: CertificationConfig = CertificationConfig(),
) -> Verdict:
    """ProvedPR when the complete Q-polynomial has a root in the target set; never ProvedNotPR."""
    Q = complete_q_polynomial(P, f).base
    if Q.is_zero():
        root = target.default_element()
    else:
        roots = [r for r in rational_roots(Q) if target.contains(r)]
        if not roots:
            return Verdict.unknown(
                "complete-functional",
                "the complete Q-polynomial has no root in the target set",
                {"Q": Q.to_json(), "functional": f.to_json()},
            )
        preferred = [r for r in roots if r >= 2]
        root = int((preferred or roots)[0])
    solutions, short = generate_solutions(P, f, root, config.sample_count, config.kernel_radius)
    certificate = PRCertificate(f, root, Q, target, tuple(solutions))
    payload = certificate.to_json()
    if short:
        payload["short_of_samples"] = True
    logger.info(f"{P} is PR over {target.kind.value}: complete functional root s={root}")
    return Verdict.proved_pr("complete-functional", payload)


def scale_polynomial(P: Polynomial, b: int, s: int) -> Polynomial:
    """P(x_1/b^s, ..., x_n/b^s)."""
    if b == 0:
        raise PreconditionError("b must be nonzero")
    return P.scale_variables(Fraction(1) / Fraction(b) ** s)


def scaled_root_identity(P: Polynomial, f: RadoFunctional, a, b: int) -> Tuple[Fraction, Fraction]:
    """Both sides of b^{s L_l} Q_{P~}(a) = Q_P(a/b), with s the constant of f and
    P~ the polynomial scaled by b^s."""
    s = functional_constant(f, P)
    if s.denominator != 1 or s == 0:
        raise PreconditionError(f"constant {s} is not a nonzero integer")
    s = int(s)
    a = as_fraction(a)
    scaled = scale_polynomial(P, b, s)
    L_l = f.block_degrees()[f.length]
    lhs = Fraction(b) ** (s * L_l) * complete_q_polynomial(scaled, f).base.evaluate(a)
    rhs = complete_q_polynomial(P, f).base.evaluate(a / b)
    return lhs, rhs

