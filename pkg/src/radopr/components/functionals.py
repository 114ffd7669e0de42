"""Rado sets, Rado partitions and upper/lower Rado functionals of a polynomial.

A functional (J_0, ..., J_l; d) over supp(P) is verified by building the mixed
system A_hat t = b_hat with the unbounded rows of its unpinned blocks and
deciding infinite partition regularity of that system.
"""
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from itertools import permutations
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from src.radopr import logger
from src.radopr.components.linear_pr import (
    augment_with_inequalities,
    columns_condition,
    decide_mixed_strict,
)
from src.radopr.components.polyalg import (
    MultiIndex,
    Polynomial,
    RationalMatrix,
    canonical_order,
    degree,
    difference,
    format_fraction,
    is_homogeneous,
    solve_constant,
)
from src.radopr.entity.config_entity import MixedSearchConfig, SearchBounds
from src.radopr.entity.errors import PreconditionError, SupportTooLargeError
from src.radopr.entity.verdict_entity import Status, Verdict

Block = Tuple[MultiIndex, ...]


class Direction(str, Enum):
    UPPER = "upper"
    LOWER = "lower"


class FunctionalCheck(str, Enum):
    """Necessary conditions every genuine functional satisfies."""

    INTEGER_CONSTANT = "integer-constant"
    HOMOGENEOUS_BLOCKS = "homogeneous-blocks"
    DEGREE_RELATION = "degree-relation"
    ORDER_ZERO_FOR_HOMOGENEOUS = "order-zero-for-homogeneous"


def _canonical_block(block) -> Block:
    return tuple(canonical_order(tuple(a) for a in block))


def _tail_key(block: Block):
    return (degree(block[0]), block[0])


@dataclass(frozen=True)
class RadoFunctional:
    blocks: Tuple[Block, ...]
    order: int = 0
    increments: Tuple[int, ...] = ()
    direction: Direction = Direction.UPPER
    verified: bool = False
    certificate: Optional[Dict[str, Any]] = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(_canonical_block(b) for b in self.blocks))
        object.__setattr__(self, "increments", tuple(int(d) for d in self.increments))
        object.__setattr__(self, "direction", Direction(self.direction))
        if not self.blocks or any(not b for b in self.blocks):
            raise PreconditionError("a functional needs nonempty blocks")
        if not 0 <= self.order <= self.length:
            raise PreconditionError(f"order {self.order} outside [0, {self.length}]")
        if len(self.increments) != self.order:
            raise PreconditionError(
                f"order {self.order} needs {self.order} increments, got {len(self.increments)}"
            )
        if any(d <= 0 for d in self.increments):
            raise PreconditionError("increments must be positive")

    @property
    def length(self) -> int:
        """Index l of the last block."""
        return len(self.blocks) - 1

    @property
    def is_complete(self) -> bool:
        return self.direction is Direction.UPPER and self.order == self.length

    def base(self, i: int) -> MultiIndex:
        return self.blocks[i][0]

    def block_degrees(self) -> List[int]:
        return [degree(b[0]) for b in self.blocks]

    def support(self) -> set:
        return {a for b in self.blocks for a in b}

    def canonical(self) -> "RadoFunctional":
        """Unpinned blocks sorted by (degree of base, base)."""
        head = self.blocks[: self.order + 1]
        tail = tuple(sorted(self.blocks[self.order + 1:], key=_tail_key))
        return replace(self, blocks=head + tail)

    def mirror(self) -> "RadoFunctional":
        other = Direction.LOWER if self.direction is Direction.UPPER else Direction.UPPER
        return replace(self, direction=other, verified=False, certificate=None)

    def key(self):
        return (self.direction.value, self.order, self.blocks, self.increments)

    def to_json(self) -> Dict[str, Any]:
        payload = {
            "direction": self.direction.value,
            "blocks": [[list(a) for a in b] for b in self.blocks],
            "order": self.order,
            "increments": list(self.increments),
            "verified": self.verified,
        }
        if self.certificate is not None:
            payload["certificate"] = self.certificate
        return payload

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "RadoFunctional":
        return cls(
            blocks=tuple(tuple(tuple(a) for a in b) for b in payload["blocks"]),
            order=int(payload.get("order", 0)),
            increments=tuple(payload.get("increments", ())),
            direction=Direction(payload.get("direction", "upper")),
            verified=bool(payload.get("verified", False)),
            certificate=payload.get("certificate"),
        )


@dataclass(frozen=True)
class FunctionalMatrices:
    A_hat: RationalMatrix
    b_hat: Tuple[Fraction, ...]
    inequality_rows: Tuple[Tuple[Fraction, ...], ...]
    difference_rows: int

    def to_json(self) -> Dict[str, Any]:
        return {
            "A_hat": [[format_fraction(v) for v in r] for r in self.A_hat.rows_list()],
            "b_hat": [format_fraction(v) for v in self.b_hat],
            "inequality_rows": [[format_fraction(v) for v in r] for r in self.inequality_rows],
        }


def difference_matrix(J: Sequence[MultiIndex], j: int = 1) -> RationalMatrix:
    """Rows alpha_i - alpha_j for i != j, with j a 1-based position in J."""
    J = [tuple(a) for a in J]
    if not J:
        raise PreconditionError("difference matrix of an empty set")
    if not 1 <= j <= len(J):
        raise PreconditionError(f"base index {j} outside 1..{len(J)}")
    nvars = len(J[0])
    if len(J) == 1:
        logger.debug(f"singleton {J[0]} has an empty difference matrix")
        return RationalMatrix(0, nvars, [])
    base = J[j - 1]
    rows = [difference(a, base) for i, a in enumerate(J) if i != j - 1]
    return RationalMatrix.from_rows(rows, nvars)


def _check_subset(J, supp) -> List[MultiIndex]:
    J = [tuple(a) for a in J]
    supp = {tuple(a) for a in supp}
    missing = [a for a in J if a not in supp]
    if missing:
        raise PreconditionError(f"{missing} not in the support")
    return canonical_order(set(J))


def rado_set_necessary(J, supp) -> bool:
    """The difference matrix of a Rado set satisfies the columns condition."""
    J = _check_subset(J, supp)
    if len(J) <= 1:
        return True
    return columns_condition(difference_matrix(J, 1)) is not None


def is_maximal_rado_set(J, supp) -> bool:
    """No element of the support can be added while keeping the columns condition."""
    J = _check_subset(J, supp)
    if not rado_set_necessary(J, supp):
        raise PreconditionError(f"{J} fails the Rado set necessary condition")
    for alpha in sorted({tuple(a) for a in supp} - set(J), reverse=True):
        extended = canonical_order(set(J) | {alpha})
        if columns_condition(difference_matrix(extended, 1)) is not None:
            return False
    return True


@dataclass(frozen=True)
class RadoSetReport:
    members: Block
    maximal: bool

    def to_json(self) -> Dict[str, Any]:
        return {"members": [list(a) for a in self.members], "maximal": self.maximal}


def enumerate_rado_sets(P: Polynomial, bounds: SearchBounds = SearchBounds()) -> List[RadoSetReport]:
    """Subsets of supp(P) passing the necessary condition; maximal ones are Rado sets."""
    supp = canonical_order(P.support())
    if len(supp) > bounds.max_support:
        raise SupportTooLargeError(f"support of size {len(supp)} exceeds {bounds.max_support}")
    reports = []
    for mask in range(1, 1 << len(supp)):
        J = [a for i, a in enumerate(supp) if mask >> i & 1]
        if rado_set_necessary(J, supp):
            reports.append(RadoSetReport(tuple(J), is_maximal_rado_set(J, supp)))
    reports.sort(key=lambda r: (len(r.members), r.members))
    return reports


def _check_partition(f: RadoFunctional, P: Polynomial) -> None:
    listed = [a for b in f.blocks for a in b]
    if len(listed) != len(set(listed)) or set(listed) != P.support():
        raise PreconditionError("blocks do not partition the support of the polynomial")
    if any(len(a) != P.nvars for a in listed):
        raise PreconditionError("multi-index length differs from the number of variables")


def build_functional_system(f: RadoFunctional, P: Polynomial) -> FunctionalMatrices:
    """Stack M(J_0), ..., M(J_l), then the pinned rows, then collect the unbounded rows."""
    _check_partition(f, P)
    n = P.nvars
    rows: List[Tuple[int, ...]] = []
    for block in f.blocks:
        if len(block) > 1:
            rows.extend(difference_matrix(block, 1).rows_list())
    difference_rows = len(rows)
    m = f.order
    upper = f.direction is Direction.UPPER
    for i in range(m):
        if upper:
            rows.append(difference(f.base(i), f.base(m)))
        else:
            rows.append(difference(f.base(m), f.base(i)))
    b_hat = tuple([Fraction(0)] * difference_rows + [Fraction(d) for d in f.increments])
    inequality = []
    for i in range(m + 1, len(f.blocks)):
        row = difference(f.base(m), f.base(i)) if upper else difference(f.base(i), f.base(m))
        inequality.append(tuple(Fraction(v) for v in row))
    A_hat = RationalMatrix.from_rows(rows, n)
    return FunctionalMatrices(A_hat, b_hat, tuple(inequality), difference_rows)


def _pinned_degree_gaps(f: RadoFunctional) -> List[int]:
    degrees = f.block_degrees()
    m = f.order
    sign = 1 if f.direction is Direction.UPPER else -1
    return [sign * (degrees[i] - degrees[m]) for i in range(m)]


def validate_corollaries(f: RadoFunctional, P: Polynomial) -> List[str]:
    """Violated necessary conditions, each tagged with its FunctionalCheck name."""
    _check_partition(f, P)
    violations = []
    if f.order >= 1 and P.is_homogeneous():
        violations.append(
            f"{FunctionalCheck.ORDER_ZERO_FOR_HOMOGENEOUS.value}: homogeneous polynomial with order {f.order}"
        )
    if f.order >= 1:
        bad = [i for i, b in enumerate(f.blocks) if not is_homogeneous(b)]
        if bad:
            violations.append(f"{FunctionalCheck.HOMOGENEOUS_BLOCKS.value}: blocks {bad} mix degrees")
        else:
            ratios = set()
            for gap, d in zip(_pinned_degree_gaps(f), f.increments):
                ratios.add(None if gap == 0 else Fraction(d, gap))
            if None in ratios or len(ratios) > 1 or any(r.denominator != 1 for r in ratios):
                violations.append(
                    f"{FunctionalCheck.DEGREE_RELATION.value}: increments {list(f.increments)} are not "
                    f"one integer multiple of the degree gaps {_pinned_degree_gaps(f)}"
                )
    system = build_functional_system(f, P)
    s = solve_constant(system.A_hat, system.b_hat)
    if s is None or s.denominator != 1:
        violations.append(f"{FunctionalCheck.INTEGER_CONSTANT.value}: no integer constant solution")
    return violations


def verify_functional(
    f: RadoFunctional,
    P: Polynomial,
    mixed: MixedSearchConfig = MixedSearchConfig(),
) -> Verdict:
    """Decide whether f is a genuine functional: integer constant solution, columns
    condition of A_hat and partition regularity of A_hat with the unbounded rows."""
    violations = validate_corollaries(f, P)
    if violations:
        return Verdict.proved_not_pr("functional", {"violated": violations}, reason=violations[0])
    system = build_functional_system(f, P)
    s = solve_constant(system.A_hat, system.b_hat)
    columns = columns_condition(system.A_hat)
    if columns is None:
        return Verdict.proved_not_pr(
            "functional", {"violated": ["columns condition of A_hat"], **system.to_json()},
            reason="A_hat fails the columns condition",
        )
    homogeneous = decide_mixed_strict(system.A_hat, list(system.inequality_rows), mixed)
    if homogeneous.status is Status.UNKNOWN:
        return Verdict.unknown("functional", homogeneous.reason)
    if homogeneous.status is Status.PROVED_NOT_PR:
        return Verdict.proved_not_pr(
            "functional",
            {"violated": ["unbounded rows"], "mixed": homogeneous.certificate, **system.to_json()},
            reason="the homogeneous system with unbounded rows is not PR",
        )
    certificate = {
        "s": format_fraction(s),
        "columns": columns.to_json(),
        "q": homogeneous.certificate.get("q", []),
        "mixed_columns": homogeneous.certificate.get("columns"),
        **system.to_json(),
    }
    return Verdict.proved_pr("functional", certificate)


def _set_partitions(items: Sequence) -> Iterator[List[List]]:
    """Unordered set partitions, built by inserting the first item into each block
    of the partitions of the rest or into a block of its own."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for smaller in _set_partitions(rest):
        for k in range(len(smaller)):
            yield smaller[:k] + [[first] + smaller[k]] + smaller[k + 1:]
        yield [[first]] + smaller


def _chain_gaps(blocks: Tuple[Block, ...], m: int, direction: Direction) -> Optional[List[int]]:
    """Signed degree gaps of the pinned blocks, or None when no integer s can pin them."""
    if not all(is_homogeneous(b) for b in blocks):
        return None
    degrees = [degree(b[0]) for b in blocks[: m + 1]]
    sign = 1 if direction is Direction.UPPER else -1
    gaps = [sign * (degrees[i] - degrees[m]) for i in range(m)]
    if any(g == 0 for g in gaps):
        return None
    # d_0 > d_1 > ... > d_{m-1} > 0 forces a strictly monotone degree chain
    descending = all(a > b for a, b in zip(gaps, gaps[1:]))
    ascending = all(a < b for a, b in zip(gaps, gaps[1:]))
    same_sign = all(g > 0 for g in gaps) or all(g < 0 for g in gaps)
    if not same_sign or not (descending if gaps[0] > 0 else ascending):
        return None
    return gaps


def _candidate_increments(gaps: List[int], bounds: SearchBounds) -> Iterator[Tuple[int, ...]]:
    for s in list(range(1, bounds.s_max + 1)) + list(range(-1, -bounds.s_max - 1, -1)):
        increments = [s * g for g in gaps]
        if all(0 < d <= bounds.d_max for d in increments):
            yield tuple(increments)


@dataclass
class FunctionalSearch:
    functionals: List[RadoFunctional]
    candidates: int = 0
    unknown: int = 0
    truncated: int = 0

    @property
    def complete(self) -> bool:
        """True when no candidate was left undecided or cut off by the bounds."""
        return self.unknown == 0 and self.truncated == 0

    def of_order(self, m: int) -> List[RadoFunctional]:
        return [f for f in self.functionals if f.order == m]

    def to_json(self) -> Dict[str, Any]:
        return {
            "functionals": [f.to_json() for f in self.functionals],
            "candidates": self.candidates,
            "unknown": self.unknown,
            "truncated": self.truncated,
        }


def explore_functionals(
    P: Polynomial,
    bounds: SearchBounds = SearchBounds(),
    direction: Direction = Direction.UPPER,
    mixed: MixedSearchConfig = MixedSearchConfig(),
) -> FunctionalSearch:
    """Enumerate and verify every candidate functional within the bounds.

    Partitions with more than ``max_blocks`` blocks and degree chains whose
    smallest increments already exceed ``d_max`` are counted as truncated.
    """
    supp = canonical_order(P.support())
    if len(supp) > bounds.max_support:
        raise SupportTooLargeError(f"support of size {len(supp)} exceeds {bounds.max_support}")
    direction = Direction(direction)
    homogeneous_P = P.is_homogeneous()
    found: Dict[tuple, RadoFunctional] = {}
    candidates = unknown = truncated = 0
    for partition in _set_partitions(supp):
        if len(partition) > bounds.max_blocks:
            truncated += 1
            continue
        blocks = [_canonical_block(b) for b in partition]
        for m in range(len(blocks)):
            for head in permutations(blocks, m + 1):
                tail = sorted((b for b in blocks if b not in head), key=_tail_key)
                ordered = tuple(head) + tuple(tail)
                if m == 0:
                    pinned = [()]
                else:
                    gaps = None if homogeneous_P else _chain_gaps(ordered, m, direction)
                    if gaps is None:
                        continue
                    pinned = list(_candidate_increments(gaps, bounds))
                    if not pinned:
                        truncated += 1
                        continue
                for increments in pinned:
                    candidates += 1
                    f = RadoFunctional(ordered, m, increments, direction)
                    verdict = verify_functional(f, P, mixed)
                    if verdict.is_unknown:
                        unknown += 1
                    elif verdict.is_pr:
                        done = replace(f, verified=True, certificate=verdict.certificate)
                        found.setdefault(done.key(), done)
    functionals = sorted(found.values(), key=lambda f: (f.order, f.blocks, f.increments))
    logger.info(
        f"functional search on {P}: {len(functionals)} verified of {candidates} candidates"
        + (f", {unknown} undecided" if unknown else "")
        + (f", {truncated} cut off by the bounds" if truncated else "")
    )
    return FunctionalSearch(functionals, candidates, unknown, truncated)


def search_functionals(
    P: Polynomial,
    bounds: SearchBounds = SearchBounds(),
    direction: Direction = Direction.UPPER,
    mixed: MixedSearchConfig = MixedSearchConfig(),
) -> List[RadoFunctional]:
    return explore_functionals(P, bounds, direction, mixed).functionals


def _normalize_sign(row: Sequence[Fraction]) -> List[Fraction]:
    lead = next((v for v in row if v), Fraction(0))
    return [-v for v in row] if lead < 0 else list(row)


def assemble_O(
    f: RadoFunctional,
    P: Polynomial,
    q: Optional[Sequence] = None,
) -> RationalMatrix:
    """[[A_hat, 0], [inequality rows, -diag(q)]].

    Difference rows with zero right-hand side are scaled by -1 where needed so
    their first nonzero entry is positive. Without q the values stored in the
    functional's certificate are used.
    """
    system = build_functional_system(f, P)
    rows = []
    for r, row in enumerate(system.A_hat.rows_list()):
        rows.append(_normalize_sign(row) if system.b_hat[r] == 0 else list(row))
    k = len(system.inequality_rows)
    if k == 0:
        return RationalMatrix.from_rows(rows, P.nvars)
    if q is None:
        if not f.certificate or len(f.certificate.get("q", [])) != k:
            raise PreconditionError("q values are required for an unverified functional")
        q = f.certificate["q"]
    if len(q) != k:
        raise PreconditionError(f"{k} inequality rows but {len(q)} q values")
    return augment_with_inequalities(
        RationalMatrix.from_rows(rows, P.nvars), list(system.inequality_rows), list(q)
    )
