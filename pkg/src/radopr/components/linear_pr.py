"""Partition regularity of linear systems.

Columns condition search, Rado's theorem and its inhomogeneous form, infinite
partition regularity, and systems mixing equalities with strict or unbounded
inequalities.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.radopr import logger
from src.radopr.components.polyalg import (
    EchelonBasis,
    RationalMatrix,
    Vector,
    as_fraction,
    as_vector,
    format_fraction,
    solve_constant,
)
from src.radopr.entity.config_entity import MixedSearchConfig
from src.radopr.entity.errors import CertificateError, DimensionMismatchError
from src.radopr.entity.verdict_entity import ColumnsCertificate, Verdict


def _subset_sum(columns: Sequence[Vector], subset: Sequence[int], length: int) -> List[Fraction]:
    total = [Fraction(0)] * length
    for j in subset:
        total = [a + b for a, b in zip(total, columns[j])]
    return total


def _greedy_blocks(
    columns: Sequence[Vector],
    length: int,
) -> Tuple[List[Tuple[int, ...]], List[int]]:
    """Grow an ordered partition block by block.

    Any zero-sum subset can open the partition and any admissible block can
    extend a prefix without losing completability, so the first block found in
    (size, lexicographic) order is taken. Returns the blocks and the columns
    left over when no block fits.
    """
    remaining = list(range(len(columns)))
    blocks: List[Tuple[int, ...]] = []
    span = EchelonBasis(length)
    while remaining:
        chosen = None
        for size in range(1, len(remaining) + 1):
            for subset in combinations(remaining, size):
                total = _subset_sum(columns, subset, length)
                if (not blocks and not any(total)) or (blocks and span.contains(total)):
                    chosen = subset
                    break
            if chosen:
                break
        if chosen is None:
            break
        blocks.append(chosen)
        for j in chosen:
            span.add(columns[j])
        remaining = [j for j in remaining if j not in chosen]
    return blocks, remaining


def columns_condition(A: RationalMatrix) -> Optional[ColumnsCertificate]:
    """Ordered partition of A's columns witnessing the columns condition, if any."""
    if A.cols == 0:
        return ColumnsCertificate(())
    blocks, remaining = _greedy_blocks(A.columns(), A.rows)
    if remaining:
        logger.debug(f"columns condition stalls after {blocks}; left {remaining}")
        return None
    return ColumnsCertificate.of(blocks)


def verify_columns_certificate(A: RationalMatrix, certificate: ColumnsCertificate) -> bool:
    """Independent re-check: exact zero sum for I_0 and a span test for every later block."""
    if certificate.columns() != list(range(A.cols)):
        return False
    if A.cols == 0:
        return True
    if any(not block for block in certificate.blocks):
        return False
    columns = A.columns()
    span = EchelonBasis(A.rows)
    for u, block in enumerate(certificate.blocks):
        total = _subset_sum(columns, block, A.rows)
        if u == 0 and any(total):
            return False
        if u > 0 and not span.contains(total):
            return False
        for j in block:
            span.add(columns[j])
    return True


def _as_matrix(A, cols: Optional[int] = None) -> RationalMatrix:
    if isinstance(A, RationalMatrix):
        return A
    return RationalMatrix.from_rows(A, cols)


def decide_linear_pr(A) -> Verdict:
    """Rado's theorem: A x = 0 is partition regular over N iff A has the columns condition."""
    A = _as_matrix(A)
    certificate = columns_condition(A)
    if certificate is not None:
        logger.info(f"linear system is PR, columns blocks {certificate.blocks}")
        return Verdict.proved_pr("columns-condition", {"columns": certificate.to_json()})
    blocks, remaining = _greedy_blocks(A.columns(), A.rows)
    logger.info("linear system is not PR: columns condition fails")
    return Verdict.proved_not_pr(
        "columns-condition",
        {
            "violated": "columns condition",
            "stalled_prefix": [list(b) for b in blocks],
            "unplaceable_columns": remaining,
        },
        reason="no zero-sum opening block" if not blocks else "no admissible next block",
    )


def _constant_payload(s: Optional[Fraction]) -> Optional[str]:
    return None if s is None else format_fraction(s)


def decide_inhomogeneous_pr(A, b: Sequence) -> Verdict:
    """A x = b is PR over N iff it has a constant solution s in N, or the columns
    condition holds and there is a constant solution s in Z."""
    A = _as_matrix(A)
    s = solve_constant(A, b)
    if s is not None and s.denominator == 1 and s >= 1:
        logger.info(f"inhomogeneous system is PR through the natural constant {s}")
        return Verdict.proved_pr(
            "inhomogeneous", {"clause": "natural-constant", "s": format_fraction(s)}
        )
    certificate = columns_condition(A)
    if s is not None and s.denominator == 1 and certificate is not None:
        logger.info(f"inhomogeneous system is PR through the integer constant {s}")
        return Verdict.proved_pr(
            "inhomogeneous",
            {
                "clause": "integer-constant-with-columns",
                "s": format_fraction(s),
                "columns": certificate.to_json(),
            },
        )
    violated = []
    if s is None or s.denominator != 1:
        violated.append("no integer constant solution")
    elif s < 1:
        violated.append("constant solution is not natural")
    if certificate is None:
        violated.append("columns condition")
    logger.info(f"inhomogeneous system is not PR: {violated}")
    return Verdict.proved_not_pr(
        "inhomogeneous",
        {"violated": violated, "s": _constant_payload(s), "columns_condition": certificate is not None},
    )


def decide_infinitely_pr(A, b: Sequence) -> Verdict:
    """Infinitely many monochromatic solutions under every finite coloring."""
    A = _as_matrix(A)
    rhs = as_vector(b)
    if not any(rhs):
        verdict = decide_linear_pr(A)
        return Verdict(verdict.status, "infinite-homogeneous", verdict.certificate,
                       "homogeneous systems are PR iff infinitely PR")
    s = solve_constant(A, rhs)
    certificate = columns_condition(A)
    if certificate is not None and s is not None and s.denominator == 1:
        return Verdict.proved_pr(
            "infinite",
            {"s": format_fraction(s), "columns": certificate.to_json()},
        )
    if certificate is None and s is not None and s.denominator == 1 and s >= 1:
        reason = "partition regular only through the constant solution; columns condition fails"
    elif certificate is None:
        reason = "columns condition fails"
    else:
        reason = "no integer constant solution"
    return Verdict.proved_not_pr(
        "infinite",
        {"s": _constant_payload(s), "columns_condition": certificate is not None},
        reason=reason,
    )


# mixed systems


@dataclass(frozen=True)
class MixedSystem:
    """Equalities A t = d together with strict (b.t > 0) and unbounded (b.t >> 0) rows."""

    A: RationalMatrix
    d: Vector
    strict_rows: Tuple[Vector, ...] = field(default_factory=tuple)
    unbounded_rows: Tuple[Vector, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if len(self.d) != self.A.rows:
            raise DimensionMismatchError(f"d has {len(self.d)} entries for {self.A.rows} equations")
        for row in self.strict_rows + self.unbounded_rows:
            if len(row) != self.A.cols:
                raise DimensionMismatchError(
                    f"inequality row of length {len(row)} for {self.A.cols} variables"
                )

    @classmethod
    def build(cls, A, d=None, strict=(), unbounded=(), nvars: Optional[int] = None) -> "MixedSystem":
        if isinstance(A, RationalMatrix):
            matrix = A
        else:
            rows = [list(r) for r in (A or [])]
            if nvars is None:
                widths = [len(r) for r in rows or list(strict) + list(unbounded)]
                nvars = widths[0] if widths else 0
            matrix = RationalMatrix.from_rows(rows, nvars)
        rhs = as_vector(d) if d is not None else tuple(Fraction(0) for _ in range(matrix.rows))
        return cls(
            matrix,
            rhs,
            tuple(as_vector(r) for r in strict),
            tuple(as_vector(r) for r in unbounded),
        )

    @property
    def nvars(self) -> int:
        return self.A.cols

    @property
    def inequality_rows(self) -> Tuple[Vector, ...]:
        return self.strict_rows + self.unbounded_rows

    def is_homogeneous(self) -> bool:
        return not any(self.d)

    def to_json(self) -> Dict[str, Any]:
        def rows(vectors):
            return [[format_fraction(v) for v in r] for r in vectors]

        return {
            "n": self.nvars,
            "A": rows(self.A.rows_list()),
            "d": [format_fraction(v) for v in self.d],
            "strict": rows(self.strict_rows),
            "unbounded": rows(self.unbounded_rows),
        }

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "MixedSystem":
        def rows(key):
            return [[as_fraction(v) for v in r] for r in payload.get(key) or []]

        return cls.build(
            rows("A"),
            [as_fraction(v) for v in payload["d"]] if payload.get("d") is not None else None,
            rows("strict"),
            rows("unbounded"),
            nvars=payload.get("n"),
        )


def augment_with_inequalities(
    A: RationalMatrix,
    rows: Sequence[Sequence],
    q: Sequence,
) -> RationalMatrix:
    """[[A, 0], [B, -diag(q)]]: each inequality row gets a fresh column carrying -q_j."""
    if len(rows) != len(q):
        raise DimensionMismatchError(f"{len(rows)} inequality rows but {len(q)} q values")
    k, n, d = A.rows, A.cols, len(rows)
    top = [list(A.row(i)) + [0] * d for i in range(k)]
    bottom = []
    for j, row in enumerate(rows):
        if len(row) != n:
            raise DimensionMismatchError(f"inequality row of length {len(row)} for {n} variables")
        tail = [0] * d
        tail[j] = -as_fraction(q[j])
        bottom.append(list(row) + tail)
    return RationalMatrix.from_rows(top + bottom, n + d) if top + bottom else RationalMatrix(0, n + d, [])


def _unit(length: int, index: int) -> Vector:
    return tuple(Fraction(1) if i == index else Fraction(0) for i in range(length))


def _solve_in_basis(generators: Sequence[Vector], target: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Coefficients c with sum c_i g_i = target, assuming the g_i are independent."""
    matrix = RationalMatrix.from_columns(list(generators) + [tuple(target)])
    reduced, rank, pivots = matrix.rref()
    last = matrix.cols - 1
    if last in pivots:
        return None
    coefficients = [Fraction(0)] * (matrix.cols - 1)
    for r, p in enumerate(pivots):
        coefficients[p] = reduced[r, last]
    return coefficients


class _MixedSearch:
    """Columns condition for the augmented matrix with the q_j treated as unknowns.

    The span contributed by an inequality column is that of a unit vector, so the
    search only has to pin q_j inside the block that places column j. A block
    with equality columns T and inequality columns Z is admissible when the sum
    of T lies in the open cone spanned by the units of Z modulo the current span;
    independent Z suffice for that. Blocks made only of inequality columns need a
    positive circuit.
    """

    def __init__(self, A: RationalMatrix, rows: Sequence[Vector]):
        self.n = A.cols
        self.d = len(rows)
        self.length = A.rows + self.d
        self.t_columns: List[Vector] = [
            tuple(A.column(j)) + tuple(row[j] for row in rows) for j in range(self.n)
        ]
        self.units: List[Vector] = [_unit(self.length, A.rows + j) for j in range(self.d)]
        self.rows = rows
        self.A = A

    def opening_blocks(self):
        """Zero-sum openings: each fixes q_j = b_j . 1_T for the rows it touches."""
        for size in range(1, self.n + 1):
            for subset in combinations(range(self.n), size):
                total = _subset_sum(self.t_columns, subset, self.length)
                if any(total[: self.A.rows]):
                    continue
                tail = total[self.A.rows:]
                if any(v < 0 for v in tail):
                    continue
                q = {j: v for j, v in enumerate(tail) if v > 0}
                yield subset, q

    def _cone_block(self, span: EchelonBasis, total, free_z: Sequence[int]):
        if span.contains(total):
            return ()
        for size in range(1, len(free_z) + 1):
            for zs in combinations(free_z, size):
                trial = span.copy()
                if not all(trial.add(self.units[j]) for j in zs):
                    continue
                basis = [self.units[j] for j in zs] + span.basis()
                coefficients = _solve_in_basis(basis, total)
                if coefficients is None:
                    continue
                q = coefficients[: len(zs)]
                if all(c > 0 for c in q):
                    return tuple(zip(zs, q))
        return None

    def _circuit_block(self, span: EchelonBasis, free_z: Sequence[int]):
        for size in range(1, len(free_z) + 1):
            for zs in combinations(free_z, size):
                generators = [self.units[j] for j in zs] + span.basis()
                kernel = RationalMatrix.from_columns(generators).kernel()
                if len(kernel) != 1:
                    continue
                q = kernel[0][: len(zs)]
                if all(c > 0 for c in q) or all(c < 0 for c in q):
                    sign = 1 if q[0] > 0 else -1
                    scale = sign / min(abs(c) for c in q)
                    return tuple((j, c * scale) for j, c in zip(zs, q))
        return None

    def complete(self, opening: Tuple[int, ...], q_open: Dict[int, Fraction]):
        span = EchelonBasis(self.length)
        for j in opening:
            span.add(self.t_columns[j])
        for j in q_open:
            span.add(self.units[j])
        blocks = [list(opening) + [self.n + j for j in sorted(q_open)]]
        q = dict(q_open)
        free_t = [j for j in range(self.n) if j not in opening]
        free_z = [j for j in range(self.d) if j not in q_open]
        while free_t or free_z:
            placed = None
            for size in range(1, len(free_t) + 1):
                for ts in combinations(free_t, size):
                    total = _subset_sum(self.t_columns, ts, self.length)
                    found = self._cone_block(span, total, free_z)
                    if found is not None:
                        placed = (ts, found)
                        break
                if placed:
                    break
            if placed is None and free_z:
                found = self._circuit_block(span, free_z)
                if found is not None:
                    placed = ((), found)
            if placed is None:
                return None, (blocks, free_t, free_z)
            ts, zq = placed
            for j in ts:
                span.add(self.t_columns[j])
            for j, value in zq:
                span.add(self.units[j])
                q[j] = value
            blocks.append(list(ts) + [self.n + j for j, _ in zq])
            free_t = [j for j in free_t if j not in ts]
            free_z = [j for j in free_z if j not in dict(zq)]
        return (blocks, q), None


def _rows_payload(rows) -> List[List[str]]:
    return [[format_fraction(v) for v in r] for r in rows]


def decide_mixed_strict(
    A,
    strict_rows: Sequence[Sequence],
    config: MixedSearchConfig = MixedSearchConfig(),
) -> Verdict:
    """Homogeneous equalities plus strict inequalities b_j . t > 0.

    PR iff positive rationals q_j exist for which the augmented matrix satisfies
    the columns condition. The q_j are eliminated exactly, so the answer is
    Unknown only when the column count exceeds the configured search limit.
    """
    rows = [as_vector(r) for r in strict_rows]
    A = _as_matrix(A, len(rows[0]) if rows else None)
    if A.cols + len(rows) > config.max_columns:
        return Verdict.unknown(
            "mixed-strict",
            f"{A.cols + len(rows)} augmented columns exceed the search limit {config.max_columns}",
        )
    search = _MixedSearch(A, rows)
    stall = None
    for opening, q_open in search.opening_blocks():
        found, failure = search.complete(opening, q_open)
        if found is None:
            stall = stall or failure
            continue
        blocks, q = found
        q_values = [q[j] for j in range(len(rows))]
        augmented = augment_with_inequalities(A, rows, q_values)
        certificate = ColumnsCertificate.of(blocks)
        if not verify_columns_certificate(augmented, certificate):
            raise CertificateError(f"mixed search produced an invalid partition {blocks}")
        logger.info(f"mixed system is PR with q = {[format_fraction(v) for v in q_values]}")
        return Verdict.proved_pr(
            "mixed-strict",
            {
                "columns": certificate.to_json(),
                "q": [format_fraction(v) for v in q_values],
                "augmented": _rows_payload(augmented.rows_list()),
            },
        )
    reason = "no zero-sum opening block with non-negative inequality sums"
    payload: Dict[str, Any] = {"violated": "columns condition of the augmented matrix for every q > 0"}
    if stall is not None:
        blocks, free_t, free_z = stall
        reason = "every admissible opening stalls"
        payload.update(
            {
                "stalled_prefix": blocks,
                "unplaceable_columns": free_t + [A.cols + j for j in free_z],
            }
        )
    logger.info(f"mixed system is not PR: {reason}")
    return Verdict.proved_not_pr("mixed-strict", payload, reason=reason)


def decide_mixed_unbounded(
    A,
    unbounded_rows: Sequence[Sequence],
    config: MixedSearchConfig = MixedSearchConfig(),
) -> Verdict:
    """b . t >> 0 systems are PR exactly when the same system with b . t > 0 is."""
    verdict = decide_mixed_strict(A, unbounded_rows, config)
    return Verdict(
        verdict.status,
        "mixed-unbounded",
        verdict.certificate,
        (verdict.reason + "; " if verdict.reason else "")
        + "decided through the equivalent strict system",
    )


def decide_mixed_inhomogeneous(
    system: MixedSystem,
    config: MixedSearchConfig = MixedSearchConfig(),
) -> Verdict:
    """Either a natural constant with every inequality row sum positive, or an
    integer constant together with a PR homogeneous mixed system."""
    rows = list(system.inequality_rows)
    if system.is_homogeneous():
        return decide_mixed_unbounded(system.A, rows, config)
    s = solve_constant(system.A, system.d)
    integral = s is not None and s.denominator == 1
    row_sums = [sum(r, Fraction(0)) for r in rows]
    if integral and s >= 1 and all(v > 0 for v in row_sums):
        logger.info(f"mixed inhomogeneous system is PR through the natural constant {s}")
        return Verdict.proved_pr(
            "mixed-inhomogeneous",
            {"branch": "natural-constant", "s": format_fraction(s),
             "row_sums": [format_fraction(v) for v in row_sums]},
        )
    homogeneous = decide_mixed_strict(system.A, rows, config)
    if integral and homogeneous.is_pr:
        return Verdict.proved_pr(
            "mixed-inhomogeneous",
            {"branch": "integer-constant-homogeneous", "s": format_fraction(s),
             **homogeneous.certificate},
        )
    if integral and homogeneous.is_unknown:
        return Verdict.unknown("mixed-inhomogeneous", homogeneous.reason,
                               {"s": format_fraction(s)})
    dead = []
    if not (integral and s >= 1):
        dead.append("no natural constant solution")
    elif not all(v > 0 for v in row_sums):
        dead.append("an inequality row sum is not positive")
    if not integral:
        dead.append("no integer constant solution")
    else:
        dead.append("homogeneous mixed system is not PR")
    return Verdict.proved_not_pr(
        "mixed-inhomogeneous",
        {"s": _constant_payload(s), "violated": dead},
        reason="both branches fail",
    )


def verify_mixed_certificate(A, rows: Sequence[Sequence], certificate: Dict[str, Any]) -> bool:
    """Re-check a mixed certificate: q > 0 and the columns condition of the augmented matrix."""
    rows = [as_vector(r) for r in rows]
    A = _as_matrix(A, len(rows[0]) if rows else None)
    q = [as_fraction(v) for v in certificate["q"]]
    if len(q) != len(rows) or any(v <= 0 for v in q):
        return False
    augmented = augment_with_inequalities(A, rows, q)
    return verify_columns_certificate(augmented, ColumnsCertificate.from_json(certificate["columns"]))
