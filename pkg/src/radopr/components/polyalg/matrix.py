from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from src.radopr.components.polyalg.rational import Scalar, as_fraction
from src.radopr.entity.errors import DimensionMismatchError

Vector = Tuple[Fraction, ...]


def as_vector(values: Iterable[Scalar]) -> Vector:
    return tuple(as_fraction(v) for v in values)


class RationalMatrix:
    """Dense row-major matrix of exact rationals. Immutable."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[Scalar]):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if len(entries) != rows * cols:
            raise DimensionMismatchError(
                f"{len(entries)} entries for a {rows}x{cols} matrix"
            )
        self.rows = rows
        self.cols = cols
        self.entries: Vector = as_vector(entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]], cols: Optional[int] = None) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        if not rows:
            return cls(0, cols or 0, [])
        width = len(rows[0])
        if cols is not None and cols != width:
            raise DimensionMismatchError(f"rows have length {width}, expected {cols}")
        for r in rows:
            if len(r) != width:
                raise DimensionMismatchError("rows of unequal length")
        return cls(len(rows), width, [v for r in rows for v in r])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Scalar]], rows: int = 0) -> "RationalMatrix":
        if not columns:
            return cls(rows, 0, [])
        height = len(columns[0])
        if any(len(c) != height for c in columns):
            raise DimensionMismatchError("columns of unequal length")
        width = len(columns)
        return cls(height, width, [columns[j][i] for i in range(height) for j in range(width)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    def __getitem__(self, key: Tuple[int, int]) -> Fraction:
        i, j = key
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def rows_list(self) -> List[Vector]:
        return [self.row(i) for i in range(self.rows)]

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows, [v for c in self.columns() for v in c])

    def hstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.rows != other.rows:
            raise DimensionMismatchError(f"cannot hstack {self.rows} rows with {other.rows} rows")
        rows = [self.row(i) + other.row(i) for i in range(self.rows)]
        return RationalMatrix(self.rows, self.cols + other.cols, [v for r in rows for v in r])

    def vstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.rows and other.rows and self.cols != other.cols:
            raise DimensionMismatchError(f"cannot vstack {self.cols} columns with {other.cols} columns")
        if not self.rows:
            return other
        if not other.rows:
            return self
        return RationalMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def apply(self, vector: Sequence[Scalar]) -> Vector:
        if len(vector) != self.cols:
            raise DimensionMismatchError(f"vector of length {len(vector)} for {self.cols} columns")
        v = as_vector(vector)
        return tuple(sum((a * b for a, b in zip(self.row(i), v)), Fraction(0)) for i in range(self.rows))

    def row_sums(self) -> Vector:
        return tuple(sum(self.row(i), Fraction(0)) for i in range(self.rows))

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.entries)

    def to_lists(self) -> List[List[Fraction]]:
        return [list(r) for r in self.rows_list()]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(v) for v in r) + "]" for r in self.rows_list())
        return f"RationalMatrix({self.rows}x{self.cols}: [{body}])"

    def rref(self) -> Tuple["RationalMatrix", int, List[int]]:
        return rref(self)

    def rank(self) -> int:
        return rref(self)[1]

    def kernel(self) -> List[Vector]:
        """Basis of the right null space, one vector per free column (in column order)."""
        reduced, rank, pivots = rref(self)
        free = [j for j in range(self.cols) if j not in pivots]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.cols
            v[f] = Fraction(1)
            for r, p in enumerate(pivots):
                v[p] = -reduced[r, f]
            basis.append(tuple(v))
        return basis


def rref(M: RationalMatrix) -> Tuple[RationalMatrix, int, List[int]]:
    """Reduced row-echelon form with the leftmost usable pivot in each step.

    Returns the reduced matrix, its rank and the pivot columns.
    """
    rows = [list(r) for r in M.rows_list()]
    pivots: List[int] = []
    lead = 0
    for j in range(M.cols):
        if lead >= M.rows:
            break
        pivot_row = next((i for i in range(lead, M.rows) if rows[i][j] != 0), None)
        if pivot_row is None:
            continue
        rows[lead], rows[pivot_row] = rows[pivot_row], rows[lead]
        p = rows[lead][j]
        rows[lead] = [v / p for v in rows[lead]]
        for i in range(M.rows):
            if i != lead and rows[i][j] != 0:
                factor = rows[i][j]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[lead])]
        pivots.append(j)
        lead += 1
    return RationalMatrix(M.rows, M.cols, [v for r in rows for v in r]), len(pivots), pivots


class EchelonBasis:
    """Incrementally maintained echelon basis for repeated span-membership tests."""

    def __init__(self, length: int):
        self.length = length
        self._rows: List[Tuple[int, List[Fraction]]] = []

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, vector: Sequence[Scalar]) -> List[Fraction]:
        if len(vector) != self.length:
            raise DimensionMismatchError(f"vector of length {len(vector)}, expected {self.length}")
        v = [as_fraction(x) for x in vector]
        for pivot, row in self._rows:
            if v[pivot]:
                factor = v[pivot]
                v = [a - factor * b for a, b in zip(v, row)]
        return v

    def contains(self, vector: Sequence[Scalar]) -> bool:
        return not any(self.reduce(vector))

    def add(self, vector: Sequence[Scalar]) -> bool:
        """Add ``vector``; returns False when it was already in the span."""
        v = self.reduce(vector)
        pivot = next((i for i, x in enumerate(v) if x), None)
        if pivot is None:
            return False
        p = v[pivot]
        v = [x / p for x in v]
        reduced = []
        for q, row in self._rows:
            if row[pivot]:
                factor = row[pivot]
                row = [a - factor * b for a, b in zip(row, v)]
            reduced.append((q, row))
        self._rows = reduced + [(pivot, v)]
        return True

    def basis(self) -> List[Vector]:
        return [tuple(row) for _, row in self._rows]

    def copy(self) -> "EchelonBasis":
        clone = EchelonBasis(self.length)
        clone._rows = list(self._rows)
        return clone


def in_span(v: Sequence[Scalar], basis: Sequence[Sequence[Scalar]]) -> bool:
    """True iff ``v`` is a rational linear combination of ``basis``."""
    for b in basis:
        if len(b) != len(v):
            raise DimensionMismatchError(f"vector lengths {len(v)} and {len(b)} differ")
    echelon = EchelonBasis(len(v))
    for b in basis:
        echelon.add(b)
    return echelon.contains(v)


def solve_constant(A: RationalMatrix, b: Sequence[Scalar]) -> Optional[Fraction]:
    """The scalar s with A(s,...,s) = b, or None when the rows disagree.

    Each row reads (row sum)*s = b_i. When every row sum vanishes and b = 0 any
    s works and 1 is returned.
    """
    if len(b) != A.rows:
        raise DimensionMismatchError(f"right-hand side of length {len(b)} for {A.rows} rows")
    rhs = as_vector(b)
    s: Optional[Fraction] = None
    for total, value in zip(A.row_sums(), rhs):
        if total == 0:
            if value != 0:
                return None
            continue
        candidate = value / total
        if s is None:
            s = candidate
        elif s != candidate:
            return None
    return Fraction(1) if s is None else s


def constant_is_free(A: RationalMatrix) -> bool:
    """True when every row sum of A vanishes, so any s is a constant solution."""
    return all(total == 0 for total in A.row_sums())
