"""Finite ground truth: solutions in [1..N], avoiding colorings and forcing thresholds."""
import time
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from src.radopr import logger
from src.radopr.components.linear_pr import MixedSystem
from src.radopr.components.polyalg import Polynomial
from src.radopr.entity.config_entity import OracleConfig
from src.radopr.entity.errors import BudgetExceededError, PreconditionError

Coloring = Callable[[int], int]


@dataclass(frozen=True)
class SolutionRecord:
    assignment: Tuple[int, ...]
    residue: int = 0

    def values(self) -> FrozenSet[int]:
        return frozenset(self.assignment)


@dataclass(frozen=True)
class ColoringWitness:
    """colors[i] is the color (1..k) of the integer i + 1."""

    N: int
    k: int
    colors: Tuple[int, ...]

    def classes(self) -> List[List[int]]:
        return [[i + 1 for i, c in enumerate(self.colors) if c == color] for color in range(1, self.k + 1)]

    def color_of(self, value: int) -> int:
        return self.colors[value - 1]

    def to_json(self):
        return {"N": self.N, "k": self.k, "classes": self.classes()}


def _integral_terms(P: Polynomial) -> List[Tuple[int, Tuple[int, ...]]]:
    scale = lcm(*(c.denominator for c in P.terms.values())) if not P.is_zero() else 1
    return [(int(c * scale), alpha) for alpha, c in sorted(P.terms.items())]


def enumerate_solutions(P: Polynomial, N: int, config: OracleConfig = OracleConfig()) -> List[SolutionRecord]:
    """Every solution with all coordinates in [1..N], in lexicographic order.

    Partial assignments are pruned when the range of the remaining polynomial
    over [1..N] cannot contain zero.
    """
    if N < 1:
        raise PreconditionError("N must be at least 1")
    n = P.nvars
    if n > config.max_vars:
        raise PreconditionError(f"{n} variables exceed the oracle limit {config.max_vars}")
    terms = _integral_terms(P)
    # remaining[i][t] = N^(sum of exponents of term t in variables i..n-1)
    remaining = [[N ** sum(alpha[i:]) for _, alpha in terms] for i in range(n + 1)]
    solutions: List[SolutionRecord] = []
    values = [0] * n

    def walk(i: int, partial: List[int]) -> None:
        if i == n:
            if sum(partial) == 0:
                solutions.append(SolutionRecord(tuple(values)))
            return
        lo = hi = 0
        for fixed, top in zip(partial, remaining[i]):
            if fixed >= 0:
                lo += fixed
                hi += fixed * top
            else:
                lo += fixed * top
                hi += fixed
        if lo > 0 or hi < 0:
            return
        for v in range(1, N + 1):
            values[i] = v
            walk(i + 1, [fixed * v ** alpha[i] for fixed, (_, alpha) in zip(partial, terms)])

    if terms:
        walk(0, [c for c, _ in terms])
    return solutions


def _hyperedges(solutions: Sequence[SolutionRecord]) -> Dict[int, List[FrozenSet[int]]]:
    """Distinct value sets of the solutions, keyed by their largest value."""
    edges: Dict[int, set] = {}
    for s in solutions:
        values = s.values()
        edges.setdefault(max(values), set()).add(values)
    return {v: sorted(e, key=sorted) for v, e in edges.items()}


class _Deadline:
    def __init__(self, config: OracleConfig, budget_ms: Optional[int]):
        self.nodes = 0
        self.limit = config.budget_nodes
        self.until = None if budget_ms is None else time.monotonic() + budget_ms / 1000

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.limit:
            raise BudgetExceededError(f"coloring search exceeded {self.limit} nodes")
        if self.until is not None and self.nodes % 1024 == 0 and time.monotonic() > self.until:
            raise BudgetExceededError("coloring search exceeded its time budget")


def search_avoiding_coloring(
    P: Polynomial,
    k: int,
    N: int,
    config: OracleConfig = OracleConfig(),
    budget_ms: Optional[int] = None,
    solutions: Optional[Sequence[SolutionRecord]] = None,
) -> Optional[ColoringWitness]:
    """A k-coloring of [1..N] with no monochromatic solution, or None if none exists.

    Integers are colored in increasing order, 1 gets the first color, and a new
    color is only opened right after the largest one in use. Raises
    BudgetExceededError instead of answering when the node budget runs out.
    """
    if not 1 <= k <= config.max_colors:
        raise PreconditionError(f"{k} colors outside 1..{config.max_colors}")
    if N > config.max_range:
        raise PreconditionError(f"range {N} exceeds the oracle limit {config.max_range}")
    if solutions is None:
        solutions = enumerate_solutions(P, N, config)
    edges = _hyperedges(solutions)
    colors = [0] * (N + 1)
    deadline = _Deadline(config, budget_ms)

    def clashes(v: int, c: int) -> bool:
        for edge in edges.get(v, ()):
            if all(colors[u] == c for u in edge if u != v):
                return True
        return False

    # used[v] is the largest color among 1..v-1
    used = [0] * (N + 2)
    v = 1
    while 1 <= v <= N:
        deadline.tick()
        c = colors[v] + 1
        limit = min(used[v] + 1, k)
        while c <= limit and clashes(v, c):
            c += 1
        if c <= limit:
            colors[v] = c
            used[v + 1] = max(used[v], c)
            v += 1
            if v <= N:
                colors[v] = 0
        else:
            colors[v] = 0
            v -= 1
    logger.debug(f"coloring search on [1..{N}] with {k} colors: {deadline.nodes} nodes")
    if v == 0:
        return None
    witness = ColoringWitness(N, k, tuple(colors[1:]))
    if count_monochromatic(P, witness.colors, solutions) != 0:
        raise AssertionError("coloring search returned a coloring with a monochromatic solution")
    return witness


def count_monochromatic(
    P: Polynomial,
    colors: Sequence[int],
    solutions: Optional[Sequence[SolutionRecord]] = None,
) -> int:
    """Solutions in [1..len(colors)] whose coordinates all share one color."""
    N = len(colors)
    if solutions is None:
        solutions = enumerate_solutions(P, N)
    return sum(1 for s in solutions if len({colors[v - 1] for v in s.assignment}) == 1)


def verify_coloring(P: Polynomial, witness: ColoringWitness) -> bool:
    return len(witness.colors) == witness.N and count_monochromatic(P, witness.colors) == 0


def coloring_from_function(color: Callable[[int], object], N: int) -> Tuple[int, ...]:
    """Relabel an arbitrary coloring of [1..N] by 1, 2, ... in order of first use."""
    labels: Dict[object, int] = {}
    return tuple(labels.setdefault(color(v), len(labels) + 1) for v in range(1, N + 1))


def min_forcing_N(
    P: Polynomial,
    k: int,
    N_max: int,
    config: OracleConfig = OracleConfig(),
    budget_ms: Optional[int] = None,
) -> Optional[int]:
    """Least N <= N_max such that every k-coloring of [1..N] has a monochromatic solution."""
    solutions = enumerate_solutions(P, N_max, config)
    for N in range(1, N_max + 1):
        in_range = [s for s in solutions if max(s.assignment) <= N]
        if search_avoiding_coloring(P, k, N, config, budget_ms, in_range) is None:
            logger.info(f"every {k}-coloring of [1..{N}] has a monochromatic solution of {P}")
            return N
    return None


def _nu2(v: int) -> int:
    return (v & -v).bit_length() - 1


NAMED_COLORINGS: Dict[str, Callable[[int, int], Coloring]] = {
    "parity": lambda k, N: lambda v: v % k,
    "halves": lambda k, N: lambda v: min((v - 1) * k // N, k - 1),
    "log2_blocks": lambda k, N: lambda v: (v.bit_length() - 1) % k,
    "nu2_parity": lambda k, N: lambda v: _nu2(v) % k,
}


def named_coloring(name: str, k: int = 2, N: int = 64) -> Coloring:
    if name not in NAMED_COLORINGS:
        raise PreconditionError(f"unknown coloring {name!r}; known: {sorted(NAMED_COLORINGS)}")
    return NAMED_COLORINGS[name](k, N)


def _integral_rows(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], ncols: int
) -> Tuple[np.ndarray, np.ndarray]:
    scaled, targets = [], []
    for row, b in zip(rows, rhs):
        scale = lcm(*(Fraction(v).denominator for v in list(row) + [b]))
        scaled.append([int(Fraction(v) * scale) for v in row])
        targets.append(int(Fraction(b) * scale))
    return np.array(scaled, dtype=np.int64).reshape(len(rows), ncols), np.array(targets, dtype=np.int64)


def check_system_empirically(
    system: MixedSystem,
    k: int = 2,
    N: int = 60,
    margin: int = 3,
    colorings: Sequence[str] = tuple(NAMED_COLORINGS),
) -> Optional[Tuple[str, Tuple[int, ...]]]:
    """A monochromatic t in [1..N]^n with A t = d and every inequality row above ``margin``.

    Tries the named colorings in order and returns the first coloring name with
    the lexicographically least such t.
    """
    n = system.nvars
    A, d = _integral_rows(system.A.rows_list(), system.d, n)
    B, _ = _integral_rows(list(system.inequality_rows), [0] * len(system.inequality_rows), n)
    for name in colorings:
        color = named_coloring(name, k, N)
        classes: Dict[int, List[int]] = {}
        for v in range(1, N + 1):
            classes.setdefault(color(v), []).append(v)
        best = None
        for members in classes.values():
            values = np.array(members, dtype=np.int64)
            for head in members:
                if n == 1:
                    grid = np.array([[head]], dtype=np.int64)
                else:
                    mesh = np.meshgrid(*([values] * (n - 1)), indexing="ij")
                    rest = np.stack([m.ravel() for m in mesh], axis=1)
                    grid = np.hstack([np.full((len(rest), 1), head, dtype=np.int64), rest])
                mask = np.ones(len(grid), dtype=bool)
                if A.size:
                    mask &= np.all(grid @ A.T == d, axis=1)
                if B.size:
                    mask &= np.all(grid @ B.T > margin, axis=1)
                hits = np.nonzero(mask)[0]
                if hits.size:
                    t = tuple(int(v) for v in grid[hits[0]])
                    if best is None or t < best:
                        best = t
                    break
        if best is not None:
            return name, best
    return None
