import numpy as np
import pytest

from src.radopr.components.linear_pr import MixedSystem
from src.radopr.components.oracle import (
    ColoringWitness,
    check_system_empirically,
    coloring_from_function,
    count_monochromatic,
    enumerate_solutions,
    min_forcing_N,
    named_coloring,
    search_avoiding_coloring,
    verify_coloring,
)
from src.radopr.components.polyalg import parse_polynomial
from src.radopr.entity.config_entity import OracleConfig
from src.radopr.entity.errors import BudgetExceededError, PreconditionError


def test_schur_solutions(schur):
    solutions = [s.assignment for s in enumerate_solutions(schur, 4)]
    assert solutions == [(1, 1, 2), (1, 2, 3), (1, 3, 4), (2, 1, 3), (2, 2, 4), (3, 1, 4)]


def test_nonlinear_solutions():
    P = parse_polynomial("x*z^2 - 4*y")
    assert [s.assignment for s in enumerate_solutions(P, 2)] == [(1, 1, 2), (2, 2, 2)]


def test_rational_coefficients_are_cleared():
    P = parse_polynomial("(1/2)*x - y")
    assert [s.assignment for s in enumerate_solutions(P, 4)] == [(2, 1), (4, 2)]


def test_avoiding_coloring_for_schur(schur):
    witness = search_avoiding_coloring(schur, 2, 4)
    assert witness.classes() == [[1, 4], [2, 3]]
    assert verify_coloring(schur, witness)
    assert search_avoiding_coloring(schur, 2, 5) is None


def test_min_forcing(schur):
    assert min_forcing_N(schur, 2, 8) == 5
    assert min_forcing_N(schur, 1, 8) == 2


def test_count_monochromatic(schur):
    assert count_monochromatic(schur, (1, 1, 1, 1)) == 6
    assert count_monochromatic(schur, (1, 2, 2, 1)) == 0
    assert not verify_coloring(schur, ColoringWitness(4, 1, (1, 1, 1, 1)))


def test_coloring_relabel():
    assert coloring_from_function(lambda v: v % 2, 4) == (1, 2, 1, 2)
    assert coloring_from_function(named_coloring("nu2_parity"), 4) == (1, 2, 1, 1)


def test_budget_is_enforced(schur):
    with pytest.raises(BudgetExceededError):
        search_avoiding_coloring(schur, 2, 10, OracleConfig(budget_nodes=3))


@pytest.mark.parametrize("k, N", [(0, 4), (5, 4), (2, 2000)])
def test_search_limits(schur, k, N):
    with pytest.raises(PreconditionError):
        search_avoiding_coloring(schur, k, N)


def test_enumeration_limits(schur):
    with pytest.raises(PreconditionError):
        enumerate_solutions(schur, 0)
    with pytest.raises(PreconditionError):
        enumerate_solutions(parse_polynomial("x1 + x2 + x3 - x4"), 3, OracleConfig(max_vars=3))
    with pytest.raises(PreconditionError):
        named_coloring("rainbow")


def test_empirical_mixed_check():
    growing = MixedSystem.build([[1, 1, -1]], unbounded=[[-1, 0, 1]])
    assert check_system_empirically(growing, 2, 60, 3) == ("parity", (2, 4, 6))
    shrinking = MixedSystem.build([[1, 1, -1]], unbounded=[[1, 0, -1]])
    assert check_system_empirically(shrinking, 2, 30, 3) is None


def test_enumeration_matches_brute_force():
    rng = np.random.default_rng(3)
    for _ in range(10):
        a, b, c = (int(v) for v in rng.integers(1, 4, size=3))
        P = parse_polynomial(f"{a}*x + {b}*y - {c}*z")
        grid = np.stack(np.meshgrid(*[np.arange(1, 9)] * 3, indexing="ij"), axis=-1).reshape(-1, 3)
        hits = grid[grid @ np.array([a, b, -c]) == 0]
        assert [s.assignment for s in enumerate_solutions(P, 8)] == [tuple(int(v) for v in t) for t in hits]


def test_inhomogeneous_linear_has_one_solution():
    P = parse_polynomial("x + y + z = 3")
    assert [s.assignment for s in enumerate_solutions(P, 30)] == [(1, 1, 1)]


def test_doubling_is_avoided_on_fifty():
    P = parse_polynomial("2*x - y")
    witness = search_avoiding_coloring(P, 2, 50)
    assert witness is not None
    assert verify_coloring(P, witness)


def test_constant_solution_forces_every_coloring():
    # (2, 2, 2) is monochromatic under any coloring
    P = parse_polynomial("x + y - z^2")
    assert (2, 2, 2) in [s.assignment for s in enumerate_solutions(P, 40)]
    assert search_avoiding_coloring(P, 2, 40) is None
