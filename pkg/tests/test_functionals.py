from fractions import Fraction

import numpy as np
import pytest

from src.radopr.components.functionals import (
    Direction,
    FunctionalCheck,
    RadoFunctional,
    assemble_O,
    build_functional_system,
    difference_matrix,
    enumerate_rado_sets,
    explore_functionals,
    is_maximal_rado_set,
    rado_set_necessary,
    validate_corollaries,
    verify_functional,
)
from src.radopr.components.linear_pr import columns_condition
from src.radopr.components.polyalg import parse_polynomial
from src.radopr.entity.config_entity import SearchBounds
from src.radopr.entity.errors import PreconditionError, SupportTooLargeError

XZ2 = (1, 0, 2)
Y = (0, 1, 0)


@pytest.fixture
def xz2_4y():
    return parse_polynomial("x*z^2 - 4*y")


def test_difference_matrix():
    assert difference_matrix([(1, 0), (0, 1)]).rows_list() == [(-1, 1)]
    assert difference_matrix([(1, 0), (0, 1)], 2).rows_list() == [(1, -1)]
    assert difference_matrix([(1, 0)]).rows == 0
    with pytest.raises(PreconditionError):
        difference_matrix([(1, 0), (0, 1)], 3)


def test_rado_sets_of_schur(schur):
    supp = schur.support()
    assert rado_set_necessary([(1, 0, 0), (0, 1, 0)], supp)
    assert not is_maximal_rado_set([(1, 0, 0), (0, 1, 0)], supp)
    assert is_maximal_rado_set(list(supp), supp)
    reports = enumerate_rado_sets(schur)
    assert reports[-1].maximal
    assert set(reports[-1].members) == supp
    with pytest.raises(PreconditionError):
        rado_set_necessary([(2, 0, 0)], supp)


def test_functional_shape_is_checked():
    with pytest.raises(PreconditionError):
        RadoFunctional(((XZ2,), (Y,)), order=2, increments=(1, 1))
    with pytest.raises(PreconditionError):
        RadoFunctional(((XZ2,), (Y,)), order=1, increments=(0,))
    with pytest.raises(PreconditionError):
        RadoFunctional(((XZ2,), ()), order=0)


def test_functional_system_of_complete_functional(xz2_4y):
    f = RadoFunctional(((XZ2,), (Y,)), order=1, increments=(2,))
    system = build_functional_system(f, xz2_4y)
    assert system.A_hat.rows_list() == [(1, -1, 2)]
    assert system.b_hat == (2,)
    assert system.inequality_rows == ()
    assert f.is_complete


def test_unbounded_rows_of_unpinned_blocks(schur):
    f = RadoFunctional((((1, 0, 0), (0, 1, 0)), ((0, 0, 1),)))
    system = build_functional_system(f, schur)
    assert system.A_hat.rows_list() == [(-1, 1, 0)]
    assert system.inequality_rows == ((1, 0, -1),)
    O = assemble_O(f, schur, q=[2])
    assert O.rows_list() == [(1, -1, 0, 0), (1, 0, -1, -2)]
    with pytest.raises(PreconditionError):
        assemble_O(f, schur)


def test_blocks_must_partition_the_support(schur):
    f = RadoFunctional((((1, 0, 0),), ((0, 1, 0),)))
    with pytest.raises(PreconditionError):
        build_functional_system(f, schur)


def test_verify_complete_functional(xz2_4y):
    verdict = verify_functional(RadoFunctional(((XZ2,), (Y,)), order=1, increments=(2,)), xz2_4y)
    assert verdict.is_pr
    assert verdict.certificate["s"] == "1"


def test_corollaries_reject_bad_increments(xz2_4y):
    f = RadoFunctional(((XZ2,), (Y,)), order=1, increments=(3,))
    violations = validate_corollaries(f, xz2_4y)
    assert any(v.startswith(FunctionalCheck.DEGREE_RELATION.value) for v in violations)
    assert any(v.startswith(FunctionalCheck.INTEGER_CONSTANT.value) for v in violations)
    assert verify_functional(f, xz2_4y).is_not_pr


def test_homogeneous_polynomials_have_order_zero(schur):
    f = RadoFunctional((((1, 0, 0),), ((0, 1, 0), (0, 0, 1))), order=1, increments=(1,))
    verdict = verify_functional(f, schur)
    assert verdict.is_not_pr
    assert verdict.reason.startswith(FunctionalCheck.ORDER_ZERO_FOR_HOMOGENEOUS.value)


def test_search_on_homogeneous_polynomial(schur):
    search = explore_functionals(schur)
    assert search.complete
    assert search.functionals
    assert all(f.order == 0 and f.verified for f in search.functionals)
    whole = [f for f in search.functionals if len(f.blocks) == 1]
    assert len(whole) == 1


def test_search_finds_the_complete_functional(xz2_4y):
    search = explore_functionals(xz2_4y)
    complete = [f for f in search.of_order(1) if f.is_complete]
    assert any(f.blocks == ((XZ2,), (Y,)) and f.increments == (2,) for f in complete)
    for f in complete:
        assert f.increments[0] % 2 == 0
        assert f.increments[0] <= SearchBounds().d_max


def test_lower_search_mirrors_direction(xz2_4y):
    search = explore_functionals(xz2_4y, direction=Direction.LOWER)
    assert search.functionals
    assert all(f.direction is Direction.LOWER for f in search.functionals)
    assert not any(f.is_complete for f in search.functionals)


def test_support_limit(schur):
    with pytest.raises(SupportTooLargeError):
        explore_functionals(schur, SearchBounds(max_support=2))


def test_functional_json_keeps_identity(xz2_4y):
    f = RadoFunctional(((XZ2,), (Y,)), order=1, increments=(2,))
    again = RadoFunctional.from_json(f.to_json())
    assert again == f
    assert again.mirror().direction is Direction.LOWER
    assert Fraction(again.increments[0]) == 2


def test_columns_condition_ignores_the_base_index():
    rng = np.random.default_rng(11)
    for _ in range(30):
        size = int(rng.integers(2, 5))
        J = list({tuple(int(e) for e in rng.integers(0, 3, size=3)) for _ in range(size)})
        if len(J) < 2:
            continue
        expected = columns_condition(difference_matrix(J, 1)) is not None
        for j in range(2, len(J) + 1):
            assert (columns_condition(difference_matrix(J, j)) is not None) == expected


@pytest.fixture(scope="module")
def cubic():
    return parse_polynomial("x^3 + y^3 - z^3")


def test_fermat_cubic_order_zero_functional(cubic):
    search = explore_functionals(cubic)
    assert search.functionals
    assert all(f.order == 0 for f in search.functionals)
    f = next(f for f in search.functionals if set(f.blocks[0]) == {(3, 0, 0), (0, 0, 3)})
    assert f.verified
    O = assemble_O(RadoFunctional((((3, 0, 0), (0, 0, 3)), ((0, 3, 0),))), cubic, q=[1])
    assert O.rows_list() == [(3, 0, -3, 0), (3, -3, 0, -1)]


def test_fermat_cubic_rejects_higher_orders(cubic):
    f = RadoFunctional((((3, 0, 0),), ((0, 3, 0), (0, 0, 3))), order=1, increments=(1,))
    violations = validate_corollaries(f, cubic)
    assert any(v.startswith(FunctionalCheck.ORDER_ZERO_FOR_HOMOGENEOUS.value) for v in violations)
    assert verify_functional(f, cubic).is_not_pr
