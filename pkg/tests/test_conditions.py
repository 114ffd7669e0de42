from fractions import Fraction

import numpy as np
import pytest

from src.radopr.components.conditions import (
    TargetKind,
    TargetSet,
    certify_pr_complete,
    complete_q_polynomial,
    generate_solutions,
    maximal_rado_check,
    q_polynomial,
    scaled_root_identity,
)
from src.radopr.components.functionals import RadoFunctional, explore_functionals
from src.radopr.components.oracle import enumerate_solutions
from src.radopr.components.polyalg import Polynomial, parse_polynomial
from src.radopr.entity.errors import PreconditionError
from src.radopr.entity.verdict_entity import ConditionStatus

XZ2 = (1, 0, 2)
Y = (0, 1, 0)


@pytest.fixture(scope="module")
def xz2_4y():
    return parse_polynomial("x*z^2 - 4*y")


@pytest.fixture(scope="module")
def search(xz2_4y):
    return explore_functionals(xz2_4y)


def _complete(search, increment):
    return next(
        f for f in search.functionals
        if f.is_complete and f.blocks == ((XZ2,), (Y,)) and f.increments == (increment,)
    )


def test_target_sets():
    assert TargetSet.parse("N").kind is TargetKind.NATURALS
    powers = TargetSet.parse("powers:2")
    assert powers.contains(Fraction(8))
    assert not powers.contains(Fraction(6))
    assert not powers.contains(Fraction(1))
    assert not TargetSet().contains(Fraction(1, 2))
    with pytest.raises(PreconditionError):
        TargetSet(TargetKind.POWERS, 1)
    with pytest.raises(PreconditionError):
        TargetSet.parse("Z")


def test_complete_q_polynomial(xz2_4y, search):
    Q = complete_q_polynomial(xz2_4y, _complete(search, 2)).base
    assert Q.coefficients == (-4, 0, 1)


def test_q_polynomial_requires_a_verified_functional(xz2_4y, search):
    raw = RadoFunctional(((XZ2,), (Y,)), order=1, increments=(2,))
    with pytest.raises(PreconditionError):
        q_polynomial(xz2_4y, raw, 2)
    with pytest.raises(PreconditionError):
        q_polynomial(xz2_4y, _complete(search, 2), 1)


def test_certify_finds_root_and_solutions(xz2_4y, search):
    verdict = certify_pr_complete(xz2_4y, _complete(search, 2))
    assert verdict.is_pr
    assert verdict.certificate["root"] == 2
    assert verdict.certificate["sample_solutions"] == [[2, 2, 2], [4, 4, 2], [8, 8, 2]]
    for point in verdict.certificate["sample_solutions"]:
        assert xz2_4y.evaluate(point) == 0


def test_certify_without_natural_root_is_unknown(xz2_4y, search):
    # w^4 - 4 has no rational root
    assert certify_pr_complete(xz2_4y, _complete(search, 4)).is_unknown
    # 2 is not a power of 3
    assert certify_pr_complete(xz2_4y, _complete(search, 2), TargetSet.parse("powers:3")).is_unknown


def test_generated_points_must_solve(xz2_4y, search):
    with pytest.raises(PreconditionError):
        generate_solutions(xz2_4y, _complete(search, 2), 3)


def test_scaled_root_identity(xz2_4y, search):
    lhs, rhs = scaled_root_identity(xz2_4y, _complete(search, 2), 3, 2)
    assert lhs == rhs == Fraction(-7, 4)


@pytest.mark.parametrize("text", ["x + y - z", "x*z^2 - 4*y"])
def test_maximal_rado_holds(text):
    assert maximal_rado_check(parse_polynomial(text)).status is ConditionStatus.HOLDS


def test_maximal_rado_fails_without_zero_sum():
    report = maximal_rado_check(parse_polynomial("x + y - 3*z"))
    assert report.status is ConditionStatus.FAILS
    assert report.witness_q == 2
    assert set(report.details["samples"]) == {"2", "3", "4", "5", "7", "16"}


def test_scaled_root_identity_on_random_instances(search):
    f = _complete(search, 2)
    rng = np.random.default_rng(19)
    for _ in range(50):
        c1, c2 = (int(v) for v in rng.choice([-9, -5, -3, -2, -1, 1, 2, 3, 5, 9], size=2))
        P = Polynomial(3, {XZ2: c1, Y: -c2}, ("x", "y", "z"))
        a = Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 8)))
        b = int(rng.integers(1, 8))
        lhs, rhs = scaled_root_identity(P, f, a, b)
        assert lhs == rhs, (c1, c2, a, b)


def test_maximal_rado_holds_for_the_fermat_cubic():
    cubic = parse_polynomial("x^3 + y^3 - z^3")
    report = maximal_rado_check(cubic)
    assert report.status is ConditionStatus.HOLDS
    assert any(
        source["kind"] == "order-0" and source["Q"] == [] and source["from_q"] == 2
        for source in report.details["coverage"]
    )
    assert enumerate_solutions(cubic, 50) == []
