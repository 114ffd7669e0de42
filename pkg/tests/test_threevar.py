from fractions import Fraction
from math import gcd

import numpy as np
import pytest
import sympy as sp

from src.radopr.components.polyalg import parse_polynomial
from src.radopr.components.threevar import (
    Domain,
    PowerTestInput,
    check_inhomogeneous_necessary,
    coloring_classes,
    decide_Hform_pr,
    expand_hform,
    has_complete_functional_structure,
    is_power_in_N,
    is_power_in_Q,
    nu_p,
    nu_p_coloring,
    obstructing_primes,
    obstruction_coloring,
    ratio_candidates,
)
from src.radopr.entity.errors import PreconditionError


def test_hform_of_xz2_4y():
    extraction = has_complete_functional_structure(parse_polynomial("x*z^2 - 4*y"))
    assert extraction.permutation == (0, 1, 2)
    assert extraction.rho == 2
    assert extraction.z_exponent == 0
    assert extraction.H.terms == {(1, 0): 1, (0, 1): -4}


def test_hform_needs_a_permutation():
    P = parse_polynomial("x*y^2 - 2*z")
    extraction = has_complete_functional_structure(P)
    assert extraction.permutation == (0, 2, 1)
    assert expand_hform(extraction) == P


def test_no_hform():
    assert has_complete_functional_structure(parse_polynomial("x + y - z^2")) is None


@pytest.mark.parametrize("text", ["x + y - z", "x*y - 1 + z", "x^2 - y"])
def test_hform_preconditions(text):
    with pytest.raises(PreconditionError):
        has_complete_functional_structure(parse_polynomial(text))


def test_power_tests():
    four = PowerTestInput.of(Fraction(4), Fraction(2))
    assert four.to_json() == {"a": 1, "b": 4, "m": 2, "n": 1}
    assert is_power_in_Q(four)
    assert is_power_in_N(four) == 2

    eight = PowerTestInput(1, 8, 2)
    assert obstructing_primes(eight) == [2]
    assert not is_power_in_Q(eight)
    assert is_power_in_N(eight) is None

    quarter = PowerTestInput(4, 1, 2)
    assert is_power_in_Q(quarter)
    assert is_power_in_N(quarter) is None

    with pytest.raises(PreconditionError):
        PowerTestInput(2, 4, 2)


def test_nu_p_coloring():
    assert nu_p(24, 2) == 3
    color = nu_p_coloring([2], 2)
    assert color(8) == (1,)
    assert coloring_classes(color, 8) == [[1, 3, 4, 5, 7], [2, 6, 8]]


def test_ratio_candidates():
    extraction = has_complete_functional_structure(parse_polynomial("x*z^2 - 8*y"))
    (candidate,) = ratio_candidates(extraction)
    assert candidate.X == 8
    assert candidate.primes == [2]


def test_decide_pr_with_square_ratio():
    P = parse_polynomial("x*z^2 - 4*y")
    verdict = decide_Hform_pr(P)
    assert verdict.is_pr
    assert verdict.certificate["l"] == 2
    assert verdict.certificate["sample_solutions"] == [[1, 1, 2], [2, 2, 2], [1, 4, 4]]


def test_decide_not_pr_with_obstructing_prime():
    verdict = decide_Hform_pr(parse_polynomial("x*z^2 - 8*y"))
    assert verdict.is_not_pr
    assert verdict.certificate["coloring"] == {"kind": "nu_p", "primes": [2], "modulus": 2, "multiplier": 1}
    color = obstruction_coloring(verdict)
    assert color(2) != color(4)


def test_decide_after_permutation():
    verdict = decide_Hform_pr(parse_polynomial("x*y^2 - 2*z"))
    assert verdict.is_not_pr
    assert verdict.certificate["obstructing_primes"] == [2]


def test_power_in_q_only_is_unknown_over_n():
    P = parse_polynomial("4*x*z^2 - y")
    assert decide_Hform_pr(P, Domain.NATURALS).is_unknown
    assert decide_Hform_pr(P, Domain.RATIONALS).is_pr


def test_negative_ratio_has_no_natural_solutions():
    verdict = decide_Hform_pr(parse_polynomial("x*z^2 + 4*y"))
    assert verdict.is_not_pr
    assert verdict.certificate["obstructing_primes"] == []


def test_over_rationals():
    assert decide_Hform_pr(parse_polynomial("x*z^2 - 2*y"), Domain.RATIONALS).is_not_pr


def test_necessary_condition_on_sum_square():
    verdict = check_inhomogeneous_necessary(parse_polynomial("x + y - z^2"))
    assert verdict.is_not_pr
    assert verdict.route == "threevar-necessary"
    assert verdict.certificate["decompositions"]
    assert not any(d["zero_sum"] for d in verdict.certificate["decompositions"])


def test_necessary_condition_rejects_higher_order():
    with pytest.raises(PreconditionError):
        check_inhomogeneous_necessary(parse_polynomial("x*z^2 - 4*y"))


def _rational_power_exists(a, b, m, n):
    target = Fraction(a, b) ** n
    k = abs(m)
    if target < 0 and k % 2 == 0:
        return False
    return all(sp.integer_nthroot(abs(part), k)[1] for part in (target.numerator, target.denominator))


def test_power_in_Q_matches_integer_roots():
    rng = np.random.default_rng(13)
    checked = 0
    while checked < 200:
        a, b = (int(v) for v in rng.integers(-64, 65, size=2))
        m, n = int(rng.integers(-6, 7)), int(rng.integers(1, 5))
        if 0 in (a, b, m) or gcd(a, b) != 1 or gcd(m, n) != 1:
            continue
        assert is_power_in_Q(PowerTestInput(a, b, m, n)) == _rational_power_exists(a, b, m, n), (a, b, m, n)
        checked += 1
