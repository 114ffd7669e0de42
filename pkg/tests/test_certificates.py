import copy

import pytest

from src.radopr.components.certificates import (
    certificate_document,
    functional_document,
    polynomial_input,
    verify_certificate,
)
from src.radopr.components.conditions import certify_pr_complete
from src.radopr.components.functionals import explore_functionals
from src.radopr.components.linear_pr import (
    MixedSystem,
    decide_inhomogeneous_pr,
    decide_linear_pr,
    decide_mixed_inhomogeneous,
)
from src.radopr.components.polyalg import parse_polynomial
from src.radopr.components.threevar import decide_Hform_pr
from src.radopr.entity.errors import CertificateError

SCHUR_INPUT = {"n": 3, "A": [["1", "1", "-1"]], "b": ["0"]}


@pytest.fixture(scope="module")
def xz2_4y():
    return parse_polynomial("x*z^2 - 4*y")


def test_only_proved_pr_gets_a_document():
    assert certificate_document(decide_linear_pr([[2, -1]]), {"n": 2, "A": [["2", "-1"]]}) is None


def test_columns_certificate_round_trip():
    document = certificate_document(decide_linear_pr([[1, 1, -1]]), SCHUR_INPUT)
    assert document["kind"] == "linear"
    assert verify_certificate(document) == (True, [])

    forged = copy.deepcopy(document)
    forged["certificate"]["columns"]["blocks"] = [[0], [1, 2]]
    valid, problems = verify_certificate(forged)
    assert not valid
    assert "columns condition" in problems[0]


def test_natural_constant_certificate():
    payload = {"n": 3, "A": [["1", "1", "1"]], "b": ["3"]}
    document = certificate_document(decide_inhomogeneous_pr([[1, 1, 1]], [3]), payload)
    assert verify_certificate(document)[0]
    document["certificate"]["s"] = "2"
    assert not verify_certificate(document)[0]


def test_mixed_certificate():
    system = MixedSystem.build([[1, 1, -1]], unbounded=[[-1, 0, 1]])
    verdict = decide_mixed_inhomogeneous(system)
    document = certificate_document(verdict, {"system": system.to_json()})
    assert document["kind"] == "mixed"
    assert verify_certificate(document)[0]
    document["certificate"]["q"] = ["-1"]
    assert not verify_certificate(document)[0]


def test_hform_certificate(xz2_4y):
    document = certificate_document(decide_Hform_pr(xz2_4y), polynomial_input(xz2_4y))
    assert document["kind"] == "hform-solutions"
    assert verify_certificate(document)[0]
    document["certificate"]["sample_solutions"].append([1, 1, 4])
    valid, problems = verify_certificate(document)
    assert not valid
    assert problems == ["[1, 1, 4] is not a solution"]


def test_complete_functional_certificate(xz2_4y):
    search = explore_functionals(xz2_4y)
    f = next(
        f for f in search.functionals
        if f.is_complete and f.blocks == (((1, 0, 2),), ((0, 1, 0),)) and f.increments == (2,)
    )
    document = certificate_document(certify_pr_complete(xz2_4y, f), polynomial_input(xz2_4y))
    assert document["kind"] == "complete-functional-root"
    assert verify_certificate(document) == (True, [])
    document["certificate"]["root"] = 3
    assert not verify_certificate(document)[0]


def test_hform_rejects_a_forged_power():
    P = parse_polynomial("x*z^2 - 8*y")
    document = {
        "kind": "hform-solutions",
        "status": "ProvedPR",
        "route": "threevar-hform",
        "input": polynomial_input(P),
        "certificate": {"X": "8", "l": 2, "sample_solutions": [[2, 1, 2], [4, 2, 2], [8, 4, 2]]},
    }
    valid, problems = verify_certificate(document)
    assert not valid
    assert problems == ["l=2 does not satisfy a^n l^m = b^n for X=8"]


def test_hform_requires_a_factor_ratio(xz2_4y):
    document = certificate_document(decide_Hform_pr(xz2_4y), polynomial_input(xz2_4y))
    document["certificate"]["X"] = "9"
    assert verify_certificate(document) == (False, ["X=9 is not a factor ratio of H"])
    del document["certificate"]["X"]
    valid, problems = verify_certificate(document)
    assert not valid
    assert problems[0].startswith("malformed hform-solutions certificate")


def test_hform_over_rationals():
    P = parse_polynomial("4*x*z^2 - y")
    document = certificate_document(decide_Hform_pr(P, over="Q"), polynomial_input(P))
    assert document["certificate"]["X"] == "1/4"
    assert verify_certificate(document) == (True, [])

    Q = parse_polynomial("x*z^2 - 2*y")
    forged = copy.deepcopy(document)
    forged["input"] = polynomial_input(Q)
    forged["certificate"]["X"] = "2"
    assert verify_certificate(forged) == (False, ["X=2 is not an m/n-power in Q"])


def test_functional_documents_are_not_verdicts(xz2_4y):
    search = explore_functionals(xz2_4y)
    documents = [functional_document(xz2_4y, f) for f in search.functionals]
    assert documents
    assert {d["status"] for d in documents} == {"VerifiedFunctional"}
    assert all(verify_certificate(d)[0] for d in documents)

    promoted = dict(documents[0], status="ProvedPR")
    valid, problems = verify_certificate(promoted)
    assert not valid
    assert problems == ["a single functional cannot carry status 'ProvedPR'"]


def test_functional_documents_for_a_non_pr_equation():
    P = parse_polynomial("x*z^2 - 8*y")
    documents = [functional_document(P, f) for f in explore_functionals(P).functionals]
    assert all(d["status"] == "VerifiedFunctional" for d in documents if d is not None)


def test_unknown_and_malformed_documents():
    with pytest.raises(CertificateError):
        verify_certificate({"kind": "telepathy"})
    valid, problems = verify_certificate({"kind": "linear", "input": SCHUR_INPUT})
    assert not valid
    assert problems[0].startswith("malformed linear certificate")
