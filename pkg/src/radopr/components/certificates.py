"""Certificate documents and their independent re-validation.

A document is ``{"kind", "input", "certificate", "status", "route"}``. Verdict
documents exist only for ProvedPR answers; each of them is checked by exact
linear algebra, rational roots and polynomial evaluation without any search.
Single functionals are written with the non-verdict status VerifiedFunctional:
a functional alone proves nothing about partition regularity.
"""
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

from src.radopr import logger
from src.radopr.components.functionals import RadoFunctional, build_functional_system
from src.radopr.components.linear_pr import (
    MixedSystem,
    verify_columns_certificate,
    verify_mixed_certificate,
)
from src.radopr.components.polyalg import (
    Polynomial,
    RationalMatrix,
    UnivariatePoly,
    as_fraction,
    parse_polynomial,
)
from src.radopr.components.threevar import Domain, has_complete_functional_structure, ratio_candidates
from src.radopr.entity.errors import CertificateError, RadoError
from src.radopr.entity.verdict_entity import ColumnsCertificate, Verdict

LINEAR = "linear"
MIXED = "mixed"
FUNCTIONAL = "functional"
COMPLETE_FUNCTIONAL = "complete-functional-root"
HFORM = "hform-solutions"

VERIFIED_FUNCTIONAL = "VerifiedFunctional"

ROUTE_KINDS = {
    "columns-condition": LINEAR,
    "inhomogeneous": LINEAR,
    "infinite": LINEAR,
    "infinite-homogeneous": LINEAR,
    "mixed-strict": MIXED,
    "mixed-unbounded": MIXED,
    "mixed-inhomogeneous": MIXED,
    "complete-functional": COMPLETE_FUNCTIONAL,
    "threevar-hform": HFORM,
}


def certificate_document(verdict: Verdict, input_payload: Dict[str, Any]) -> Optional[Dict[str, Any]]:
    """The re-checkable document for a ProvedPR verdict, None for anything else."""
    kind = ROUTE_KINDS.get(verdict.route)
    if not verdict.is_pr or kind is None:
        return None
    return {
        "kind": kind,
        "status": verdict.status.value,
        "route": verdict.route,
        "input": input_payload,
        "certificate": verdict.certificate,
    }


def polynomial_input(P: Polynomial) -> Dict[str, Any]:
    return {"polynomial": str(P), "variables": list(P.variables)}


def functional_document(P: Polynomial, f: RadoFunctional) -> Optional[Dict[str, Any]]:
    """Document for a single verified functional; its certificate is the functional itself."""
    if not f.verified or not f.certificate:
        return None
    return {
        "kind": FUNCTIONAL,
        "status": VERIFIED_FUNCTIONAL,
        "route": "functional",
        "input": polynomial_input(P),
        "certificate": f.to_json(),
    }


def _polynomial(document: Dict[str, Any]) -> Polynomial:
    payload = document["input"]
    return parse_polynomial(payload["polynomial"], payload.get("variables"))


def _constant_solves(A: RationalMatrix, b, s: Fraction) -> bool:
    return list(A.apply([s] * A.cols)) == [as_fraction(v) for v in b]


def _verify_linear(document: Dict[str, Any]) -> List[str]:
    payload, certificate = document["input"], document["certificate"]
    A = RationalMatrix.from_rows(payload["A"], payload.get("n"))
    b = payload.get("b") or [0] * A.rows
    problems = []
    if "columns" in certificate and not verify_columns_certificate(
        A, ColumnsCertificate.from_json(certificate["columns"])
    ):
        problems.append("columns partition does not satisfy the columns condition")
    if "s" in certificate:
        s = as_fraction(certificate["s"])
        if s.denominator != 1 or not _constant_solves(A, b, s):
            problems.append(f"s={certificate['s']} is not an integer constant solution")
        if certificate.get("clause") == "natural-constant" and s < 1:
            problems.append("natural-constant clause with s < 1")
        if "columns" not in certificate and certificate.get("clause") != "natural-constant":
            problems.append("integer constant without a columns partition")
    elif any(as_fraction(v) for v in b):
        problems.append("inhomogeneous system without a constant solution")
    elif "columns" not in certificate:
        problems.append("no columns partition")
    return problems


def _verify_mixed(document: Dict[str, Any]) -> List[str]:
    system = MixedSystem.from_json(document["input"]["system"])
    certificate = document["certificate"]
    rows = list(system.inequality_rows)
    if certificate.get("branch") == "natural-constant":
        s = as_fraction(certificate["s"])
        problems = []
        if s.denominator != 1 or s < 1 or not _constant_solves(system.A, system.d, s):
            problems.append(f"s={certificate['s']} is not a natural constant solution")
        if any(sum(r, Fraction(0)) <= 0 for r in rows):
            problems.append("an inequality row sum is not positive")
        return problems
    problems = []
    if "s" in certificate:
        s = as_fraction(certificate["s"])
        if s.denominator != 1 or not _constant_solves(system.A, system.d, s):
            problems.append(f"s={certificate['s']} is not an integer constant solution")
    elif not system.is_homogeneous():
        problems.append("inhomogeneous system without a constant solution")
    if not verify_mixed_certificate(system.A, rows, certificate):
        problems.append("augmented matrix fails the columns condition for the recorded q")
    return problems


def _functional_problems(P: Polynomial, f: RadoFunctional) -> List[str]:
    certificate = f.certificate or {}
    if not certificate:
        return ["functional carries no certificate"]
    system = build_functional_system(f, P)
    problems = []
    s = as_fraction(certificate["s"])
    if s.denominator != 1 or not _constant_solves(system.A_hat, system.b_hat, s):
        problems.append(f"s={certificate['s']} is not an integer constant solution of A_hat t = b_hat")
    if not verify_columns_certificate(system.A_hat, ColumnsCertificate.from_json(certificate["columns"])):
        problems.append("A_hat fails the columns condition for the recorded partition")
    if system.inequality_rows:
        mixed = {"q": certificate.get("q", []), "columns": certificate.get("mixed_columns")}
        if mixed["columns"] is None or not verify_mixed_certificate(
            system.A_hat, list(system.inequality_rows), mixed
        ):
            problems.append("unbounded rows are not certified")
    return problems


def _verify_functional(document: Dict[str, Any]) -> List[str]:
    P = _polynomial(document)
    f = RadoFunctional.from_json(document["certificate"])
    problems = _functional_problems(P, f)
    if document.get("status") != VERIFIED_FUNCTIONAL:
        problems.append(f"a single functional cannot carry status {document.get('status')!r}")
    return problems


def _is_power_of(value: int, base: int) -> bool:
    if base == 1:
        return value == 1
    while value > 1 and value % base == 0:
        value //= base
    return value == 1


def _samples_problems(P: Polynomial, samples, base: int) -> List[str]:
    problems = []
    for point in samples:
        if P.evaluate(point) != 0:
            problems.append(f"{point} is not a solution")
        elif any(not _is_power_of(int(v), base) for v in point):
            problems.append(f"{point} has a coordinate that is not a power of {base}")
    return problems


def _verify_complete_functional(document: Dict[str, Any]) -> List[str]:
    P = _polynomial(document)
    certificate = document["certificate"]
    f = RadoFunctional.from_json(certificate["functional"])
    problems = _functional_problems(P, f)
    if not f.is_complete:
        problems.append("functional is not complete")
        return problems
    terms: Dict[int, Fraction] = {}
    for d, block in zip(list(f.increments) + [0], f.blocks):
        terms[d] = terms.get(d, Fraction(0)) + sum((P.coefficient(a) for a in block), Fraction(0))
    Q = UnivariatePoly.from_terms(terms)
    if Q.to_json() != certificate["Q"]:
        problems.append("recorded Q-polynomial differs from the one built from the blocks")
    root = int(certificate["root"])
    if root < 1 or Q.evaluate(root) != 0:
        problems.append(f"{root} is not a natural root of Q")
    problems.extend(_samples_problems(P, certificate.get("sample_solutions", []), root))
    return problems


def _verify_hform(document: Dict[str, Any]) -> List[str]:
    """Rebuild the H-form and its factor ratios; the recorded X must be one of
    them and be a power in the claimed domain. Samples are checked last."""
    P = _polynomial(document)
    certificate = document["certificate"]
    extraction = has_complete_functional_structure(P)
    if extraction is None:
        return ["polynomial has no H-form"]
    X = as_fraction(certificate["X"])
    matching = [c for c in ratio_candidates(extraction) if c.X == X]
    if not matching:
        return [f"X={certificate['X']} is not a factor ratio of H"]
    candidate = matching[0]
    if Domain(certificate.get("over", Domain.NATURALS.value)) is Domain.RATIONALS:
        if not candidate.in_Q:
            return [f"X={certificate['X']} is not an m/n-power in Q"]
        return []
    l = int(certificate["l"])
    if X <= 0 or candidate.l != l:
        return [f"l={l} does not satisfy a^n l^m = b^n for X={certificate['X']}"]
    samples = certificate.get("sample_solutions", [])
    if not samples:
        return ["no sample solutions"]
    return _samples_problems(P, samples, l)


VERIFIERS: Dict[str, Callable[[Dict[str, Any]], List[str]]] = {
    LINEAR: _verify_linear,
    MIXED: _verify_mixed,
    FUNCTIONAL: _verify_functional,
    COMPLETE_FUNCTIONAL: _verify_complete_functional,
    HFORM: _verify_hform,
}


def verify_certificate(document: Dict[str, Any]) -> Tuple[bool, List[str]]:
    """Re-validate a certificate document; returns (valid, problems)."""
    kind = document.get("kind")
    if kind not in VERIFIERS:
        raise CertificateError(f"unknown certificate kind {kind!r}")
    try:
        problems = VERIFIERS[kind](document)
    except (KeyError, TypeError, ValueError, RadoError) as e:
        problems = [f"malformed {kind} certificate: {e!r}"]
    if problems:
        logger.warning(f"{kind} certificate rejected: {problems[0]}")
    return not problems, problems
