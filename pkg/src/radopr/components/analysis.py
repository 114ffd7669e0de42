"""End-to-end analysis of one input: decision routes in precedence order, then
the finite cross-check against the brute-force oracle.

Precedence for polynomials: linear decision, three-variable H-form decision,
complete-functional certificate, the three-variable necessary condition, and
last the maximal Rado condition, whose failure only becomes ProvedNotPR when the
oracle finds an avoiding coloring.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

from src.radopr import logger
from src.radopr.components.certificates import certificate_document, polynomial_input
from src.radopr.components.conditions import TargetSet, certify_pr_complete, maximal_rado_check
from src.radopr.components.functionals import Direction, FunctionalSearch, explore_functionals
from src.radopr.components.linear_pr import (
    MixedSystem,
    decide_inhomogeneous_pr,
    decide_linear_pr,
    decide_mixed_inhomogeneous,
)
from src.radopr.components.oracle import (
    ColoringWitness,
    check_system_empirically,
    coloring_from_function,
    count_monochromatic,
    enumerate_solutions,
    search_avoiding_coloring,
)
from src.radopr.components.polyalg import Polynomial, RationalMatrix, as_fraction, format_fraction, parse_polynomial
from src.radopr.components.threevar import (
    Domain,
    check_inhomogeneous_necessary,
    decide_Hform_pr,
    has_complete_functional_structure,
    obstruction_coloring,
)
from src.radopr.entity.config_entity import AnalysisConfig
from src.radopr.entity.errors import (
    BudgetExceededError,
    PreconditionError,
    SupportTooLargeError,
    ZeroPolynomialError,
)
from src.radopr.entity.verdict_entity import ConditionStatus, Verdict

# the maximal Rado corroboration looks for an avoiding coloring of [1..N] with N at most this
CORROBORATION_RANGE = 40


@dataclass
class Analysis:
    verdict: Verdict
    evidence: Dict[str, Any] = field(default_factory=dict)
    oracle: Dict[str, Any] = field(default_factory=dict)
    document: Optional[Dict[str, Any]] = None


def _brief(verdict: Verdict) -> Dict[str, str]:
    return {"status": verdict.status.value, "route": verdict.route, "reason": verdict.reason}


def linear_system_of(P: Polynomial) -> Tuple[RationalMatrix, List[Fraction]]:
    """The single equation a . x = b of a polynomial of degree at most 1."""
    if P.total_degree() > 1:
        raise PreconditionError(f"{P} is not linear")
    n = P.nvars
    row = [P.coefficient(tuple(1 if j == i else 0 for j in range(n))) for i in range(n)]
    return RationalMatrix.from_rows([row], n), [-P.coefficient((0,) * n)]


def decide_linear_equation(A: RationalMatrix, b) -> Verdict:
    if any(as_fraction(v) for v in b):
        return decide_inhomogeneous_pr(A, b)
    return decide_linear_pr(A)


def _linear_input(A: RationalMatrix, b) -> Dict[str, Any]:
    return {
        "n": A.cols,
        "A": [[format_fraction(v) for v in row] for row in A.rows_list()],
        "b": [format_fraction(v) for v in b],
    }


def _corroborate(P: Polynomial, config: AnalysisConfig, budget_ms: Optional[int]) -> Optional[ColoringWitness]:
    N = min(config.oracle.n_range, CORROBORATION_RANGE)
    try:
        return search_avoiding_coloring(P, min(config.oracle.colors, 2), N, config.oracle, budget_ms)
    except (BudgetExceededError, PreconditionError) as e:
        logger.info(f"maximal Rado failure not corroborated: {e}")
        return None


def analyze_polynomial(
    P: Polynomial,
    config: AnalysisConfig = AnalysisConfig(),
    budget_ms: Optional[int] = None,
) -> Tuple[Verdict, Dict[str, Any]]:
    """The consolidated verdict for P = 0 over N together with the evidence of each route."""
    if P.is_zero():
        raise ZeroPolynomialError("the zero polynomial is solved by every assignment")
    evidence: Dict[str, Any] = {}
    if P.total_degree() <= 1:
        A, b = linear_system_of(P)
        return decide_linear_equation(A, b), evidence

    search: Optional[FunctionalSearch] = None
    try:
        search = explore_functionals(P, config.bounds, Direction.UPPER, config.mixed)
        evidence["search"] = {
            "functionals": len(search.functionals),
            "candidates": search.candidates,
            "unknown": search.unknown,
            "truncated": search.truncated,
        }
    except SupportTooLargeError as e:
        evidence["search"] = str(e)

    three = P.nvars == 3 and not P.is_homogeneous() and not P.has_constant_term()
    if three and has_complete_functional_structure(P) is not None:
        verdict = decide_Hform_pr(P, Domain.NATURALS, config.certification.sample_count)
        evidence["threevar"] = _brief(verdict)
        if not verdict.is_unknown:
            return verdict, evidence

    if search is None:
        return Verdict.unknown("analysis", "the support exceeds the functional search bounds"), evidence

    for f in (f for f in search.functionals if f.is_complete):
        try:
            verdict = certify_pr_complete(P, f, TargetSet(), config.certification)
        except PreconditionError as e:
            logger.debug(f"complete functional skipped: {e}")
            continue
        evidence.setdefault("complete", []).append(_brief(verdict))
        if verdict.is_pr:
            return verdict, evidence

    if three:
        try:
            verdict = check_inhomogeneous_necessary(P, config.bounds, config.mixed, search)
            evidence["necessary"] = _brief(verdict)
            if verdict.is_not_pr:
                return verdict, evidence
        except PreconditionError as e:
            evidence["necessary"] = str(e)

    report = maximal_rado_check(P, config.maximal_rado, config.bounds, config.mixed, search)
    evidence["maximal_rado"] = {
        "status": report.status.value,
        "witness_q": report.witness_q,
        "reason": report.reason,
    }
    if report.status is ConditionStatus.FAILS:
        witness = _corroborate(P, config, budget_ms) if config.cross_check else None
        if witness is not None:
            return Verdict.proved_not_pr(
                "maximal-rado",
                {"witness_q": report.witness_q, "avoiding_coloring": witness.to_json()},
                reason=report.reason,
            ), evidence
        return Verdict.unknown("maximal-rado", f"{report.reason}; not corroborated by the oracle"), evidence
    return Verdict.unknown("analysis", "no route decides this polynomial"), evidence


def oracle_cross_check(
    P: Polynomial,
    verdict: Verdict,
    config: AnalysisConfig = AnalysisConfig(),
    budget_ms: Optional[int] = None,
) -> Dict[str, Any]:
    """Brute force on [1..N] with k colors, and the finite checks a verdict must survive.

    A ProvedPR certificate contradicts the oracle when one of its sample
    solutions is not a solution; a ProvedNotPR certificate when its obstruction
    coloring leaves a monochromatic solution in range.
    """
    k, N = config.oracle.colors, config.oracle.n_range
    result: Dict[str, Any] = {"k": k, "N": N}
    if P.nvars > config.oracle.max_vars:
        result.update(outcome="skipped", contradiction=False)
        return result
    solutions = enumerate_solutions(P, N, config.oracle)
    result["solutions"] = len(solutions)
    try:
        witness = search_avoiding_coloring(P, k, N, config.oracle, budget_ms, solutions)
        if witness is None:
            result["outcome"] = "forced"
        else:
            result["outcome"] = "avoiding"
            result["witness"] = witness.classes()
    except BudgetExceededError as e:
        result["outcome"] = "budget"
        result["reason"] = str(e)

    problems = []
    if verdict.is_pr:
        for point in verdict.certificate.get("sample_solutions", []):
            if P.evaluate(point) != 0:
                problems.append(f"sample {point} is not a solution")
    coloring = obstruction_coloring(verdict) if verdict.is_not_pr else None
    if coloring is not None:
        colors = coloring_from_function(coloring, N)
        monochromatic = count_monochromatic(P, colors, solutions)
        if monochromatic:
            problems.append(f"obstruction coloring has {monochromatic} monochromatic solutions in [1..{N}]")
    result["contradiction"] = bool(problems)
    if problems:
        result["problems"] = problems
        logger.error(f"oracle contradicts the verdict on {P}: {problems[0]}")
    return result


def analyze_input(
    kind: str,
    payload: Union[str, Dict[str, Any]],
    config: AnalysisConfig = AnalysisConfig(),
    budget_ms: Optional[int] = None,
) -> Analysis:
    """Dispatch on the input kind: ``polynomial`` text, ``linear`` {A, b} or ``mixed`` system."""
    if kind == "polynomial":
        P = parse_polynomial(payload)
        verdict, evidence = analyze_polynomial(P, config, budget_ms)
        if P.total_degree() <= 1:
            A, b = linear_system_of(P)
            document = certificate_document(verdict, _linear_input(A, b))
        else:
            document = certificate_document(verdict, polynomial_input(P))
        oracle = oracle_cross_check(P, verdict, config, budget_ms) if config.cross_check else {}
        logger.info(f"{P}: {verdict.status.value} via {verdict.route}")
        return Analysis(verdict, evidence, oracle, document)

    if kind == "linear":
        A = RationalMatrix.from_rows(payload["A"], payload.get("n"))
        b = payload.get("b") or [0] * A.rows
        verdict = decide_linear_equation(A, b)
        system = MixedSystem.build(A, b)
        document = certificate_document(verdict, _linear_input(A, [as_fraction(v) for v in b]))
    elif kind == "mixed":
        system = MixedSystem.from_json(payload)
        verdict = decide_mixed_inhomogeneous(system, config.mixed)
        document = certificate_document(verdict, {"system": system.to_json()})
    else:
        raise PreconditionError(f"unknown input kind {kind!r}")
    oracle: Dict[str, Any] = {}
    if config.cross_check:
        found = check_system_empirically(
            system, config.oracle.colors, min(config.oracle.n_range, 60), config.oracle.margin
        )
        oracle = {
            "outcome": "monochromatic" if found else "none",
            "coloring": found[0] if found else None,
            "t": list(found[1]) if found else None,
            "contradiction": False,
        }
    logger.info(f"{kind} system: {verdict.status.value} via {verdict.route}")
    return Analysis(verdict, {}, oracle, document)
