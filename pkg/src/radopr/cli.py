"""Command-line front end: ``radopr <subcommand> ...``.

Exit codes: 0 success (Unknown included), 1 expectation mismatch, invalid
certificate or oracle contradiction, 2 budget exhausted, 64 usage or parse error.
The ``oracle search`` subcommand reports 0 for a witness and 1 when every
coloring is forced.
"""
import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from src.radopr.components.analysis import analyze_input, decide_linear_equation
from src.radopr.components.batch_analysis import BatchAnalysis
from src.radopr.components.certificates import (
    VERIFIED_FUNCTIONAL,
    certificate_document,
    functional_document,
    polynomial_input,
    verify_certificate,
)
from src.radopr.components.conditions import TargetSet, certify_pr_complete, maximal_rado_check
from src.radopr.components.functionals import Direction, explore_functionals
from src.radopr.components.linear_pr import MixedSystem, decide_infinitely_pr, decide_mixed_inhomogeneous
from src.radopr.components.oracle import min_forcing_N, search_avoiding_coloring
from src.radopr.components.polyalg import RationalMatrix, as_fraction, format_fraction, parse_polynomial
from src.radopr.components.threevar import (
    Domain,
    check_inhomogeneous_necessary,
    decide_Hform_pr,
    has_complete_functional_structure,
)
from src.radopr.constants import EXIT_BUDGET, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, SCHEMA_FILE_PATH
from src.radopr.entity.config_entity import AnalysisConfig, BatchConfig
from src.radopr.entity.errors import BudgetExceededError, CertificateError, RadoError
from src.radopr.entity.verdict_entity import Status, Verdict
from src.radopr.utils.common import create_directories, load_json, read_yaml, save_json

# used when the batch command runs outside a checkout with schema.yaml
DEFAULT_SCHEMA = {
    "FIELDS": {"id": "str", "kind": "str", "input": "any", "expected": "str", "source": "str"},
    "REQUIRED": ["id", "kind", "input"],
    "VERDICTS": [s.value for s in Status],
    "KINDS": ["polynomial", "linear", "mixed"],
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _route_logs_to_stderr(verbose: bool) -> None:
    for handler in logging.getLogger().handlers:
        if isinstance(handler, logging.StreamHandler) and not isinstance(handler, logging.FileHandler):
            handler.setStream(sys.stderr)
            handler.setLevel(logging.INFO if verbose else logging.WARNING)


def _q_samples(text: str):
    try:
        values = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if any(v < 2 for v in values):
        raise argparse.ArgumentTypeError("q samples must be at least 2")
    return values


def _json_argument(text: str):
    """Inline JSON, or @path for a JSON file."""
    try:
        if text.startswith("@"):
            return json.loads(Path(text[1:]).read_text())
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read JSON argument {text!r}: {e}")


def analysis_config(args) -> AnalysisConfig:
    config = AnalysisConfig()
    bounds = config.bounds
    if args.s_max is not None:
        bounds = replace(bounds, s_max=args.s_max)
    if args.d_max is not None:
        bounds = replace(bounds, d_max=args.d_max)
    config = replace(config, bounds=bounds)
    if args.q_samples is not None:
        config = replace(config, maximal_rado=replace(config.maximal_rado, q_samples=args.q_samples))
    return config


def _polynomial(args):
    variables = args.vars.split(",") if getattr(args, "vars", None) else None
    return parse_polynomial(args.poly, variables)


def _emit(args, payload: Dict[str, Any], text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _verdict_text(verdict: Verdict) -> str:
    line = f"{verdict.status.value} ({verdict.route})"
    return f"{line}: {verdict.reason}" if verdict.reason else line


def _write_certificate(args, document: Optional[Dict[str, Any]]) -> None:
    if getattr(args, "certificate_out", None) and document is not None:
        save_json(path=Path(args.certificate_out), data=document)


def _emit_verdict(args, verdict: Verdict, document: Optional[Dict[str, Any]] = None) -> int:
    _write_certificate(args, document)
    _emit(args, verdict.to_json(), _verdict_text(verdict))
    return EXIT_OK


# subcommands


def cmd_parse(args) -> int:
    P = _polynomial(args)
    payload = {
        "text": str(P),
        "variables": list(P.variables),
        "terms": [[list(a), format_fraction(c)] for a, c in sorted(P.terms.items())],
        "degree": P.total_degree(),
        "homogeneous": P.is_homogeneous(),
    }
    _emit(args, payload, str(P))
    return EXIT_OK


def cmd_decide_linear(args) -> int:
    rows = _json_argument(args.matrix)
    A = RationalMatrix.from_rows(rows)
    b = _json_argument(args.rhs) if args.rhs else [0] * A.rows
    verdict = decide_infinitely_pr(A, b) if args.infinite else decide_linear_equation(A, b)
    payload = {
        "n": A.cols,
        "A": [[format_fraction(v) for v in r] for r in A.rows_list()],
        "b": [format_fraction(as_fraction(v)) for v in b],
    }
    return _emit_verdict(args, verdict, certificate_document(verdict, payload))


def cmd_decide_mixed(args) -> int:
    system = MixedSystem.from_json(_json_argument(args.system))
    verdict = decide_mixed_inhomogeneous(system, AnalysisConfig().mixed)
    return _emit_verdict(args, verdict, certificate_document(verdict, {"system": system.to_json()}))


def cmd_functionals(args) -> int:
    P = _polynomial(args)
    config = analysis_config(args)
    search = explore_functionals(P, config.bounds, Direction(args.direction), config.mixed)
    if args.certificates:
        create_directories([args.certificates], verbose=False)
        for i, f in enumerate(search.functionals):
            document = functional_document(P, f)
            if document is not None:
                save_json(path=Path(args.certificates) / f"functional-{i}.json", data=document)
    lines = [
        f"order {f.order}: blocks {[[list(a) for a in b] for b in f.blocks]} increments {list(f.increments)}"
        for f in search.functionals
    ]
    status = "complete" if search.complete else "incomplete"
    lines.append(f"{len(search.functionals)} functionals, search {status}")
    _emit(args, search.to_json(), "\n".join(lines))
    return EXIT_OK


def cmd_maximal_rado(args) -> int:
    P = _polynomial(args)
    config = analysis_config(args)
    report = maximal_rado_check(P, config.maximal_rado, config.bounds, config.mixed)
    text = report.status.value
    if report.witness_q is not None:
        text += f" at q={report.witness_q}"
    if report.reason:
        text += f": {report.reason}"
    _emit(args, report.to_json(), text)
    return EXIT_OK


def cmd_certify(args) -> int:
    P = _polynomial(args)
    config = analysis_config(args)
    target = TargetSet.parse(args.target)
    search = explore_functionals(P, config.bounds, Direction.UPPER, config.mixed)
    complete = [f for f in search.functionals if f.is_complete]
    verdict = Verdict.unknown("complete-functional", "no verified complete functional")
    for f in complete:
        verdict = certify_pr_complete(P, f, target, config.certification)
        if verdict.is_pr:
            break
    return _emit_verdict(args, verdict, certificate_document(verdict, polynomial_input(P)))


def cmd_threevar(args) -> int:
    P = _polynomial(args)
    config = analysis_config(args)
    if has_complete_functional_structure(P) is not None:
        verdict = decide_Hform_pr(P, Domain(args.over), config.certification.sample_count)
    else:
        verdict = check_inhomogeneous_necessary(P, config.bounds, config.mixed)
    return _emit_verdict(args, verdict, certificate_document(verdict, polynomial_input(P)))


def cmd_oracle(args) -> int:
    P = _polynomial(args)
    config = AnalysisConfig().oracle
    if args.action == "forcing":
        N = min_forcing_N(P, args.colors, args.range, config, args.budget_ms)
        _emit(args, {"min_forcing_N": N}, "none" if N is None else str(N))
        return EXIT_OK
    witness = search_avoiding_coloring(P, args.colors, args.range, config, args.budget_ms)
    if witness is None:
        _emit(args, {"witness": None}, f"every {args.colors}-coloring of [1..{args.range}] is forced")
        return EXIT_MISMATCH
    _emit(args, {"witness": witness.classes()}, json.dumps(witness.classes()))
    return EXIT_OK


def cmd_analyze(args) -> int:
    config = analysis_config(args)
    analysis = analyze_input("polynomial", args.poly, config, args.budget_ms)
    _write_certificate(args, analysis.document)
    payload = {"verdict": analysis.verdict.to_json(), "evidence": analysis.evidence, "oracle": analysis.oracle}
    _emit(args, payload, _verdict_text(analysis.verdict))
    return EXIT_MISMATCH if analysis.oracle.get("contradiction") else EXIT_OK


def _schema() -> Dict[str, Any]:
    if SCHEMA_FILE_PATH.exists():
        return read_yaml(SCHEMA_FILE_PATH).to_dict()
    return DEFAULT_SCHEMA


def cmd_batch(args) -> int:
    out = Path(args.out)
    create_directories([out, out / "certificates"], verbose=False)
    config = BatchConfig(
        root_dir=out,
        corpus_path=Path(args.corpus),
        report_file=out / "report.jsonl",
        summary_file=out / "summary.csv",
        metric_file_name=out / "metrics.json",
        certificates_dir=out / "certificates",
        n_jobs=args.n_jobs,
        analysis=analysis_config(args),
    )
    batch = BatchAnalysis(config, _schema())
    report = batch.run(args.budget_ms)
    metrics = batch.save_report(report)
    diff = [
        {"id": r.id, "expected": r.expected.value, "got": r.verdict.status.value, "route": r.verdict.route}
        for r in report if r.matched is False
    ]
    lines = [f"{r.id}: {r.verdict.status.value} ({r.verdict.route})" for r in report]
    lines += [f"MISMATCH {d['id']}: expected {d['expected']}, got {d['got']}" for d in diff]
    lines.append(json.dumps(metrics, sort_keys=True))
    _emit(args, {"metrics": metrics, "mismatches": diff, "report": str(config.report_file)}, "\n".join(lines))
    return EXIT_MISMATCH if metrics["mismatched"] or metrics["oracle_contradictions"] else EXIT_OK


def cmd_verify(args) -> int:
    results = []
    for name in args.files:
        document = load_json(Path(name)).to_dict()
        try:
            valid, problems = verify_certificate(document)
        except CertificateError as e:
            valid, problems = False, [str(e)]
        claim = "functional check" if document.get("status") == VERIFIED_FUNCTIONAL else document.get("status")
        results.append({"file": name, "kind": document.get("kind"), "claim": claim,
                        "valid": valid, "problems": problems})
    lines = [
        f"{r['file']}: " + (f"valid ({r['claim']})" if r["valid"] else "INVALID " + "; ".join(r["problems"]))
        for r in results
    ]
    _emit(args, {"results": results}, "\n".join(lines))
    return EXIT_OK if all(r["valid"] for r in results) else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="radopr", description="Partition regularity of linear systems and polynomial equations.")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--s-max", type=int, default=None, help="largest |s| tried for functional increments")
    parser.add_argument("--d-max", type=int, default=None, help="largest pinned increment")
    parser.add_argument("--q-samples", type=_q_samples, default=None, help="comma-separated q values, each >= 2")
    parser.add_argument("--budget-ms", type=int, default=None, help="wall-clock budget for oracle searches")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def poly_command(name, handler, help_text, certificate=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("poly", help="polynomial or equation, e.g. 'x*z^2 = 4*y'")
        p.add_argument("--vars", default=None, help="comma-separated variable order")
        if certificate:
            p.add_argument("--certificate-out", default=None, help="write the certificate document here")
        p.set_defaults(handler=handler)
        return p

    poly_command("parse", cmd_parse, "parse and print in canonical form")

    p = sub.add_parser("decide-linear", help="Rado's theorem for A x = b")
    p.add_argument("--matrix", required=True, help="JSON rows or @file")
    p.add_argument("--rhs", default=None, help="JSON right-hand side or @file")
    p.add_argument("--infinite", action="store_true", help="decide infinite partition regularity")
    p.add_argument("--certificate-out", default=None)
    p.set_defaults(handler=cmd_decide_linear)

    p = sub.add_parser("decide-mixed", help="equalities with strict and unbounded inequalities")
    p.add_argument("--system", required=True, help='JSON {"A", "d", "strict", "unbounded"} or @file')
    p.add_argument("--certificate-out", default=None)
    p.set_defaults(handler=cmd_decide_mixed)

    p = poly_command("functionals", cmd_functionals, "search upper or lower Rado functionals")
    p.add_argument("--direction", choices=[d.value for d in Direction], default=Direction.UPPER.value)
    p.add_argument("--certificates", default=None, help="directory for one certificate per functional")

    poly_command("maximal-rado", cmd_maximal_rado, "check the maximal Rado condition")

    p = poly_command("certify", cmd_certify, "complete-functional certificate", certificate=True)
    p.add_argument("--target", default="N", help="N or powers:<l>")

    p = poly_command("threevar", cmd_threevar, "three-variable H-form and necessary condition", certificate=True)
    p.add_argument("--over", choices=[d.value for d in Domain], default=Domain.NATURALS.value)

    p = sub.add_parser("oracle", help="brute-force colorings of [1..N]")
    p.add_argument("action", choices=["search", "forcing"])
    p.add_argument("--poly", required=True)
    p.add_argument("--vars", default=None)
    p.add_argument("--colors", type=int, default=2)
    p.add_argument("--range", type=int, default=64, help="N, or N_max for forcing")
    p.set_defaults(handler=cmd_oracle)

    poly_command("analyze", cmd_analyze, "full pipeline with oracle cross-check", certificate=True)

    p = sub.add_parser("batch", help="analyze a JSON lines corpus and diff against expectations")
    p.add_argument("corpus")
    p.add_argument("--out", default="artifacts/batch")
    p.add_argument("--n-jobs", type=int, default=1)
    p.set_defaults(handler=cmd_batch)

    p = sub.add_parser("verify", help="re-validate certificate files")
    p.add_argument("files", nargs="+")
    p.set_defaults(handler=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _route_logs_to_stderr(args.verbose)
    try:
        return args.handler(args)
    except BudgetExceededError as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, RadoError, ValueError, TypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
