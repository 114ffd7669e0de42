import time
from pathlib import Path
from typing import Dict, List, Optional

import mlflow
import pandas as pd
from joblib import Parallel, delayed
from tqdm import tqdm

from src.radopr import logger
from src.radopr.components.analysis import analyze_input
from src.radopr.components.corpus_validation import load_corpus
from src.radopr.entity.config_entity import AnalysisConfig, BatchConfig
from src.radopr.entity.errors import RadoError
from src.radopr.entity.report_entity import CorpusEntry, ReportEntry
from src.radopr.entity.verdict_entity import Status, Verdict
from src.radopr.utils.common import save_json, write_jsonl


def analyze_entry(
    entry: CorpusEntry,
    config: AnalysisConfig,
    certificates_dir: Optional[Path] = None,
    budget_ms: Optional[int] = None,
) -> ReportEntry:
    """Run one corpus entry; engine errors become Unknown verdicts so a batch never stops halfway."""
    started = time.perf_counter()
    try:
        analysis = analyze_input(entry.kind, entry.input, config, budget_ms)
        verdict, evidence, oracle, document = (
            analysis.verdict, analysis.evidence, analysis.oracle, analysis.document
        )
    except (RadoError, ValueError, TypeError) as e:
        logger.exception(e)
        verdict = Verdict.unknown("error", f"{type(e).__name__}: {e}")
        evidence, oracle, document = {}, {}, None
    certificate_path = None
    if document is not None and certificates_dir is not None:
        path = Path(certificates_dir) / f"{entry.id}.json"
        save_json(path=path, data=document)
        certificate_path = str(path)
    return ReportEntry(
        id=entry.id,
        kind=entry.kind,
        input=entry.input,
        verdict=verdict,
        evidence=evidence,
        oracle=oracle,
        certificate_path=certificate_path,
        expected=entry.expected,
        seconds=time.perf_counter() - started,
    )


def batch_metrics(report: List[ReportEntry]) -> Dict[str, int]:
    return {
        "entries": len(report),
        "matched": sum(1 for r in report if r.matched is True),
        "mismatched": sum(1 for r in report if r.matched is False),
        "unknown": sum(1 for r in report if r.verdict.status is Status.UNKNOWN),
        "oracle_contradictions": sum(1 for r in report if r.contradiction),
    }


class BatchAnalysis:
    def __init__(self, config: BatchConfig, schema: dict):
        self.config = config
        self.schema = schema

    def run(self, budget_ms: Optional[int] = None) -> List[ReportEntry]:
        entries = load_corpus(self.config.corpus_path, self.schema)
        logger.info(f"analyzing {len(entries)} corpus entries with n_jobs={self.config.n_jobs}")
        report = Parallel(n_jobs=self.config.n_jobs)(
            delayed(analyze_entry)(entry, self.config.analysis, self.config.certificates_dir, budget_ms)
            for entry in tqdm(entries, desc="corpus", disable=len(entries) < 2)
        )
        return sorted(report, key=lambda r: r.id)

    def save_report(self, report: List[ReportEntry]) -> Dict[str, int]:
        write_jsonl(Path(self.config.report_file), [r.to_json() for r in report])
        columns = ["id", "kind", "status", "route", "expected", "matched", "oracle", "contradiction", "seconds"]
        pd.DataFrame([r.summary_row() for r in report], columns=columns).to_csv(
            self.config.summary_file, index=False
        )
        metrics = batch_metrics(report)
        save_json(path=Path(self.config.metric_file_name), data=metrics)
        for r in report:
            if r.matched is False:
                logger.warning(
                    f"{r.id}: expected {r.expected.value}, got {r.verdict.status.value} ({r.verdict.route})"
                )
        return metrics

    def log_into_mlflow(self, metrics: Dict[str, int]):
        if not self.config.mlflow_uri:
            return
        bounds = self.config.analysis.bounds
        mlflow.set_tracking_uri(self.config.mlflow_uri)
        with mlflow.start_run():
            mlflow.log_params(
                {
                    "s_max": bounds.s_max,
                    "d_max": bounds.d_max,
                    "max_support": bounds.max_support,
                    "max_blocks": bounds.max_blocks,
                    "oracle_colors": self.config.analysis.oracle.colors,
                    "oracle_range": self.config.analysis.oracle.n_range,
                }
            )
            for name, value in metrics.items():
                mlflow.log_metric(name, value)
            mlflow.log_artifact(str(self.config.report_file))
