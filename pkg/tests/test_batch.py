import json
from pathlib import Path

import pandas as pd
import pytest

from src.radopr.components.analysis import analyze_input
from src.radopr.components.batch_analysis import BatchAnalysis, analyze_entry, batch_metrics
from src.radopr.components.corpus_validation import CorpusValidation, entry_problems, load_corpus
from src.radopr.config.configuration import ConfigurationManager
from src.radopr.entity.config_entity import BatchConfig, CorpusValidationConfig
from src.radopr.entity.errors import CorpusSchemaError
from src.radopr.entity.report_entity import CorpusEntry
from src.radopr.entity.verdict_entity import Status

ENTRIES = [
    {"id": "b-double", "kind": "polynomial", "input": "2*x - y", "expected": "ProvedNotPR"},
    {"id": "a-schur", "kind": "polynomial", "input": "x + y - z", "expected": "ProvedPR"},
    {"id": "c-mixed", "kind": "mixed", "input": {"A": [["1", "1", "-1"]], "d": ["0"],
                                                 "unbounded": [["-1", "0", "1"]]}},
]


def _write(path: Path, records) -> Path:
    path.write_text("".join(json.dumps(r) + "\n" for r in records))
    return path


@pytest.fixture
def batch_config(tmp_path, small_config):
    (tmp_path / "certificates").mkdir()
    return BatchConfig(
        root_dir=tmp_path,
        corpus_path=_write(tmp_path / "corpus.jsonl", ENTRIES),
        report_file=tmp_path / "report.jsonl",
        summary_file=tmp_path / "summary.csv",
        metric_file_name=tmp_path / "metrics.json",
        certificates_dir=tmp_path / "certificates",
        n_jobs=1,
        analysis=small_config,
    )


def test_entry_problems(schema):
    assert entry_problems(ENTRIES[0], schema) == []
    problems = entry_problems({"id": 7, "kind": "tensor", "input": "x", "colour": 1}, schema)
    assert "unknown field 'colour'" in problems
    assert "field 'id' is not of type str" in problems
    assert any(p.startswith("kind 'tensor'") for p in problems)
    assert entry_problems({"id": "p", "kind": "linear", "input": "x"}, schema) == [
        "linear input must be a dict"
    ]


def test_load_corpus_rejects_bad_entries(tmp_path, schema):
    duplicated = _write(tmp_path / "dup.jsonl", [ENTRIES[0], ENTRIES[0]])
    with pytest.raises(CorpusSchemaError, match="duplicate id"):
        load_corpus(duplicated, schema)
    bad_verdict = _write(tmp_path / "bad.jsonl", [dict(ENTRIES[0], expected="Maybe")])
    with pytest.raises(CorpusSchemaError, match="bad.jsonl:1"):
        load_corpus(bad_verdict, schema)
    with pytest.raises(FileNotFoundError):
        load_corpus(tmp_path / "missing.jsonl", schema)


def test_corpus_validation_writes_status(tmp_path, schema):
    status = tmp_path / "status.txt"
    config = CorpusValidationConfig(tmp_path, str(status), _write(tmp_path / "ok.jsonl", ENTRIES), schema)
    assert CorpusValidation(config).validate_all_entries()
    assert status.read_text() == "Validation status: True"

    config.corpus_path = _write(tmp_path / "broken.jsonl", [{"id": "x"}])
    assert not CorpusValidation(config).validate_all_entries()
    assert status.read_text() == "Validation status: False"


def test_shipped_corpus_is_valid(schema):
    entries = load_corpus(Path("corpus/paper_examples.jsonl"), schema)
    assert len({e.id for e in entries}) == len(entries)
    assert all(e.expected is not None for e in entries)


def test_engine_errors_become_unknown(small_config):
    entry = CorpusEntry("zero", "polynomial", "x - x", Status.UNKNOWN)
    report = analyze_entry(entry, small_config)
    assert report.verdict.status is Status.UNKNOWN
    assert report.verdict.route == "error"
    assert report.matched is True


def test_non_numeric_cells_become_unknown(small_config):
    entry = CorpusEntry("words", "linear", {"A": [["one", "1", "-1"]]}, Status.PROVED_PR)
    report = analyze_entry(entry, small_config)
    assert report.verdict.status is Status.UNKNOWN
    assert report.verdict.route == "error"
    assert report.verdict.reason.startswith("ValueError")
    assert report.matched is False


def test_batch_run_and_report(batch_config, schema):
    batch = BatchAnalysis(batch_config, schema)
    report = batch.run()
    assert [r.id for r in report] == ["a-schur", "b-double", "c-mixed"]
    assert [r.matched for r in report] == [True, True, None]

    metrics = batch.save_report(report)
    assert metrics == batch_metrics(report)
    assert metrics["matched"] == 2
    assert metrics["oracle_contradictions"] == 0

    lines = batch_config.report_file.read_text().splitlines()
    assert json.loads(lines[0])["verdict"]["status"] == "ProvedPR"
    summary = pd.read_csv(batch_config.summary_file)
    assert list(summary["id"]) == ["a-schur", "b-double", "c-mixed"]
    assert sorted(p.name for p in batch_config.certificates_dir.iterdir()) == ["a-schur.json", "c-mixed.json"]


def test_mlflow_is_skipped_without_uri(batch_config, schema):
    BatchAnalysis(batch_config, schema).log_into_mlflow({"entries": 0})


def test_configuration_manager_reads_params():
    config = ConfigurationManager().get_analysis_config()
    assert config.bounds.s_max == 6
    assert config.oracle.n_range == 64
    assert config.maximal_rado.q_samples == (2, 3, 4, 5, 7, 16)
    assert config.cross_check is True


def test_shipped_corpus_matches_its_expectations(schema, small_config):
    entries = load_corpus(Path("corpus/paper_examples.jsonl"), schema)
    assert len(entries) == 12
    for entry in entries:
        analysis = analyze_input(entry.kind, entry.input, small_config)
        assert analysis.verdict.status is entry.expected, entry.id
        assert not analysis.oracle.get("contradiction"), entry.id


def test_batch_survives_a_malformed_entry(batch_config, schema):
    records = ENTRIES + [{"id": "d-words", "kind": "linear", "input": {"A": [["one", "1", "-1"]]}}]
    batch_config.corpus_path = _write(batch_config.root_dir / "corpus.jsonl", records)
    report = BatchAnalysis(batch_config, schema).run()
    assert [r.id for r in report] == ["a-schur", "b-double", "c-mixed", "d-words"]
    assert report[-1].verdict.route == "error"
