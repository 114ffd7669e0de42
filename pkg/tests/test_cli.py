import json

import pytest

from src.radopr import cli
from src.radopr.constants import EXIT_BUDGET, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE
from src.radopr.entity.errors import BudgetExceededError


def test_parse_prints_canonical_form(capsys):
    assert cli.main(["parse", "x*z^2 = 4*y"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "x*z^2 - 4*y"


def test_parse_json(capsys):
    assert cli.main(["--json", "parse", "x + y - z"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["homogeneous"] is True
    assert payload["degree"] == 1


def test_decide_linear(capsys):
    assert cli.main(["--json", "decide-linear", "--matrix", "[[1, 1, -1]]"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["status"] == "ProvedPR"
    assert cli.main(["decide-linear", "--matrix", "[[2, -1]]"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("ProvedNotPR")


def test_decide_mixed_from_file(tmp_path, capsys):
    system = tmp_path / "system.json"
    system.write_text(json.dumps({"A": [[1, 1, -1]], "d": [0], "unbounded": [[1, 0, -1]]}))
    assert cli.main(["decide-mixed", "--system", f"@{system}"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("ProvedNotPR (mixed-unbounded)")


@pytest.mark.parametrize(
    "argv",
    [
        ["parse", "x +"],
        ["decide-linear", "--matrix", "not json"],
        ["decide-linear", "--matrix", "[[1, 2], [3]]"],
        ["certify", "x*z^2 - 4*y", "--target", "Z"],
    ],
)
def test_usage_errors(argv):
    assert cli.main(argv) == EXIT_USAGE


def test_unknown_subcommand():
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == EXIT_USAGE


def test_bad_q_samples():
    with pytest.raises(SystemExit) as exc:
        cli.main(["--q-samples", "1,2", "maximal-rado", "x + y - z"])
    assert exc.value.code == EXIT_USAGE


def test_oracle_search(capsys):
    assert cli.main(["oracle", "search", "--poly", "x + y - z", "--range", "4"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out) == [[1, 4], [2, 3]]
    assert cli.main(["oracle", "search", "--poly", "x + y - z", "--range", "5"]) == EXIT_MISMATCH


def test_oracle_forcing(capsys):
    assert cli.main(["oracle", "forcing", "--poly", "x + y - z", "--range", "8"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "5"


def test_budget_exit_code(monkeypatch):
    def exhausted(*args, **kwargs):
        raise BudgetExceededError("coloring search exceeded 1 nodes")

    monkeypatch.setattr(cli, "search_avoiding_coloring", exhausted)
    assert cli.main(["oracle", "search", "--poly", "x + y - z"]) == EXIT_BUDGET


def test_threevar_certificate_verifies(tmp_path, capsys):
    out = tmp_path / "hform.json"
    assert cli.main(["threevar", "x*z^2 - 4*y", "--certificate-out", str(out)]) == EXIT_OK
    assert capsys.readouterr().out.startswith("ProvedPR (threevar-hform)")
    assert cli.main(["verify", str(out)]) == EXIT_OK

    document = json.loads(out.read_text())
    document["certificate"]["l"] = 3
    out.write_text(json.dumps(document))
    assert cli.main(["verify", str(out)]) == EXIT_MISMATCH


def test_certify_and_functionals(tmp_path, capsys):
    out = tmp_path / "certificate.json"
    assert cli.main(["certify", "x*z^2 - 4*y", "--certificate-out", str(out)]) == EXIT_OK
    assert capsys.readouterr().out.startswith("ProvedPR (complete-functional)")
    assert cli.main(["verify", str(out)]) == EXIT_OK

    folder = tmp_path / "functionals"
    assert cli.main(["functionals", "x*z^2 - 4*y", "--certificates", str(folder)]) == EXIT_OK
    files = sorted(str(p) for p in folder.iterdir())
    assert files
    capsys.readouterr()
    assert cli.main(["verify", *files]) == EXIT_OK
    assert all(line.endswith("valid (functional check)") for line in capsys.readouterr().out.splitlines())


def test_maximal_rado_text(capsys):
    assert cli.main(["maximal-rado", "x + y - 3*z"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("Fails at q=2")


def test_analyze(capsys):
    assert cli.main(["--json", "analyze", "x*z^2 - 8*y"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["verdict"]["status"] == "ProvedNotPR"
    assert payload["oracle"]["contradiction"] is False


def test_batch_command(tmp_path, capsys):
    corpus = tmp_path / "corpus.jsonl"
    corpus.write_text(
        json.dumps({"id": "schur", "kind": "polynomial", "input": "x + y - z", "expected": "ProvedPR"}) + "\n"
        + json.dumps({"id": "double", "kind": "polynomial", "input": "2*x - y", "expected": "ProvedPR"}) + "\n"
    )
    out = tmp_path / "out"
    assert cli.main(["batch", str(corpus), "--out", str(out)]) == EXIT_MISMATCH
    assert "MISMATCH double: expected ProvedPR, got ProvedNotPR" in capsys.readouterr().out
    assert (out / "report.jsonl").exists()
    assert (out / "certificates" / "schur.json").exists()
