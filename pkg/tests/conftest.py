import logging
import sys

import pytest

from src.radopr.components.polyalg import parse_polynomial
from src.radopr.entity.config_entity import AnalysisConfig, OracleConfig


@pytest.fixture(autouse=True)
def _reset_log_streams():
    # cli.main re-points root StreamHandlers at the current sys.stderr, which
    # under capsys is a per-test buffer closed at teardown; start each test clean
    for handler in logging.getLogger().handlers:
        if isinstance(handler, logging.StreamHandler) and not isinstance(handler, logging.FileHandler):
            handler.stream = sys.__stderr__
    yield


@pytest.fixture
def schur():
    return parse_polynomial("x + y - z")


@pytest.fixture
def small_config():
    # keeps the brute-force side of end-to-end tests fast
    return AnalysisConfig(oracle=OracleConfig(colors=2, n_range=20))


@pytest.fixture
def schema():
    return {
        "FIELDS": {"id": "str", "kind": "str", "input": "any", "expected": "str", "source": "str"},
        "REQUIRED": ["id", "kind", "input"],
        "VERDICTS": ["ProvedPR", "ProvedNotPR", "Unknown"],
        "KINDS": ["polynomial", "linear", "mixed"],
    }
