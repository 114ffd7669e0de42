from pathlib import Path
from typing import Any, Dict, List

from src.radopr import logger
from src.radopr.entity.config_entity import CorpusValidationConfig
from src.radopr.entity.errors import CorpusSchemaError
from src.radopr.entity.report_entity import CorpusEntry
from src.radopr.utils.common import read_jsonl

# what each schema type name accepts
TYPE_CHECKS = {
    "str": lambda v: isinstance(v, str),
    "any": lambda v: v is not None,
}

INPUT_TYPES = {"polynomial": str, "linear": dict, "mixed": dict}


def entry_problems(record: Dict[str, Any], schema: Dict[str, Any]) -> List[str]:
    problems = []
    fields = schema["FIELDS"]
    for name in schema["REQUIRED"]:
        if name not in record:
            problems.append(f"missing field {name!r}")
    for name, value in record.items():
        if name not in fields:
            problems.append(f"unknown field {name!r}")
        elif not TYPE_CHECKS[fields[name]](value):
            problems.append(f"field {name!r} is not of type {fields[name]}")
    kind = record.get("kind")
    if kind is not None and kind not in schema["KINDS"]:
        problems.append(f"kind {kind!r} not in {schema['KINDS']}")
    elif kind in INPUT_TYPES and "input" in record and not isinstance(record["input"], INPUT_TYPES[kind]):
        problems.append(f"{kind} input must be a {INPUT_TYPES[kind].__name__}")
    expected = record.get("expected")
    if expected is not None and expected not in schema["VERDICTS"]:
        problems.append(f"expected verdict {expected!r} not in {schema['VERDICTS']}")
    return problems


def load_corpus(path: Path, schema: Dict[str, Any]) -> List[CorpusEntry]:
    """Read and validate a JSON lines corpus; raises CorpusSchemaError naming the entry."""
    if not Path(path).exists():
        raise FileNotFoundError(f"corpus file not found: {path}")
    records = read_jsonl(Path(path))
    seen = set()
    entries = []
    for number, record in enumerate(records, start=1):
        if not isinstance(record, dict):
            raise CorpusSchemaError(f"{path}:{number}: entry is not an object")
        problems = entry_problems(record, schema)
        if record.get("id") in seen:
            problems.append(f"duplicate id {record['id']!r}")
        if problems:
            raise CorpusSchemaError(f"{path}:{number} ({record.get('id')}): {'; '.join(problems)}")
        seen.add(record["id"])
        entries.append(CorpusEntry.from_json(record))
    return entries


class CorpusValidation:
    def __init__(self, config: CorpusValidationConfig):
        self.config = config

    def validate_all_entries(self) -> bool:
        try:
            entries = load_corpus(self.config.corpus_path, self.config.all_schema)
            validation_status = True
            logger.info(f"{len(entries)} corpus entries match the schema")
        except CorpusSchemaError as e:
            validation_status = False
            logger.error(str(e))

        with open(self.config.STATUS_FILE, 'w') as f:
            f.write(f"Validation status: {validation_status}")

        return validation_status
