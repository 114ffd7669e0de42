from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Union

from src.radopr.entity.verdict_entity import Status, Verdict


@dataclass(frozen=True)
class CorpusEntry:
    """One line of a corpus file; ``input`` is polynomial text or a system payload."""

    id: str
    kind: str
    input: Union[str, Dict[str, Any]]
    expected: Optional[Status] = None
    source: str = ""

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "CorpusEntry":
        expected = payload.get("expected")
        return cls(
            id=str(payload["id"]),
            kind=payload["kind"],
            input=payload["input"],
            expected=None if expected is None else Status(expected),
            source=payload.get("source", ""),
        )

    def to_json(self) -> Dict[str, Any]:
        payload = {"id": self.id, "kind": self.kind, "input": self.input, "source": self.source}
        if self.expected is not None:
            payload["expected"] = self.expected.value
        return payload


@dataclass
class ReportEntry:
    id: str
    kind: str
    input: Union[str, Dict[str, Any]]
    verdict: Verdict
    evidence: Dict[str, Any] = field(default_factory=dict)
    oracle: Dict[str, Any] = field(default_factory=dict)
    certificate_path: Optional[str] = None
    expected: Optional[Status] = None
    seconds: float = 0.0

    @property
    def matched(self) -> Optional[bool]:
        if self.expected is None:
            return None
        return self.expected is self.verdict.status

    @property
    def contradiction(self) -> bool:
        return bool(self.oracle.get("contradiction"))

    def to_json(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "kind": self.kind,
            "input": self.input,
            "verdict": self.verdict.to_json(),
            "evidence": self.evidence,
            "oracle": self.oracle,
            "certificate_path": self.certificate_path,
            "expected": None if self.expected is None else self.expected.value,
            "matched": self.matched,
            "seconds": round(self.seconds, 3),
        }

    def summary_row(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "kind": self.kind,
            "status": self.verdict.status.value,
            "route": self.verdict.route,
            "expected": None if self.expected is None else self.expected.value,
            "matched": self.matched,
            "oracle": self.oracle.get("outcome"),
            "contradiction": self.contradiction,
            "seconds": round(self.seconds, 3),
        }
