from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple


class Status(str, Enum):
    PROVED_PR = "ProvedPR"
    PROVED_NOT_PR = "ProvedNotPR"
    UNKNOWN = "Unknown"


class ConditionStatus(str, Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ColumnsCertificate:
    """Ordered partition (I_0, ..., I_r) of column indices (0-based)."""

    blocks: Tuple[Tuple[int, ...], ...]

    @classmethod
    def of(cls, blocks: Sequence[Sequence[int]]) -> "ColumnsCertificate":
        return cls(tuple(tuple(sorted(b)) for b in blocks))

    def columns(self) -> List[int]:
        return sorted(c for b in self.blocks for c in b)

    def to_json(self) -> Dict[str, Any]:
        return {"blocks": [list(b) for b in self.blocks]}

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "ColumnsCertificate":
        return cls.of(payload["blocks"])


@dataclass(frozen=True)
class Verdict:
    """Three-valued answer; ``certificate`` is a JSON-ready witness payload."""

    status: Status
    route: str
    certificate: Dict[str, Any] = field(default_factory=dict)
    reason: str = ""

    @classmethod
    def proved_pr(cls, route: str, certificate: Dict[str, Any], reason: str = "") -> "Verdict":
        return cls(Status.PROVED_PR, route, certificate, reason)

    @classmethod
    def proved_not_pr(cls, route: str, certificate: Dict[str, Any], reason: str = "") -> "Verdict":
        return cls(Status.PROVED_NOT_PR, route, certificate, reason)

    @classmethod
    def unknown(cls, route: str, reason: str, certificate: Optional[Dict[str, Any]] = None) -> "Verdict":
        return cls(Status.UNKNOWN, route, certificate or {}, reason)

    @property
    def is_pr(self) -> bool:
        return self.status is Status.PROVED_PR

    @property
    def is_not_pr(self) -> bool:
        return self.status is Status.PROVED_NOT_PR

    @property
    def is_unknown(self) -> bool:
        return self.status is Status.UNKNOWN

    def to_json(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "route": self.route,
            "reason": self.reason,
            "certificate": self.certificate,
        }

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "Verdict":
        return cls(
            Status(payload["status"]),
            payload.get("route", ""),
            dict(payload.get("certificate", {})),
            payload.get("reason", ""),
        )


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of a necessary-condition check such as the maximal Rado condition."""

    status: ConditionStatus
    witness_q: Optional[int] = None
    details: Dict[str, Any] = field(default_factory=dict)
    reason: str = ""

    def to_json(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "witness_q": self.witness_q,
            "reason": self.reason,
            "details": self.details,
        }
