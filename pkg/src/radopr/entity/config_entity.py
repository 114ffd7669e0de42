from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple


# for the functional search engine
@dataclass(frozen=True)
class SearchBounds:
    s_max: int = 6
    d_max: int = 24
    max_support: int = 8
    max_blocks: int = 8


@dataclass(frozen=True)
class MixedSearchConfig:
    max_columns: int = 12


@dataclass(frozen=True)
class MaximalRadoConfig:
    q_samples: Tuple[int, ...] = (2, 3, 4, 5, 7, 16)


@dataclass(frozen=True)
class OracleConfig:
    colors: int = 2
    n_range: int = 64
    budget_nodes: int = 2_000_000
    margin: int = 3
    max_range: int = 1000
    max_colors: int = 4
    max_vars: int = 6


@dataclass(frozen=True)
class CertificationConfig:
    sample_count: int = 3
    kernel_radius: int = 4


@dataclass(frozen=True)
class AnalysisConfig:
    bounds: SearchBounds = field(default_factory=SearchBounds)
    mixed: MixedSearchConfig = field(default_factory=MixedSearchConfig)
    maximal_rado: MaximalRadoConfig = field(default_factory=MaximalRadoConfig)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    certification: CertificationConfig = field(default_factory=CertificationConfig)
    cross_check: bool = True


@dataclass
class CorpusValidationConfig:
    root_dir: Path
    STATUS_FILE: str
    corpus_path: Path
    all_schema: dict


@dataclass
class BatchConfig:
    root_dir: Path
    corpus_path: Path
    report_file: Path
    summary_file: Path
    metric_file_name: Path
    certificates_dir: Path
    n_jobs: int
    analysis: AnalysisConfig
    mlflow_uri: Optional[str] = None
