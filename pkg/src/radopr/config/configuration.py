from pathlib import Path

from src.radopr.constants import *
from src.radopr.utils.common import read_yaml, create_directories

from src.radopr.entity.config_entity import (AnalysisConfig, BatchConfig,
                                             CertificationConfig, CorpusValidationConfig,
                                             MaximalRadoConfig, MixedSearchConfig,
                                             OracleConfig, SearchBounds)


class ConfigurationManager:
    def __init__(self,
                 config_filepath=CONFIG_FILE_PATH,
                 params_filepath=PARAMS_FILE_PATH,
                 schema_filepath=SCHEMA_FILE_PATH):
        self.config = read_yaml(Path(config_filepath))
        self.params = read_yaml(Path(params_filepath))
        self.schema = read_yaml(Path(schema_filepath))

        create_directories([self.config.artifacts_root])

    def get_search_bounds(self) -> SearchBounds:
        params = self.params.FunctionalSearch
        return SearchBounds(
            s_max=params.s_max,
            d_max=params.d_max,
            max_support=params.max_support,
            max_blocks=params.max_blocks,
        )

    def get_mixed_search_config(self) -> MixedSearchConfig:
        return MixedSearchConfig(max_columns=self.params.MixedSearch.max_columns)

    def get_maximal_rado_config(self) -> MaximalRadoConfig:
        return MaximalRadoConfig(q_samples=tuple(self.params.MaximalRado.q_samples))

    def get_oracle_config(self) -> OracleConfig:
        params = self.params.Oracle
        return OracleConfig(
            colors=params.colors,
            n_range=params.range,
            budget_nodes=params.budget_nodes,
            margin=params.margin,
            max_range=params.max_range,
            max_colors=params.max_colors,
            max_vars=params.max_vars,
        )

    def get_certification_config(self) -> CertificationConfig:
        params = self.params.Certification
        return CertificationConfig(
            sample_count=params.sample_count,
            kernel_radius=params.kernel_radius,
        )

    def get_analysis_config(self) -> AnalysisConfig:
        return AnalysisConfig(
            bounds=self.get_search_bounds(),
            mixed=self.get_mixed_search_config(),
            maximal_rado=self.get_maximal_rado_config(),
            oracle=self.get_oracle_config(),
            certification=self.get_certification_config(),
            cross_check=self.params.Batch.cross_check,
        )

    def get_corpus_validation_config(self) -> CorpusValidationConfig:
        config = self.config.corpus_validation

        create_directories([config.root_dir])

        corpus_validation_config = CorpusValidationConfig(
            root_dir=Path(config.root_dir),
            STATUS_FILE=config.STATUS_FILE,
            corpus_path=Path(config.corpus_path),
            all_schema=self.schema.to_dict(),
        )

        return corpus_validation_config

    def get_batch_config(self) -> BatchConfig:
        config = self.config.batch

        create_directories([config.root_dir, config.certificates_dir])

        batch_config = BatchConfig(
            root_dir=Path(config.root_dir),
            corpus_path=Path(config.corpus_path),
            report_file=Path(config.report_file),
            summary_file=Path(config.summary_file),
            metric_file_name=Path(config.metric_file_name),
            certificates_dir=Path(config.certificates_dir),
            n_jobs=self.params.Batch.n_jobs,
            analysis=self.get_analysis_config(),
            mlflow_uri=config.get("mlflow_uri"),
        )

        return batch_config
