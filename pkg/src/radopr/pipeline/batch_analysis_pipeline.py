from pathlib import Path

from src.radopr.config.configuration import ConfigurationManager
from src.radopr.components.batch_analysis import BatchAnalysis
from src.radopr.entity.errors import RadoError
from src.radopr import logger

STAGE_NAME = "Batch Analysis stage"


class BatchAnalysisPipeline:
    def __init__(self):
        pass

    def initiate_batch_analysis(self):
        config = ConfigurationManager()
        if not Path(config.get_corpus_validation_config().STATUS_FILE).read_text().endswith("True"):
            raise RadoError("corpus validation did not pass; run the corpus validation stage first")
        batch_config = config.get_batch_config()
        batch_analysis = BatchAnalysis(config=batch_config, schema=config.schema.to_dict())
        report = batch_analysis.run()
        metrics = batch_analysis.save_report(report)
        batch_analysis.log_into_mlflow(metrics)
        return metrics


if __name__ == '__main__':
    try:
        logger.info(f">>>>>> stage {STAGE_NAME} started <<<<<<")
        obj = BatchAnalysisPipeline()
        obj.initiate_batch_analysis()
        logger.info(f">>>>>> stage {STAGE_NAME} completed <<<<<<\n\nx==========x")
    except Exception as e:
        logger.exception(e)
        raise e
