import logging
from typing import Any

from src.pipeline.pipeline import Pipeline

logger = logging.getLogger(__name__)


class SerialContext:
    """Runs a pipeline in the calling thread."""

    def run(self, pipeline: Pipeline) -> Any:
        logger.debug(f"Running {pipeline!r} serially")
        action = pipeline.action
        return action.combine([action.evaluate(pipeline.stream())])
