"""Utility modules for lnat."""

from .logging import get_logger, setup_logging
from .streams import ExperimentStreams, as_generator, experiment_streams

__all__ = ["ExperimentStreams", "as_generator", "experiment_streams", "get_logger", "setup_logging"]
