"""Logging configuration for lnat."""

import logging
import os
import sys
from collections.abc import Mapping
from typing import Literal

LogLevel = Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
LOG_LEVELS: tuple[str, ...] = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def module_logger_name(module: str) -> str:
    """Logger name for a per-module level key.

    ``solvers`` and ``solvers.learners`` are package paths under
    ``lnat.app``; names already under ``lnat`` are kept.
    """
    if module == "lnat" or module.startswith("lnat."):
        return module
    return f"lnat.app.{module}"


def setup_logging(
    level: LogLevel | None = None, module_levels: Mapping[str, str] | None = None
) -> logging.Logger:
    """Configure logging for lnat.

    Args:
        level: Log level to use. If not specified, reads from LOG_LEVEL env var.
        module_levels: Levels for single packages or modules, e.g.
            ``{"solvers": "DEBUG"}``; they override ``level`` below that name.

    Returns:
        The root logger for lnat.

    Raises:
        ValueError: If a module level is not a logging level name.
    """
    level_str: str = level if level is not None else os.environ.get("LOG_LEVEL", "INFO").upper()

    formatter = logging.Formatter(
        fmt="%(asctime)s | %(levelname)-8s | %(name)s | %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )

    # stderr keeps stdout free for `lnat check` reports
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(formatter)

    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, level_str))
    root_logger.handlers.clear()
    root_logger.addHandler(handler)

    logger = logging.getLogger("lnat")
    logger.setLevel(getattr(logging, level_str))

    # Reduce noise from the event loop and worker pool
    logging.getLogger("asyncio").setLevel(logging.WARNING)
    logging.getLogger("concurrent.futures").setLevel(logging.WARNING)

    for module, module_level in (module_levels or {}).items():
        name = module_level.upper()
        if name not in LOG_LEVELS:
            raise ValueError(f"Unknown log level {module_level!r} for {module}")
        logging.getLogger(module_logger_name(module)).setLevel(getattr(logging, name))

    logger.debug("Logging configured with level: %s", level_str)

    return logger


def get_logger(name: str) -> logging.Logger:
    """Get a logger for a specific module.

    Args:
        name: Module name (typically __name__).

    Returns:
        Logger instance under the ``lnat`` namespace.
    """
    if name == "lnat" or name.startswith("lnat."):
        return logging.getLogger(name)
    return logging.getLogger(f"lnat.{name}")
