"""Logging for the wsat package.

Every module takes ``logger = get_logger(__name__)``; handlers live on the
package logger only, and write to stderr so that stdout stays free for JSON
reports and the MCP stdio transport.
"""

import logging
import os
import sys
from pathlib import Path
from typing import Any

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

PACKAGE_LOGGER = "src"


def _level(level: str | int) -> int:
    if isinstance(level, int):
        return level
    value = logging.getLevelName(level.upper())
    if not isinstance(value, int):
        raise ValueError(f"unknown log level: {level}")
    return value


def _attach(logger: logging.Logger, handler: logging.Handler) -> None:
    handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
    logger.addHandler(handler)


def setup_logger(
    name: str,
    level: str | int = "INFO",
    log_file: Path | None = None,
    console: bool = True,
) -> logging.Logger:
    """
    Create a logger with a stderr handler and an optional file handler.

    A logger that already has handlers is returned untouched, level included.

    Args:
        name: Logger name (the package logger, or __name__ of a module)
        level: Level name or number
        log_file: Also append to this file; parent directories are created
        console: Whether to write to stderr

    Returns:
        The configured logger
    """
    logger = logging.getLogger(name)
    if logger.handlers:
        return logger

    logger.setLevel(_level(level))
    if console:
        _attach(logger, logging.StreamHandler(sys.stderr))
    if log_file is not None:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        _attach(logger, logging.FileHandler(log_file))
    return logger


def configure_from_env(verbose: bool = False) -> logging.Logger:
    """Configure the package logger from LOG_LEVEL / LOG_FILE.

    ``verbose`` forces DEBUG regardless of LOG_LEVEL. Called again, it
    re-applies the level but keeps the existing handlers.
    """
    level = "DEBUG" if verbose else os.getenv("LOG_LEVEL", "WARNING")
    log_file = os.getenv("LOG_FILE")
    logger = setup_logger(
        PACKAGE_LOGGER, level=level, log_file=Path(log_file) if log_file else None
    )
    logger.setLevel(_level(level))
    return logger


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)


class LoggerAdapter:
    """Run a block with a logger at another level, then restore it.

    Corpus sweeps use it to quiet the per-instance INFO lines of the
    search modules.
    """

    def __init__(self, logger: logging.Logger, level: str | int):
        self.logger = logger
        self.level = _level(level)
        self._saved: int | None = None

    def __enter__(self) -> logging.Logger:
        self._saved = self.logger.level
        self.logger.setLevel(self.level)
        return self.logger

    def __exit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> None:
        if self._saved is not None:
            self.logger.setLevel(self._saved)
            self._saved = None
