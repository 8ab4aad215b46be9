import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import TextIO

from src.config.schema import LoggingConfig

# Jobs run on pool threads named canonforge_N
LOG_FORMAT = "%(asctime)s [%(levelname)s] %(threadName)s %(name)s:%(lineno)d - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

_QUIET_LOGGERS = ("asyncio",)


def _handler(handler: logging.Handler, level: int) -> logging.Handler:
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
    return handler


def setup_logging(config: LoggingConfig, stream: TextIO | None = None) -> int:
    """Route log records to stderr (results own stdout) and, unless `config.file` is empty,
    to a rotating file. Returns the effective level."""
    level = logging.getLevelNamesMapping().get(config.level.upper(), logging.INFO)

    root = logging.getLogger()
    root.setLevel(level)
    root.handlers.clear()
    root.addHandler(_handler(logging.StreamHandler(stream or sys.stderr), level))

    for name in _QUIET_LOGGERS:
        logging.getLogger(name).setLevel(max(level, logging.WARNING))

    if config.file:
        log_path = Path(config.file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        rotating = RotatingFileHandler(log_path, maxBytes=config.max_bytes, backupCount=config.backup_count)
        root.addHandler(_handler(rotating, level))
    return level
