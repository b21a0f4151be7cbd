"""Logging configuration for raagscl.

Every record goes to a rotating file in the config directory; warnings and
errors are echoed to stderr as well.
"""

import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path

from raagscl.config import get_config_dir

_logger: logging.Logger | None = None

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(message)s"
CONSOLE_FORMAT = "raagscl: %(levelname)s: %(message)s"


class StderrHandler(logging.StreamHandler):
    """Stream handler bound to the current ``sys.stderr`` at emit time.

    The logger is created once per process, so holding on to the stream seen
    at creation would write into a replaced stream later on.
    """

    @property  # type: ignore[override]
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, _value) -> None:
        pass


def get_log_path() -> Path:
    """Return path to log file."""
    return get_config_dir() / "raagscl.log"


def setup_logger() -> logging.Logger:
    """Set up and return the raagscl logger.

    Creates a rotating file handler (1MB max, 3 backups) at DEBUG and a
    stderr handler at WARNING.

    Returns:
        Configured logger instance
    """
    global _logger
    if _logger is not None:
        return _logger

    _logger = logging.getLogger("raagscl")
    _logger.setLevel(logging.DEBUG)

    log_path = get_log_path()
    log_path.parent.mkdir(parents=True, exist_ok=True)

    file_handler = RotatingFileHandler(log_path, maxBytes=1_000_000, backupCount=3)
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt="%Y-%m-%d %H:%M:%S"))
    _logger.addHandler(file_handler)

    console = StderrHandler()
    console.setLevel(logging.WARNING)
    console.setFormatter(logging.Formatter(CONSOLE_FORMAT))
    _logger.addHandler(console)

    return _logger
