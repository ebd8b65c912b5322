"""
Package logger for ribbon-invariants.

Records go to stderr, and to a rotating file when LOG_FILE is set; stdout
carries only command reports.
"""

import logging
import logging.handlers
import sys
from typing import List

from ribbon.config import config

ROOT = "ribbon"


def _configure() -> logging.Logger:
    root = logging.getLogger(ROOT)
    root.setLevel(config.log_level.upper())
    root.handlers.clear()
    root.propagate = False

    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    file_error = None
    if config.log_file:
        try:
            config.log_file.parent.mkdir(parents=True, exist_ok=True)
            handlers.append(
                logging.handlers.RotatingFileHandler(
                    config.log_file, maxBytes=10 * 1024 * 1024, backupCount=5
                )
            )
        except OSError as e:
            file_error = e

    formatter = logging.Formatter("%(asctime)s %(name)s %(levelname)s: %(message)s")
    for handler in handlers:
        handler.setFormatter(formatter)
        root.addHandler(handler)
    if file_error:
        root.warning(f"Could not open log file {config.log_file}: {file_error}")
    return root


_root = _configure()


def get_logger(name: str) -> logging.Logger:
    """Child of the package logger; ``moves`` and ``ribbon.moves`` are the same."""
    if name == ROOT or name.startswith(ROOT + "."):
        return logging.getLogger(name)
    return logging.getLogger(f"{ROOT}.{name}")


def set_level(level: str) -> None:
    _root.setLevel(level.upper())
