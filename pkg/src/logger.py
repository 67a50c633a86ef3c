import logging
import os
import sys
from .config import LOG_LEVEL, LOG_FORMAT, LOG_DIR

_registered = []


def setup_logger(name: str):
    """
    Configures and returns a logger instance with stderr output and,
    when D4_LOG_DIR is set, a per-module log file.
    """
    logger = logging.getLogger(name)
    logger.setLevel(LOG_LEVEL)

    # Avoid adding handlers multiple times if logger already exists
    if not logger.handlers:
        # stdout carries the reports
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(LOG_LEVEL)
        console_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(console_handler)

        if LOG_DIR:
            if not os.path.exists(LOG_DIR):
                os.makedirs(LOG_DIR)
            file_path = os.path.join(LOG_DIR, f"{name}.log")
            file_handler = logging.FileHandler(file_path, encoding='utf-8')
            file_handler.setLevel(LOG_LEVEL)
            file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
            logger.addHandler(file_handler)

        logger.propagate = False
        _registered.append(name)

    return logger


def set_verbosity(level: int):
    """Applies `level` to every logger created through setup_logger."""
    for name in _registered:
        logger = logging.getLogger(name)
        logger.setLevel(level)
        for handler in logger.handlers:
            handler.setLevel(level)
