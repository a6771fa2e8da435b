"""Centralized logging configuration.

This module provides a consistent logger setup across the package.
It ensures logs are formatted correctly and respect the global log level
defined in `src.config.settings`.
"""

import logging
import sys

from src.config import settings


def setup_logger(name: str) -> logging.Logger:
    """Configures and returns a logger instance.

    Args:
        name (str): The name of the logger, typically __name__ of the module.

    Returns:
        logging.Logger: A configured logger instance.
    """
    logger = logging.getLogger(name)

    # Handlers are attached once; repeated imports must not duplicate output
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stdout)

        # Example: 2026-10-19 10:00:00 - src.solvers.asvrg - INFO - Outer 3/30 ...
        formatter = logging.Formatter(
            "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S"
        )

        handler.setFormatter(formatter)
        logger.addHandler(handler)
        logger.setLevel(settings.log_level.upper())

    return logger


def set_log_level(level: str) -> None:
    """Changes the level of every logger created through `setup_logger`.

    Args:
        level (str): A standard logging level name such as "DEBUG" or "WARNING".
    """
    for name in list(logging.root.manager.loggerDict):
        if name == "src" or name.startswith("src."):
            logger = logging.getLogger(name)
            if logger.handlers:
                logger.setLevel(level.upper())
