"""
Logging Configuration Module

This module sets up the centralized logging configuration for the application.
It defines the log format, handler and levels shared by every layer. Log
records always go to stderr so machine-readable output on stdout stays clean.
"""

import logging
import sys
from typing import Union

# Create a logger instance for this module namespace
logger = logging.getLogger(__name__)
logger.setLevel(logging.WARNING)
logger.propagate = False

# Define a standard formatter for log messages
# Format: Time - Level - [File:Line - Function()] - Message
formatter = logging.Formatter(
    r"%(asctime)s - %(levelname)-7s [%(filename)s:%(lineno)s - %(funcName)s()] - %(message)s"
)

handler = logging.StreamHandler(sys.stderr)
handler.setFormatter(formatter)
logger.addHandler(handler)


def setup_logging(level: Union[int, str] = logging.WARNING) -> None:
    """
    Sets the level of the application logger.

    Args:
        level (Union[int, str]): A logging level number or name such as "DEBUG".
    """
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.WARNING
    logger.setLevel(level)
