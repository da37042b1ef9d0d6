"""
Application Configuration Module

This module defines the configuration settings for the application, including
the on-disk polynomial cache, the enumeration resource guard, worker counts
and the fixed constants used by the verification harness.

Values can be overridden through environment variables (optionally loaded
from a `.env` file in the project root).
"""

import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

# Resolve the project root directory
# config.py is in spk_app/, so parent -> spk_app, parent.parent -> root
BASE_DIR = Path(__file__).resolve().parent.parent

load_dotenv(BASE_DIR / ".env")

# Version stamped on every JSON record written by the command line
SCHEMA_VERSION = 1

# Largest number of objects an exhaustive enumeration may visit
DEFAULT_RESOURCE_GUARD = 21_000_000

# Truncation order of the generating-function identity check for C_n(x)
CARLITZ_ORDER = 15

# Number of rational evaluation points used by point-based identity checks
EVALUATION_POINT_COUNT = 25


def _env_int(name: str, default: int) -> int:
    """
    Reads an integer environment variable, falling back to a default.

    Args:
        name (str): Environment variable name.
        default (int): Value used when the variable is unset or empty.

    Returns:
        int: The parsed value.
    """
    raw = os.environ.get(name, "").strip()
    return int(raw) if raw else default


def _env_path(name: str) -> Optional[Path]:
    raw = os.environ.get(name, "").strip()
    return Path(raw) if raw else None


class Config:
    """
    Application Configuration Class.
    """
    CACHE_DIR: Optional[Path] = _env_path("SPK_CACHE_DIR")
    RESOURCE_GUARD: int = _env_int("SPK_RESOURCE_GUARD", DEFAULT_RESOURCE_GUARD)
    JOBS: int = _env_int("SPK_JOBS", 1)
    LOG_LEVEL: str = os.environ.get("SPK_LOG_LEVEL", "WARNING").upper()
