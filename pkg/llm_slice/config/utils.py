"""This module contains various helper functions and utilities for configuration purposes.

Module Structure:
- get_package_version() -> str: Retrieves the version of the package.
- configure_logging(level: str = None) -> int: sets up stderr diagnostics from LLMSLICE_LOG.
"""

import logging
import os
from importlib.metadata import PackageNotFoundError, version
from typing import Optional

from llm_slice.config.enums import LogLevels
from llm_slice.config.settings import Settings

_LEVELS = {
    LogLevels.OFF.value: logging.CRITICAL + 1,
    LogLevels.INFO.value: logging.INFO,
    LogLevels.DEBUG.value: logging.DEBUG,
}


def get_package_version() -> str:
    """
    Retrieves the version of the 'llm-slice-sim' package.

    Returns:
        str: The version of the package ("0.0.0" when running from a source tree).
    """

    try:
        return version("llm-slice-sim")
    except PackageNotFoundError:
        return "0.0.0"


def configure_logging(level: Optional[str] = None) -> int:
    """
    Route the package's diagnostics to standard error.

    Args:
        level (str, optional): one of "off", "info", "debug". Defaults to the value of
            the LLMSLICE_LOG environment variable, or "off" if it is unset.

    Returns:
        int: the numeric logging level applied to the ``llm_slice`` logger.
    """

    if level is None:
        level = os.environ.get(Settings.LOG_ENV_VAR, LogLevels.OFF.value)
    numeric = _LEVELS.get(level.strip().lower(), _LEVELS[LogLevels.OFF.value])

    logger = logging.getLogger("llm_slice")
    logger.setLevel(numeric)
    if not any(getattr(h, "_llm_slice", False) for h in logger.handlers):
        handler = logging.StreamHandler()  # stderr
        handler.setFormatter(logging.Formatter(Settings.LOG_FORMAT))
        handler._llm_slice = True  # type: ignore
        logger.addHandler(handler)
    logger.propagate = False

    return numeric
