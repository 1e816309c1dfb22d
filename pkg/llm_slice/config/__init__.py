"""This module provides access to configuration components of the llm_slice package.

Contents:
- Assets: Class to locate the scenarios bundled with the package.
- enums: Defines enumerations of string constants used in the package.
- settings: Contains default constants of the simulator.
- utils: Contains helper functions for configuration of the package (logging, version).
- scenario: Scenario documents (import ``llm_slice.config.scenario`` directly).
"""

from llm_slice.config import enums, utils
from llm_slice.config.assets import Assets
from llm_slice.config.settings import Settings

__all__ = [
    # classes
    "Assets",
    "Settings",
    # modules
    "enums",
    "utils",
]
