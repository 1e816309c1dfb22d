"""
Utils
=====

This module provides utility functions for the llm_slice package.

Functions
---------

- threaded_map: Multi-threaded mapping of a function to an iterable.
- search_in_values_to_retrieve_key: search inside every dict value and return the key on match.
- validate_path_exists: Check a target file path and create its parent directories.

Classes
-------

- PrintableEnumMeta: A metaclass for making enum classes printable with the class members.
"""

from llm_slice.utils.parallel import threaded_map
from llm_slice.utils.utils import (
    PrintableEnumMeta,
    search_in_values_to_retrieve_key,
    validate_path_exists,
)

__all__ = [
    # functions
    "search_in_values_to_retrieve_key",
    "threaded_map",
    "validate_path_exists",
    # classes
    "PrintableEnumMeta",
]
