"""Module for locating the assets bundled with the llm_slice package,
such as the canonical scenarios and their permission databases.
"""

__all__ = [
    "Assets",
]

import os
import re
from os.path import abspath, dirname, exists, isdir, join
from typing import List


class Assets:
    """
    Static class for locating bundled scenario files.

    Attributes:
        ROOT_DIR (str): Directory that holds the bundled scenarios. Defaults to 'install_directory/llm_slice/config/scenarios'.

    Methods:
        set_root_dir(path: str) -> None:
            Point the asset lookup at another directory of scenario files.

        get_ids(filename_or_regex: str) -> List[str]:
            Names of the assets matching the given filename or regex.

        get_path(filename_or_regex: str) -> List[str]:
            Absolute paths of the assets matching the given filename or regex.

    Example:

    .. code-block:: python

        from llm_slice.config.assets import Assets

        path = Assets.get_path("tab1.json")[0]
        print(Assets.get_ids(r".*\\.csv"))
    """

    ROOT_DIR: str = join(dirname(abspath(__file__)), "scenarios")
    """The directory where the bundled scenarios are stored."""

    @classmethod
    def set_root_dir(cls, path: str) -> None:
        """Set the scenario assets directory path.

        Args:
            path (str): The path to a directory of scenario files.

        Raises:
            ValueError: If the provided path is not a directory.
        """

        path = abspath(path)
        if not (exists(path) and isdir(path)):
            raise ValueError(f"The provided path is not a directory. Path: {path}")

        cls.ROOT_DIR = path

    @classmethod
    def get_ids(cls, filename_or_regex: str) -> List[str]:
        """Filenames inside ROOT_DIR that equal or fully match the argument, sorted."""

        names = sorted(os.listdir(cls.ROOT_DIR))
        if filename_or_regex in names:
            return [filename_or_regex]

        try:
            pattern = re.compile(filename_or_regex)
        except re.error:
            return []
        return [name for name in names if pattern.fullmatch(name)]

    @classmethod
    def get_path(cls, filename_or_regex: str) -> List[str]:
        """Absolute paths of the bundled assets matching the argument."""

        return [join(cls.ROOT_DIR, name) for name in cls.get_ids(filename_or_regex)]
