"""Named, independently seeded random streams.

Each stream is seeded from ``(master_seed, sha256(name))`` through
``numpy.random.SeedSequence``, so a new draw added to one stream never shifts the
numbers another stream produces.
"""

from __future__ import annotations

import hashlib

import numpy as np

__all__ = [
    "RngStream",
    "name_to_entropy",
]


def name_to_entropy(name: str) -> int:
    """First 8 bytes of sha256(name) as an unsigned integer."""

    return int.from_bytes(hashlib.sha256(name.encode("utf-8")).digest()[:8], "big")


class RngStream:
    """A labelled random generator derived from a master seed.

    Args:
        master_seed (int): the run's seed.
        name (str): purpose label such as "arrivals/ue1/llama" or "responses".

    Example:

    .. code-block:: python

        a = RngStream(7, "responses")
        b = RngStream(7, "responses")
        assert a.normal(0.0, 1.0) == b.normal(0.0, 1.0)
    """

    def __init__(self, master_seed: int, name: str) -> None:
        if master_seed < 0:
            raise ValueError(f"seeds must be non-negative, got {master_seed = }")
        self.master_seed = int(master_seed)
        self.name = name
        self.generator = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([self.master_seed, name_to_entropy(name)]))
        )

    def exponential(self, scale: float) -> float:
        return float(self.generator.exponential(scale))

    def normal(self, loc: float, scale: float) -> float:
        return float(self.generator.normal(loc, scale))

    def random(self) -> float:
        return float(self.generator.random())

    def __repr__(self) -> str:
        return f"RngStream(master_seed={self.master_seed}, name={self.name!r})"
