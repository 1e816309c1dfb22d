"""Quota vectors and their conversion into integer PRB partitions."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import floor
from typing import Dict, Mapping

from llm_slice.config.settings import Settings
from llm_slice.errors import InvalidQuotaError

__all__ = [
    "QuotaVector",
    "partition_prbs",
]

_EPS = 1e-9


@dataclass(frozen=True)
class QuotaVector:
    """Fraction of the PRB grid owned by each slice.

    Each share lies in [0, 1] and the shares sum to at most 1 (+1e-9).
    """

    entries: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for slice_id, share in self.entries.items():
            if not -Settings.SHARE_TOLERANCE <= share <= 1 + Settings.SHARE_TOLERANCE:
                raise InvalidQuotaError(f"share of {slice_id!r} outside [0, 1]: {share}")
        total = sum(self.entries.values())
        if total > 1 + Settings.SHARE_TOLERANCE:
            raise InvalidQuotaError(f"quota shares sum to {total:.12g} > 1")

    @property
    def total(self) -> float:
        return sum(self.entries.values())

    def get(self, slice_id: str, default: float = 0.0) -> float:
        return self.entries.get(slice_id, default)

    def as_dict(self) -> Dict[str, float]:
        return {k: self.entries[k] for k in sorted(self.entries)}


def partition_prbs(quota: QuotaVector, n_prb: int) -> Dict[str, int]:
    """Split ``n_prb`` PRBs by quota using largest-remainder rounding.

    Every slice gets ``floor(share * n_prb)``; the PRBs left up to
    ``floor(sum(shares) * n_prb)`` go one each to the largest fractional remainders,
    ties broken by ascending slice_id.

    Example:

    .. code-block:: python

        partition_prbs(QuotaVector({"a": 1/3, "b": 1/3, "c": 1/3}), 100)
        # {'a': 34, 'b': 33, 'c': 33}

    Raises:
        InvalidQuotaError: shares sum above 1.
    """

    if not isinstance(quota, QuotaVector):
        quota = QuotaVector(dict(quota))

    raw = {slice_id: share * n_prb for slice_id, share in quota.entries.items()}
    counts = {slice_id: max(0, floor(value + _EPS)) for slice_id, value in raw.items()}
    target = min(n_prb, floor(sum(raw.values()) + _EPS))
    extra = target - sum(counts.values())

    if extra > 0:
        by_remainder = sorted(
            raw, key=lambda s: (-round(max(raw[s] - counts[s], 0.0), 9), s)
        )
        for slice_id in by_remainder[:extra]:
            counts[slice_id] += 1

    return {slice_id: counts[slice_id] for slice_id in sorted(counts)}
