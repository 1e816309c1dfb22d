"""Downlink link model: the TTI/PRB resource grid and the CQI rate map.

The rate map is linear (``Settings.BYTES_PER_PRB_PER_CQI`` bytes per CQI step)
rather than a 3GPP MCS table, so every figure can be checked by hand. CQI is
static per UE for a whole run.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

from llm_slice.config.settings import Settings
from llm_slice.errors import ConfigurationError, InvalidCqiError

__all__ = [
    "TtiConfig",
    "LinkState",
    "bytes_per_prb",
    "tti_capacity",
    "drain_ttis",
]

CQI_MIN = 1
CQI_MAX = 15


@dataclass(frozen=True)
class TtiConfig:
    """The PRB grid the MAC allocates over: ``n_prb`` blocks every ``tti_us`` microseconds."""

    tti_us: int = Settings.TTI_US
    n_prb: int = Settings.N_PRB

    def __post_init__(self):
        if self.tti_us <= 0:
            raise ConfigurationError(f"TTI duration must be positive, got {self.tti_us = }")
        if self.n_prb < 1:
            raise ConfigurationError(f"at least one PRB per TTI is needed, got {self.n_prb = }")


@dataclass(frozen=True)
class LinkState:
    ue_id: str
    cqi: int

    def __post_init__(self):
        _check_cqi(self.cqi)

    @property
    def bytes_per_prb(self) -> int:
        return bytes_per_prb(self.cqi)


def _check_cqi(cqi) -> None:
    if isinstance(cqi, bool) or not isinstance(cqi, int) or not CQI_MIN <= cqi <= CQI_MAX:
        raise InvalidCqiError(cqi)


def bytes_per_prb(cqi: int) -> int:
    """Bytes one PRB carries in one TTI at the given channel quality.

    Args:
        cqi (int): channel quality index, 1..15.

    Returns:
        int: 12 x cqi.

    Raises:
        InvalidCqiError: cqi outside 1..15.
    """

    _check_cqi(cqi)
    return Settings.BYTES_PER_PRB_PER_CQI * cqi


def tti_capacity(n_prb: int, cqi: int) -> int:
    """Bytes that ``n_prb`` PRBs carry in one TTI."""

    if n_prb < 0:
        raise ValueError(f"PRB count cannot be negative: {n_prb = }")
    return n_prb * bytes_per_prb(cqi)


def drain_ttis(payload_bytes: int, n_prb: int, cqi: int) -> int:
    """Number of TTIs needed to empty ``payload_bytes`` with ``n_prb`` PRBs per TTI.

    Example:

    .. code-block:: python

        drain_ttis(24000, 100, 10)  # 2
        drain_ttis(1, 100, 10)      # 1
    """

    if payload_bytes < 0:
        raise ValueError(f"payload cannot be negative: {payload_bytes = }")
    if n_prb < 1:
        raise ValueError(f"at least one PRB is needed to drain a payload: {n_prb = }")
    return ceil(payload_bytes / tti_capacity(n_prb, cqi))
