"""
llm_slice.radio
===============

Downlink link model: the PRB grid and the CQI to bytes-per-PRB rate map.

Classes:
- TtiConfig: TTI duration and PRBs per TTI.
- LinkState: static channel quality of one UE.

Functions:
- bytes_per_prb: bytes carried by one PRB at a CQI.
- tti_capacity: bytes carried by n PRBs in one TTI.
- drain_ttis: TTIs needed to empty a payload.
"""

from llm_slice.radio.link import (
    LinkState,
    TtiConfig,
    bytes_per_prb,
    drain_ttis,
    tti_capacity,
)

__all__ = [
    "LinkState",
    "TtiConfig",
    "bytes_per_prb",
    "drain_ttis",
    "tti_capacity",
]
