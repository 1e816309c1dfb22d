"""E2-style KPI reports built from the MAC's per-slice window counters.

Besides the usual byte and delay counters a report carries the LLM specific
``mean_response_bytes``: the mean total size of the responses completed in the window.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any, Dict

from llm_slice.engine.events import SimTime, us_to_ms
from llm_slice.mac.scheduler import MacScheduler, SliceCounters

__all__ = [
    "KpiReport",
    "build_report",
    "start_window",
]


@dataclass(frozen=True)
class KpiReport:
    slice_id: str
    window_start: SimTime
    window_end: SimTime
    arrived_bytes: int = 0
    delivered_bytes: int = 0
    backlog_bytes: int = 0
    mean_hol_delay_ms: float = 0.0
    active_streams: int = 0
    disconnects: int = 0
    mean_response_bytes: float = 0.0

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


def build_report(mac: MacScheduler, slice_id: str, window_end: SimTime) -> KpiReport:
    """Aggregate the slice's counters since its window started.

    ``mean_hol_delay_ms`` averages the head-of-line wait over the slice's backlogged
    queues at ``window_end``; ``active_streams`` counts distinct responses in flight
    at any point of the window.
    """

    counters = mac.counters.get(slice_id) or SliceCounters()
    queues = mac.slice_queues(slice_id)
    waits = [q.hol_wait(window_end) for q in queues if q.backlog_bytes]

    return KpiReport(
        slice_id=slice_id,
        window_start=counters.window_start,
        window_end=window_end,
        arrived_bytes=counters.arrived_bytes,
        delivered_bytes=counters.delivered_bytes,
        backlog_bytes=sum(q.backlog_bytes for q in queues),
        mean_hol_delay_ms=us_to_ms(sum(waits) / len(waits)) if waits else 0.0,
        active_streams=len(counters.streams_seen),
        disconnects=counters.disconnects,
        mean_response_bytes=(
            counters.completed_bytes / counters.completed_count if counters.completed_count else 0.0
        ),
    )


def start_window(mac: MacScheduler, slice_id: str, now: SimTime) -> None:
    """Reset the slice's counters for a window starting at ``now``."""

    mac.counters[slice_id] = SliceCounters(
        window_start=now,
        backlog_at_start=mac.slice_backlog(slice_id),
        streams_seen=set(mac.open_streams(slice_id)),
    )
