"""Run summaries: average latency, PRB utilization and downlink stability.

Background traffic is excluded from latency and stability (it has no delivery
records) but its PRBs count towards utilization.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from llm_slice.engine.events import SimTime, us_to_ms
from llm_slice.errors import EmptyRunError
from llm_slice.mac.scheduler import AllocationLog
from llm_slice.metrics.records import DeliveryRecord

__all__ = [
    "SliceSummary",
    "RunSummary",
    "summarize",
    "summarize_trace",
    "average_summaries",
]


@dataclass(frozen=True)
class SliceSummary:
    slice_id: str
    streams: int = 0
    completions: int = 0
    aborts: int = 0
    mean_completion_latency_ms: Optional[float] = None
    mean_first_byte_latency_ms: Optional[float] = None
    utilization: float = 0.0
    stability: float = 1.0


@dataclass(frozen=True)
class RunSummary:
    """The three headline metrics of a run, plus the counts behind them.

    Latencies are None when no stream completed. ``stability`` is
    ``1 - aborts / streams``; streams still in flight at the horizon count as
    not aborted and are reported in ``unfinished``.
    """

    mode: str
    mean_completion_latency_ms: Optional[float]
    mean_first_byte_latency_ms: Optional[float]
    utilization: float
    stability: float
    p95_completion_latency_ms: Optional[float] = None
    requests: int = 0
    streams: int = 0
    completions: int = 0
    aborts: int = 0
    unfinished: int = 0
    denied: int = 0
    background_dropped_bytes: int = 0
    invalid_transitions: int = 0
    used_prbs: int = 0
    total_prbs: int = 0
    scenario: str = ""
    seeds: List[int] = field(default_factory=list)
    per_slice: Dict[str, SliceSummary] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["per_slice"] = {k: data["per_slice"][k] for k in sorted(data["per_slice"])}
        return data


def _mean_ms(values_us: Sequence[float]) -> Optional[float]:
    return float(np.mean(values_us)) / 1000 if len(values_us) else None


def _p95_ms(values_us: Sequence[float]) -> Optional[float]:
    return float(np.percentile(values_us, 95)) / 1000 if len(values_us) else None


def _stability(records: Sequence[DeliveryRecord]) -> float:
    if not records:
        return 1.0
    return 1.0 - sum(r.aborted for r in records) / len(records)


def summarize(
    records: Iterable[DeliveryRecord],
    allocation_log: AllocationLog,
    horizon: SimTime,
    mode: str,
    allow_empty: bool = False,
    **counts: Any,
) -> RunSummary:
    """Compute the run metrics.

    Args:
        records: one DeliveryRecord per started LLM response stream.
        allocation_log: PRB totals of the run.
        horizon: run length in microseconds (for the report only; utilization is
            taken over the TTIs the allocation log saw).
        mode: scheduler mode label.
        allow_empty: return a zero-stream summary instead of raising EmptyRunError.
        **counts: extra RunSummary fields (requests, denied, seeds, ...).

    Raises:
        EmptyRunError: no LLM response stream was started and ``allow_empty`` is False.
    """

    records = sorted(records, key=lambda r: r.request_id)
    if not records and not allow_empty:
        raise EmptyRunError(f"no LLM response stream started within {us_to_ms(horizon):g} ms")

    total_prbs = allocation_log.total_prbs
    completed = [r.completion_latency_us for r in records if r.completed]
    first_bytes = [r.first_byte_latency_us for r in records if r.t_first_byte is not None]

    per_slice: Dict[str, SliceSummary] = {}
    slice_ids = sorted({r.slice_id for r in records} | set(allocation_log.used_by_slice))
    for slice_id in slice_ids:
        mine = [r for r in records if r.slice_id == slice_id]
        per_slice[slice_id] = SliceSummary(
            slice_id=slice_id,
            streams=len(mine),
            completions=sum(r.completed for r in mine),
            aborts=sum(r.aborted for r in mine),
            mean_completion_latency_ms=_mean_ms([r.completion_latency_us for r in mine if r.completed]),
            mean_first_byte_latency_ms=_mean_ms(
                [r.first_byte_latency_us for r in mine if r.t_first_byte is not None]
            ),
            utilization=allocation_log.used_by_slice.get(slice_id, 0) / total_prbs if total_prbs else 0.0,
            stability=_stability(mine),
        )

    counts.setdefault("requests", len(records))
    return RunSummary(
        mode=mode,
        mean_completion_latency_ms=_mean_ms(completed),
        mean_first_byte_latency_ms=_mean_ms(first_bytes),
        utilization=allocation_log.used_prbs / total_prbs if total_prbs else 0.0,
        stability=_stability(records),
        p95_completion_latency_ms=_p95_ms(completed),
        streams=len(records),
        completions=len(completed),
        aborts=sum(r.aborted for r in records),
        unfinished=sum(r.unfinished for r in records),
        used_prbs=allocation_log.used_prbs,
        total_prbs=total_prbs,
        per_slice=per_slice,
        **counts,
    )


def summarize_trace(trace, allow_empty: bool = False) -> RunSummary:
    """``summarize`` over the typed outputs of a RunTrace."""

    return summarize(
        trace.deliveries,
        trace.allocation_log,
        trace.horizon_us,
        trace.mode,
        allow_empty=allow_empty,
        requests=trace.requests,
        denied=trace.denied_requests,
        background_dropped_bytes=trace.background_dropped_bytes,
        invalid_transitions=trace.invalid_transitions,
        scenario=trace.scenario_name,
        seeds=[trace.seed],
    )


def _mean_of(values: Iterable[Optional[float]]) -> Optional[float]:
    present = [v for v in values if v is not None]
    return float(np.mean(present)) if present else None


_METRICS = (
    "mean_completion_latency_ms",
    "mean_first_byte_latency_ms",
    "utilization",
    "stability",
    "p95_completion_latency_ms",
)
_COUNTS = (
    "requests",
    "streams",
    "completions",
    "aborts",
    "unfinished",
    "denied",
    "background_dropped_bytes",
    "invalid_transitions",
    "used_prbs",
    "total_prbs",
)


def average_summaries(summaries: Sequence[RunSummary]) -> RunSummary:
    """Seed average: arithmetic mean of every metric, sums of every count.

    Each run weighs the same regardless of its traffic volume. A single summary is
    returned unchanged.
    """

    if not summaries:
        raise ValueError("nothing to average")
    if len({s.mode for s in summaries}) > 1:
        raise ValueError(f"cannot average different modes: {sorted({s.mode for s in summaries})}")
    if len(summaries) == 1:
        return summaries[0]

    per_slice: Dict[str, SliceSummary] = {}
    for slice_id in sorted({k for s in summaries for k in s.per_slice}):
        parts = [s.per_slice[slice_id] for s in summaries if slice_id in s.per_slice]
        per_slice[slice_id] = SliceSummary(
            slice_id=slice_id,
            streams=sum(p.streams for p in parts),
            completions=sum(p.completions for p in parts),
            aborts=sum(p.aborts for p in parts),
            mean_completion_latency_ms=_mean_of(p.mean_completion_latency_ms for p in parts),
            mean_first_byte_latency_ms=_mean_of(p.mean_first_byte_latency_ms for p in parts),
            utilization=float(np.mean([p.utilization for p in parts])),
            stability=float(np.mean([p.stability for p in parts])),
        )

    first = summaries[0]
    return replace(
        first,
        **{name: _mean_of(getattr(s, name) for s in summaries) for name in _METRICS},
        **{name: sum(getattr(s, name) for s in summaries) for name in _COUNTS},
        seeds=[seed for s in summaries for seed in s.seeds],
        per_slice=per_slice,
    )
