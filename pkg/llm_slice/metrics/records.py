"""Per-response delivery records and the ledger that builds them during a run."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from llm_slice.engine.events import SimTime

__all__ = [
    "DeliveryRecord",
    "StreamLedger",
]


@dataclass(frozen=True)
class DeliveryRecord:
    """Outcome of one LLM response stream.

    ``t_complete`` is None for aborted streams and for streams still in flight at
    the horizon; ``t_first_byte`` is None when not a single byte arrived.
    """

    request_id: int
    slice_id: str
    ue_id: str
    t_arrival: SimTime
    t_first_byte: Optional[SimTime]
    t_complete: Optional[SimTime]
    total_bytes: int
    aborted: bool = False

    @property
    def completed(self) -> bool:
        return self.t_complete is not None

    @property
    def unfinished(self) -> bool:
        return not self.aborted and self.t_complete is None

    @property
    def completion_latency_us(self) -> Optional[SimTime]:
        return None if self.t_complete is None else self.t_complete - self.t_arrival

    @property
    def first_byte_latency_us(self) -> Optional[SimTime]:
        return None if self.t_first_byte is None else self.t_first_byte - self.t_arrival


@dataclass
class _OpenStream:
    slice_id: str
    ue_id: str
    t_arrival: SimTime
    total_bytes: int
    delivered: int = 0
    t_first_byte: Optional[SimTime] = None


@dataclass
class StreamLedger:
    """Tracks every started response from its first to its last byte.

    Example:

    .. code-block:: python

        ledger = StreamLedger()
        ledger.start(7, "llama", "ue1", t_arrival=0, total_bytes=400)
        ledger.on_bytes(7, 400, now=251_000)  # True: the stream is complete
        ledger.records()[0].t_complete        # 251000
    """

    _open: Dict[int, _OpenStream] = field(default_factory=dict)
    _closed: Dict[int, DeliveryRecord] = field(default_factory=dict)

    def start(self, request_id: int, slice_id: str, ue_id: str, t_arrival: SimTime, total_bytes: int) -> None:
        if request_id in self._open or request_id in self._closed:
            raise ValueError(f"stream {request_id} was already started")
        self._open[request_id] = _OpenStream(slice_id, ue_id, t_arrival, total_bytes)

    def on_bytes(self, request_id: int, nbytes: int, now: SimTime) -> bool:
        """Account delivered bytes; returns True when this completes the stream."""

        stream = self._open[request_id]
        if stream.t_first_byte is None:
            stream.t_first_byte = now
        stream.delivered += nbytes
        if stream.delivered < stream.total_bytes:
            return False
        self._close(request_id, t_complete=now, aborted=False)
        return True

    def abort(self, request_id: int) -> None:
        if request_id in self._open:
            self._close(request_id, t_complete=None, aborted=True)

    def is_open(self, request_id: int) -> bool:
        return request_id in self._open

    def _close(self, request_id: int, t_complete: Optional[SimTime], aborted: bool) -> None:
        stream = self._open.pop(request_id)
        self._closed[request_id] = DeliveryRecord(
            request_id=request_id,
            slice_id=stream.slice_id,
            ue_id=stream.ue_id,
            t_arrival=stream.t_arrival,
            t_first_byte=stream.t_first_byte,
            t_complete=t_complete,
            total_bytes=stream.total_bytes,
            aborted=aborted,
        )

    @property
    def n_open(self) -> int:
        return len(self._open)

    def records(self) -> List[DeliveryRecord]:
        """Closed streams plus the ones still open, ordered by request_id."""

        unfinished = {
            rid: DeliveryRecord(rid, s.slice_id, s.ue_id, s.t_arrival, s.t_first_byte, None, s.total_bytes)
            for rid, s in self._open.items()
        }
        merged = {**self._closed, **unfinished}
        return [merged[rid] for rid in sorted(merged)]
