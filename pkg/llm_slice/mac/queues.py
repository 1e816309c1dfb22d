"""Per-(slice, UE) downlink queues of the gNB.

A UE holds one queue for every slice it is attached to. Each queue is a FIFO of
segments; a segment is one enqueued payload (an LLM token, or a background packet
with ``request_id=None``).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import ceil
from typing import Deque, List, Optional, Tuple

from llm_slice.engine.events import SimTime

__all__ = [
    "QueueKey",
    "Segment",
    "UeQueue",
]

QueueKey = Tuple[str, str]
"""(slice_id, ue_id)"""


@dataclass
class Segment:
    request_id: Optional[int]
    bytes: int
    t_enqueued: SimTime


class UeQueue:
    """FIFO of downlink segments waiting for one UE inside one slice.

    Args:
        ue_id (str): owning UE.
        slice_id (str): slice the queue belongs to.
        bytes_per_prb (int): payload one PRB carries to this UE (from its CQI).
    """

    def __init__(self, ue_id: str, slice_id: str, bytes_per_prb: int) -> None:
        self.ue_id = ue_id
        self.slice_id = slice_id
        self.bytes_per_prb = bytes_per_prb
        self.segments: Deque[Segment] = deque()
        self.backlog_bytes = 0

    @property
    def key(self) -> QueueKey:
        return (self.slice_id, self.ue_id)

    @property
    def hol_wait_start(self) -> Optional[SimTime]:
        """Enqueue time of the head segment, None when empty."""

        return self.segments[0].t_enqueued if self.segments else None

    def hol_wait(self, now: SimTime) -> SimTime:
        return now - self.segments[0].t_enqueued if self.segments else 0

    def prb_need(self) -> int:
        """PRBs needed to empty the queue in one TTI."""

        return ceil(self.backlog_bytes / self.bytes_per_prb)

    def enqueue(self, request_id: Optional[int], nbytes: int, now: SimTime) -> None:
        if nbytes <= 0:
            raise ValueError(f"segments must carry payload, got {nbytes = }")
        self.segments.append(Segment(request_id, nbytes, now))
        self.backlog_bytes += nbytes

    def drain(self, max_bytes: int) -> List[Tuple[Optional[int], int]]:
        """Remove up to ``max_bytes`` from the head, in FIFO order.

        Returns:
            List[Tuple[Optional[int], int]]: (request_id, bytes) per touched segment.
        """

        fragments: List[Tuple[Optional[int], int]] = []
        budget = max_bytes
        while budget > 0 and self.segments:
            head = self.segments[0]
            take = min(head.bytes, budget)
            head.bytes -= take
            budget -= take
            self.backlog_bytes -= take
            if fragments and fragments[-1][0] == head.request_id and head.request_id is not None:
                fragments[-1] = (head.request_id, fragments[-1][1] + take)
            else:
                fragments.append((head.request_id, take))
            if head.bytes == 0:
                self.segments.popleft()
        return fragments

    def purge_request(self, request_id: int) -> int:
        """Drop every segment of ``request_id``; returns the bytes removed."""

        kept: Deque[Segment] = deque()
        removed = 0
        for segment in self.segments:
            if segment.request_id == request_id:
                removed += segment.bytes
            else:
                kept.append(segment)
        self.segments = kept
        self.backlog_bytes -= removed
        return removed

    def drop_head(self) -> Segment:
        segment = self.segments.popleft()
        self.backlog_bytes -= segment.bytes
        return segment

    def __len__(self) -> int:
        return len(self.segments)

    def __repr__(self) -> str:
        return f"UeQueue(ue_id={self.ue_id!r}, slice_id={self.slice_id!r}, backlog={self.backlog_bytes})"
