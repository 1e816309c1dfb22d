"""Virtual clock and ordered event queue of the discrete-event engine.

Time is an integer number of microseconds since the start of the run (``SimTime``).
Events are dispatched in lexicographic (time, seq) order, where ``seq`` is a
per-queue insertion counter, so two events at the same instant leave the queue
in the order they were scheduled.

Classes:
- Event: one scheduled occurrence.
- EventQueue: heap of pending events plus the clock.

Functions:
- ms_to_us / us_to_ms: unit conversions for scenario values given in milliseconds.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Any, List, Optional, Tuple

from llm_slice.config.enums import EventKinds
from llm_slice.errors import PastTimeError

__all__ = [
    "SimTime",
    "Event",
    "EventQueue",
    "ms_to_us",
    "us_to_ms",
]

SimTime = int
"""Integer microseconds since simulation start."""


def ms_to_us(ms: float) -> SimTime:
    return int(round(ms * 1000))


def us_to_ms(us: SimTime) -> float:
    return us / 1000


@dataclass(frozen=True)
class Event:
    time: SimTime
    seq: int
    kind: EventKinds
    payload: Any = field(default=None, compare=False)


class EventQueue:
    """Pending events ordered by (time, seq), and the clock they advance.

    The clock only moves forward: it is set to the time of each popped event and
    scheduling anything earlier than it raises ``PastTimeError``.

    Example:

    .. code-block:: python

        queue = EventQueue()
        queue.schedule(5000, EventKinds.TTI_TICK)
        queue.schedule(5000, EventKinds.RIC_TICK)
        queue.pop_next().kind  # EventKinds.TTI_TICK
    """

    def __init__(self) -> None:
        self.clock: SimTime = 0
        self._heap: List[Tuple[SimTime, int, Event]] = []
        self._next_seq = 0

    def schedule(self, time: SimTime, kind: EventKinds, payload: Any = None) -> int:
        """Enqueue an event and return its id (its ``seq``).

        Raises:
            PastTimeError: if ``time`` is earlier than the current clock.
        """

        if time < self.clock:
            raise PastTimeError(time, self.clock)

        seq = self._next_seq
        self._next_seq += 1
        heapq.heappush(self._heap, (time, seq, Event(time, seq, kind, payload)))
        return seq

    def pop_next(self) -> Optional[Event]:
        """Remove and return the minimum (time, seq) event, or None if the queue is empty."""

        if not self._heap:
            return None
        time, _, event = heapq.heappop(self._heap)
        self.clock = time
        return event

    def peek_time(self) -> Optional[SimTime]:
        return self._heap[0][0] if self._heap else None

    def __len__(self) -> int:
        return len(self._heap)

    def __bool__(self) -> bool:
        return bool(self._heap)
