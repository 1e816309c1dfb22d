"""The gNB MAC scheduler with LLM slice support.

Every TTI the scheduler

1. splits the PRB grid into per-slice partitions (one common pool in shared mode),
2. hands each partition out round-robin, one PRB at a time, over the backlogged
   queues of the slice, starting from a per-slice cursor that persists across TTIs,
3. optionally (work-conserving) re-offers PRBs left unused to backlogged queues
   of other slices in ascending slice_id order, from a second persistent cursor,
4. drains granted bytes FIFO and counts the PRBs that actually carried payload.

A periodic scan aborts response streams whose head-of-line segment waited longer
than the disconnection timeout.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import ceil
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from llm_slice.config.enums import SchedulerModes
from llm_slice.config.settings import Settings
from llm_slice.engine.events import SimTime, ms_to_us
from llm_slice.errors import ConfigurationError
from llm_slice.mac.partition import QuotaVector, partition_prbs
from llm_slice.mac.queues import QueueKey, UeQueue
from llm_slice.radio.link import TtiConfig

__all__ = [
    "SchedulerMode",
    "TtiAllocation",
    "Disconnection",
    "DeliveryFragment",
    "SliceCounters",
    "AllocationLog",
    "MacScheduler",
    "hand_out_round_robin",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SchedulerMode:
    """Scheduler mode plus the work-conservation switch.

    Use ``SchedulerMode.of("static")`` to get the per-mode default for work conservation
    (off for static, on for dynamic).
    """

    kind: SchedulerModes
    work_conserving: bool

    @classmethod
    def of(cls, kind, work_conserving: Optional[bool] = None) -> "SchedulerMode":
        kind = SchedulerModes(kind) if not isinstance(kind, SchedulerModes) else kind
        if work_conserving is None:
            work_conserving = kind == SchedulerModes.DYNAMIC
        return cls(kind, bool(work_conserving))

    @property
    def name(self) -> str:
        return self.kind.value


@dataclass
class TtiAllocation:
    tti_index: int
    grants: Dict[QueueKey, int] = field(default_factory=dict)
    per_slice_used: Dict[str, int] = field(default_factory=dict)
    per_queue_used: Dict[QueueKey, int] = field(default_factory=dict)

    @property
    def total_granted(self) -> int:
        return sum(self.grants.values())

    @property
    def total_used(self) -> int:
        return sum(self.per_slice_used.values())

    def granted_to_slice(self, slice_id: str) -> int:
        return sum(prbs for (s, _), prbs in self.grants.items() if s == slice_id)


@dataclass(frozen=True)
class Disconnection:
    request_id: int
    ue_id: str
    slice_id: str
    t_abort: SimTime
    bytes_undelivered: int
    bytes_wasted: int


@dataclass(frozen=True)
class DeliveryFragment:
    request_id: int
    slice_id: str
    ue_id: str
    bytes: int
    time: SimTime


@dataclass
class SliceCounters:
    """Per-slice measurements accumulated over one RIC reporting window."""

    window_start: SimTime = 0
    backlog_at_start: int = 0
    arrived_bytes: int = 0
    delivered_bytes: int = 0
    disconnects: int = 0
    completed_bytes: int = 0
    completed_count: int = 0
    streams_seen: Set[int] = field(default_factory=set)


class AllocationLog:
    """PRB accounting over a run: per-slice totals, and per-TTI rows when asked for."""

    def __init__(self, n_prb: int, keep_rows: bool = False) -> None:
        self.n_prb = n_prb
        self.keep_rows = keep_rows
        self.n_ttis = 0
        self.granted_prbs = 0
        self.used_by_slice: Dict[str, int] = {}
        self.rows: List[TtiAllocation] = []

    def add(self, allocation: TtiAllocation) -> None:
        self.n_ttis += 1
        self.granted_prbs += allocation.total_granted
        for slice_id, used in allocation.per_slice_used.items():
            self.used_by_slice[slice_id] = self.used_by_slice.get(slice_id, 0) + used
        if self.keep_rows:
            self.rows.append(allocation)

    @property
    def used_prbs(self) -> int:
        return sum(self.used_by_slice.values())

    @property
    def total_prbs(self) -> int:
        return self.n_ttis * self.n_prb


def hand_out_round_robin(
    order: Sequence[QueueKey], needs: Dict[QueueKey, int], prbs: int
) -> Tuple[Dict[QueueKey, int], Optional[QueueKey]]:
    """Give PRBs one at a time, cycling through ``order``, skipping satisfied queues.

    Equivalent to the one-PRB-at-a-time loop but done in whole rounds.

    Args:
        order: queue keys in hand-out order (first key gets the first PRB).
        needs: PRBs each queue can still use.
        prbs: PRBs to hand out.

    Returns:
        (grants, last receiver). The last receiver is None when nothing was granted.
    """

    grants: Dict[QueueKey, int] = {}
    active = [key for key in order if needs.get(key, 0) > 0]
    remaining = {key: needs[key] for key in active}
    last: Optional[QueueKey] = None

    while prbs > 0 and active:
        if prbs >= len(active):
            rounds = min(prbs // len(active), min(remaining[key] for key in active))
            for key in active:
                grants[key] = grants.get(key, 0) + rounds
                remaining[key] -= rounds
            prbs -= rounds * len(active)
            last = active[-1]
            active = [key for key in active if remaining[key] > 0]
        else:
            for key in active[:prbs]:
                grants[key] = grants.get(key, 0) + 1
            last = active[prbs - 1]
            prbs = 0

    return grants, last


class MacScheduler:
    """Downlink MAC of one gNB.

    Args:
        mode (SchedulerMode): shared / static / dynamic and the work-conservation switch.
        tti (TtiConfig): the PRB grid.
        queues (Iterable[UeQueue]): every (slice, UE) queue of the run. The set is fixed.
        initial_quota (QuotaVector, optional): partition shares for static and dynamic modes.
        keep_allocation_rows (bool): keep every TtiAllocation in the allocation log.

    Example:

    .. code-block:: python

        mac = MacScheduler(SchedulerMode.of("static"), TtiConfig(), queues, QuotaVector({"llama": 0.6, "bard": 0.4}))
        allocation, fragments = mac.run_tti(tti_index=0, now=0)
    """

    def __init__(
        self,
        mode: SchedulerMode,
        tti: TtiConfig,
        queues: Iterable[UeQueue],
        initial_quota: Optional[QuotaVector] = None,
        keep_allocation_rows: bool = False,
    ) -> None:
        self.mode = mode
        self.tti = tti
        self.queues: Dict[QueueKey, UeQueue] = {q.key: q for q in queues}
        self.quota = initial_quota if initial_quota is not None else QuotaVector({})
        if mode.kind != SchedulerModes.SHARED and initial_quota is None:
            raise ConfigurationError(f"{mode.name} mode needs an initial quota vector")

        # round-robin membership per pool, fixed for the whole run
        self._members: Dict[str, List[QueueKey]] = {}
        for key in sorted(self.queues, key=lambda k: (k[1], k[0])):
            self._members.setdefault(self.pool_of(key), []).append(key)
        self._cursors: Dict[str, int] = {}
        self._reclaim_order: List[QueueKey] = sorted(self.queues)
        self._reclaim_cursor = 0
        self._partition_cache: Optional[Dict[str, int]] = None
        self._pending: List[Tuple[SimTime, QuotaVector]] = []

        # request ledger
        self._stream_total: Dict[int, int] = {}
        self._stream_delivered: Dict[int, int] = {}
        self._stream_key: Dict[int, QueueKey] = {}
        self._aborted: Set[int] = set()

        self.counters: Dict[str, SliceCounters] = {}
        self.background_dropped_bytes = 0
        self.allocation_log = AllocationLog(tti.n_prb, keep_rows=keep_allocation_rows)

    # ============= #
    #    Helpers    #
    # ============= #

    def pool_of(self, key: QueueKey) -> str:
        return Settings.SHARED_POOL_ID if self.mode.kind == SchedulerModes.SHARED else key[0]

    def slice_counters(self, slice_id: str) -> SliceCounters:
        if slice_id not in self.counters:
            self.counters[slice_id] = SliceCounters()
        return self.counters[slice_id]

    def slice_backlog(self, slice_id: str) -> int:
        return sum(q.backlog_bytes for key, q in self.queues.items() if key[0] == slice_id)

    def slice_queues(self, slice_id: str) -> List[UeQueue]:
        return [q for key, q in sorted(self.queues.items()) if key[0] == slice_id]

    def has_backlog(self) -> bool:
        return any(q.backlog_bytes for q in self.queues.values())

    # ============== #
    #    Partition   #
    # ============== #

    def current_partition(self) -> Dict[str, int]:
        if self.mode.kind == SchedulerModes.SHARED:
            return {Settings.SHARED_POOL_ID: self.tti.n_prb}
        if self._partition_cache is None:
            self._partition_cache = partition_prbs(self.quota, self.tti.n_prb)
        return self._partition_cache

    def set_quota(self, quota: QuotaVector) -> None:
        if quota.as_dict() != self.quota.as_dict():
            self.quota = quota
            self._partition_cache = None

    def schedule_quota(self, effective_time: SimTime, quota: QuotaVector) -> None:
        """Queue a quota vector that takes over at the first TTI starting at or after ``effective_time``."""

        self._pending.append((effective_time, quota))
        self._pending.sort(key=lambda item: item[0])

    def _apply_pending(self, now: SimTime) -> None:
        while self._pending and self._pending[0][0] <= now:
            _, quota = self._pending.pop(0)
            self.set_quota(quota)

    # ============ #
    #    Streams   #
    # ============ #

    def open_stream(self, request_id: int, key: QueueKey, total_bytes: int) -> None:
        self._stream_total[request_id] = total_bytes
        self._stream_delivered[request_id] = 0
        self._stream_key[request_id] = key
        self.slice_counters(key[0]).streams_seen.add(request_id)

    def close_stream(self, request_id: int, completed: bool) -> None:
        key = self._stream_key.pop(request_id, None)
        total = self._stream_total.pop(request_id, 0)
        self._stream_delivered.pop(request_id, None)
        if key is not None and completed:
            counters = self.slice_counters(key[0])
            counters.completed_bytes += total
            counters.completed_count += 1

    def open_streams(self, slice_id: str) -> List[int]:
        return sorted(rid for rid, key in self._stream_key.items() if key[0] == slice_id)

    def is_aborted(self, request_id: int) -> bool:
        return request_id in self._aborted

    def enqueue(self, key: QueueKey, request_id: Optional[int], nbytes: int, now: SimTime) -> bool:
        """Put a payload into the (slice, UE) queue. Tokens of aborted streams are refused."""

        if request_id is not None and request_id in self._aborted:
            return False
        self.queues[key].enqueue(request_id, nbytes, now)
        self.slice_counters(key[0]).arrived_bytes += nbytes
        return True

    # ================ #
    #    Scheduling    #
    # ================ #

    def schedule_tti(self, partition: Dict[str, int], tti_index: int) -> TtiAllocation:
        """Round-robin each partition over the backlogged queues of its pool.

        A queue stops receiving PRBs once its backlog fits the PRBs already granted.
        The pool cursor moves to the queue after the last one that received a PRB.
        """

        allocation = TtiAllocation(tti_index)
        for pool in sorted(partition):
            prbs = partition[pool]
            members = self._members.get(pool)
            if not members or prbs <= 0:
                continue

            start = self._cursors.get(pool, 0) % len(members)
            order = members[start:] + members[:start]
            needs = {key: self.queues[key].prb_need() for key in order}
            grants, last = hand_out_round_robin(order, needs, prbs)
            if last is not None:
                self._cursors[pool] = (members.index(last) + 1) % len(members)
            allocation.grants.update(grants)

        return allocation

    def reclaim_unused(self, allocation: TtiAllocation, partition: Dict[str, int]) -> TtiAllocation:
        """Offer PRBs nobody used to queues with backlog left (work-conserving modes only).

        Slices that left part of their partition unused are donors and get nothing back.
        The other queues are visited in ascending (slice_id, UE) order starting from a
        reclaim cursor that persists across TTIs; the spare PRBs go out round-robin.
        The allocation is returned unchanged when work conservation is off.
        """

        if not self.mode.work_conserving:
            return allocation

        spare = self.tti.n_prb - allocation.total_granted
        if spare <= 0:
            return allocation

        donors = {pool for pool, prbs in partition.items() if allocation.granted_to_slice(pool) < prbs}
        start = self._reclaim_cursor % len(self._reclaim_order) if self._reclaim_order else 0
        rotated = self._reclaim_order[start:] + self._reclaim_order[:start]
        order = [key for key in rotated if key[0] not in donors]
        needs = {key: self.queues[key].prb_need() - allocation.grants.get(key, 0) for key in order}
        extra, last = hand_out_round_robin(order, needs, spare)
        if not extra:
            return allocation
        self._reclaim_cursor = (self._reclaim_order.index(last) + 1) % len(self._reclaim_order)

        grants = dict(allocation.grants)
        for key, prbs in extra.items():
            grants[key] = grants.get(key, 0) + prbs
        return TtiAllocation(allocation.tti_index, grants)

    def deliver(self, allocation: TtiAllocation, now: SimTime) -> List[DeliveryFragment]:
        """Drain the granted bytes FIFO and record the PRBs that carried payload.

        Each granted queue sends ``min(backlog, prbs * bytes_per_prb)`` bytes; the PRBs
        counted as used are ``ceil(sent / bytes_per_prb)``. Fragments are stamped ``now``.
        """

        fragments: List[DeliveryFragment] = []
        for key in sorted(allocation.grants):
            prbs = allocation.grants[key]
            queue = self.queues[key]
            sent = 0
            for request_id, nbytes in queue.drain(prbs * queue.bytes_per_prb):
                sent += nbytes
                if request_id is None:
                    continue
                self._stream_delivered[request_id] = self._stream_delivered.get(request_id, 0) + nbytes
                fragments.append(DeliveryFragment(request_id, key[0], key[1], nbytes, now))

            used = ceil(sent / queue.bytes_per_prb)
            if used:
                allocation.per_queue_used[key] = used
                allocation.per_slice_used[key[0]] = allocation.per_slice_used.get(key[0], 0) + used
                self.slice_counters(key[0]).delivered_bytes += sent
        return fragments

    def run_tti(self, tti_index: int, now: SimTime) -> Tuple[TtiAllocation, List[DeliveryFragment]]:
        """Schedule and transmit the TTI that starts at ``now``; bytes arrive at its end."""

        self._apply_pending(now)
        partition = self.current_partition()
        allocation = self.schedule_tti(partition, tti_index)
        allocation = self.reclaim_unused(allocation, partition)
        fragments = self.deliver(allocation, now + self.tti.tti_us)
        self.allocation_log.add(allocation)
        return allocation, fragments

    # ============== #
    #    Timeouts    #
    # ============== #

    def check_timeouts(self, now: SimTime, t_disc_ms: float) -> List[Disconnection]:
        """Abort every stream whose queue head has waited strictly longer than ``t_disc_ms``.

        All queued segments of an aborted request are purged and one Disconnection is
        emitted; bytes it already delivered are reported as wasted. Stale background
        packets are dropped without a Disconnection.
        """

        if t_disc_ms <= 0:
            raise ValueError(f"t_disc_ms must be positive, got {t_disc_ms = }")
        limit = ms_to_us(t_disc_ms)

        disconnections: List[Disconnection] = []
        for key in sorted(self.queues):
            queue = self.queues[key]
            while queue.segments and now - queue.segments[0].t_enqueued > limit:
                request_id = queue.segments[0].request_id
                if request_id is None:
                    self.background_dropped_bytes += queue.drop_head().bytes
                    continue

                queue.purge_request(request_id)
                self._aborted.add(request_id)
                delivered = self._stream_delivered.get(request_id, 0)
                total = self._stream_total.get(request_id, delivered)
                disconnections.append(
                    Disconnection(
                        request_id=request_id,
                        ue_id=key[1],
                        slice_id=key[0],
                        t_abort=now,
                        bytes_undelivered=total - delivered,
                        bytes_wasted=delivered,
                    )
                )
                self.slice_counters(key[0]).disconnects += 1
                self.close_stream(request_id, completed=False)
                logger.debug("request %d disconnected at %d us (%s)", request_id, now, key)

        return disconnections
