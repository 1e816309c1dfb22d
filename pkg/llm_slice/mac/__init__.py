"""
llm_slice.mac
=============

The gNB MAC: per-slice PRB partitions, round-robin scheduling inside each partition,
work-conserving reclaim, FIFO delivery and head-of-line timeout disconnections.

Classes:
- QuotaVector: fraction of the PRB grid per slice.
- UeQueue: FIFO of downlink segments of one UE inside one slice.
- SchedulerMode: shared / static / dynamic plus the work-conservation switch.
- TtiAllocation: PRB grants of one TTI and the PRBs that carried payload.
- Disconnection: a response stream aborted by the timeout scan.
- AllocationLog: PRB totals over a run.
- MacScheduler: owns the queues and runs every TTI.

Functions:
- partition_prbs: largest-remainder split of the PRB grid by quota.
- hand_out_round_robin: one-PRB-at-a-time round-robin over queue needs.
"""

from llm_slice.mac.partition import QuotaVector, partition_prbs
from llm_slice.mac.queues import QueueKey, Segment, UeQueue
from llm_slice.mac.scheduler import (
    AllocationLog,
    DeliveryFragment,
    Disconnection,
    MacScheduler,
    SchedulerMode,
    SliceCounters,
    TtiAllocation,
    hand_out_round_robin,
)

__all__ = [
    "AllocationLog",
    "DeliveryFragment",
    "Disconnection",
    "MacScheduler",
    "QueueKey",
    "QuotaVector",
    "SchedulerMode",
    "Segment",
    "SliceCounters",
    "TtiAllocation",
    "UeQueue",
    "hand_out_round_robin",
    "partition_prbs",
]
