"""
llm_slice.engine
================

Deterministic discrete-event core: integer-microsecond clock, (time, seq) ordered
event queue, named seeded random streams, the run trace and the run loop.

Classes:
- Event, EventQueue: scheduled occurrences and the queue that orders them.
- RngStream: named random stream derived from the master seed.
- RunTrace, TraceRecord: what a run did, with a reproducible digest.
- Simulation, Workload: the run loop and the sampled requests it serves.

Functions:
- ms_to_us, us_to_ms: time unit helpers.
- build_workload: sample the requests and responses of one seed.
- run: run a scenario once.
"""

from llm_slice.engine.events import Event, EventQueue, SimTime, ms_to_us, us_to_ms
from llm_slice.engine.rng import RngStream
from llm_slice.engine.trace import RunTrace, TraceRecord

_LOOP = ("Simulation", "Workload", "build_workload", "run")


def __getattr__(name: str):
    # the run loop imports every other sub-package, so it loads on first use
    if name in _LOOP:
        from llm_slice.engine import simulation

        return getattr(simulation, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = [
    "Event",
    "EventQueue",
    "RngStream",
    "RunTrace",
    "SimTime",
    "Simulation",
    "TraceRecord",
    "Workload",
    "build_workload",
    "ms_to_us",
    "run",
    "us_to_ms",
]
