"""Run trace: the ordered record of what a simulation run did.

Every record is ``(time_us, kind, fields)``. Its canonical text form is one
tab-separated line ``time_us<TAB>kind<TAB>json(fields)`` with sorted keys; the
trace digest is the sha256 of those lines, so two runs with the same scenario and
seed produce the same digest.

Besides the generic records, the trace keeps the typed outputs the metrics need:
delivery records, disconnections, RIC decisions and the PRB allocation totals.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any, Dict, List, NamedTuple, Optional

from llm_slice.config.enums import TraceKinds
from llm_slice.engine.events import SimTime
from llm_slice.errors import OutputError

__all__ = [
    "TraceRecord",
    "RunTrace",
]


class TraceRecord(NamedTuple):
    time_us: SimTime
    kind: str
    fields: Dict[str, Any]

    def to_line(self) -> str:
        return f"{self.time_us}\t{self.kind}\t{json.dumps(self.fields, sort_keys=True, separators=(',', ':'))}"


class RunTrace:
    """Trace of one run.

    Args:
        keep_records (bool): keep every TraceRecord in memory (needed for ``write_log``
            and for inspecting ``records``). Defaults to True.
        hash_records (bool): fold every record into the running digest. Defaults to True.
            Seed sweeps that only need metrics switch both off.
    """

    def __init__(self, keep_records: bool = True, hash_records: bool = True) -> None:
        self.keep_records = keep_records
        self.hash_records = hash_records
        self.records: List[TraceRecord] = []
        self._hash = hashlib.sha256()

        # typed outputs filled by the simulation
        self.scenario_name: str = ""
        self.mode: str = ""
        self.seed: int = 0
        self.horizon_us: SimTime = 0
        self.deliveries: List[Any] = []
        self.disconnections: List[Any] = []
        self.decisions: List[Any] = []
        self.allocation_log: Optional[Any] = None
        self.requests = 0
        self.denied_requests = 0
        self.invalid_transitions = 0
        self.background_dropped_bytes = 0

    @property
    def is_recording(self) -> bool:
        return self.keep_records or self.hash_records

    def add(self, time_us: SimTime, kind: TraceKinds, **fields: Any) -> None:
        if not self.is_recording:
            return
        record = TraceRecord(time_us, kind.value, fields)
        if self.keep_records:
            self.records.append(record)
        if self.hash_records:
            self._hash.update(record.to_line().encode("utf-8"))
            self._hash.update(b"\n")

    def count(self, kind: TraceKinds) -> int:
        return sum(1 for record in self.records if record.kind == kind.value)

    def digest(self) -> str:
        """sha256 hex digest of the canonical line log."""

        if not self.hash_records:
            raise ValueError("this trace was created with hash_records=False")
        return self._hash.hexdigest()

    def write_log(self, path: str) -> str:
        """Write the line-delimited event log (one record per line) and return its path."""

        if not self.keep_records:
            raise ValueError("this trace was created with keep_records=False")
        try:
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                for record in self.records:
                    f.write(record.to_line())
                    f.write("\n")
        except OSError as exc:
            raise OutputError(f"cannot write trace log to {path!r}: {exc}") from exc
        return path

    def __repr__(self) -> str:
        return (
            f"RunTrace(scenario={self.scenario_name!r}, mode={self.mode!r}, seed={self.seed}, "
            f"records={len(self.records)}, deliveries={len(self.deliveries)})"
        )
