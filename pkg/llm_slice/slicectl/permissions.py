"""The core network's permissions database.

File format: UTF-8 CSV with the header ``ue_id,service_id,allowed,tier``;
``allowed`` is ``true`` or ``false``; lines starting with ``#`` are comments.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Mapping, Tuple

from llm_slice.config.settings import Settings
from llm_slice.errors import DuplicateRecordError, ParseError

__all__ = [
    "PermissionRecord",
    "PermissionDb",
    "load_permissions",
    "authorize",
]

HEADER = ["ue_id", "service_id", "allowed", "tier"]
_BOOLEANS = {"true": True, "false": False}


@dataclass(frozen=True)
class PermissionRecord:
    ue_id: str
    service_id: str
    allowed: bool
    tier: str = Settings.DEFAULT_TIER


class PermissionDb(Mapping[Tuple[str, str], PermissionRecord]):
    """Read-only mapping of (ue_id, service_id) to its PermissionRecord."""

    def __init__(self, records: Iterable[PermissionRecord] = ()) -> None:
        self._records: Dict[Tuple[str, str], PermissionRecord] = {}
        for record in records:
            key = (record.ue_id, record.service_id)
            if key in self._records:
                raise DuplicateRecordError(record.ue_id, record.service_id, len(self._records) + 1)
            self._records[key] = record

    @classmethod
    def from_subscriptions(cls, subscriptions: Mapping[str, Iterable[str]]) -> "PermissionDb":
        """Allow every (ue, service) pair listed in ``{ue_id: services}``."""

        return cls(
            PermissionRecord(ue_id, service_id, True)
            for ue_id in sorted(subscriptions)
            for service_id in sorted(set(subscriptions[ue_id]))
        )

    def __getitem__(self, key: Tuple[str, str]) -> PermissionRecord:
        return self._records[key]

    def __iter__(self) -> Iterator[Tuple[str, str]]:
        return iter(self._records)

    def __len__(self) -> int:
        return len(self._records)

    def __repr__(self) -> str:
        return f"PermissionDb({len(self)} records)"


def load_permissions(text: str) -> PermissionDb:
    """Parse a permissions CSV document.

    Example:

    .. code-block:: python

        db = load_permissions("ue_id,service_id,allowed,tier\\nue1,llama,true,premium\\n")
        authorize(db, "ue1", "llama")  # True

    Raises:
        ParseError: bad header, wrong column count or a non-boolean ``allowed``
            (``location`` is the 1-based line number).
        DuplicateRecordError: the same (ue_id, service_id) pair appears twice.
    """

    records: List[PermissionRecord] = []
    seen: Dict[Tuple[str, str], int] = {}
    header_seen = False

    for line_number, row in enumerate(csv.reader(text.splitlines()), start=1):
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        cells = [cell.strip() for cell in row]

        if not header_seen:
            if cells != HEADER:
                raise ParseError(f"expected header {','.join(HEADER)!r}, got {','.join(cells)!r}", line_number)
            header_seen = True
            continue

        if len(cells) != len(HEADER):
            raise ParseError(f"expected {len(HEADER)} columns, got {len(cells)}", line_number)
        ue_id, service_id, allowed, tier = cells
        if not ue_id or not service_id:
            raise ParseError("ue_id and service_id must not be empty", line_number)
        if allowed not in _BOOLEANS:
            raise ParseError(f"allowed must be true or false, got {allowed!r}", line_number)

        key = (ue_id, service_id)
        if key in seen:
            raise DuplicateRecordError(ue_id, service_id, line_number)
        seen[key] = line_number
        records.append(PermissionRecord(ue_id, service_id, _BOOLEANS[allowed], tier or Settings.DEFAULT_TIER))

    if not header_seen:
        raise ParseError(f"missing header {','.join(HEADER)!r}", 1)

    return PermissionDb(records)


def authorize(db: PermissionDb, ue_id: str, service_id: str) -> bool:
    """True iff a record for the pair exists and allows it. Missing records deny."""

    record = db.get((ue_id, service_id))
    return record is not None and record.allowed
