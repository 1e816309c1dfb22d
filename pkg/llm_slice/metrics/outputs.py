"""Result files: summary.json, deliveries.csv, comparison.json and comparison.txt."""

from __future__ import annotations

import csv
import json
import os
from typing import Any, Iterable, List, Optional

from llm_slice.errors import OutputError
from llm_slice.metrics.comparison import ComparisonReport, render_table
from llm_slice.metrics.records import DeliveryRecord
from llm_slice.metrics.summary import RunSummary
from llm_slice.utils.utils import validate_path_exists

__all__ = [
    "DELIVERY_COLUMNS",
    "write_outputs",
    "write_json",
    "write_deliveries",
]

DELIVERY_COLUMNS = [
    "request_id",
    "slice_id",
    "t_arrival_us",
    "t_first_byte_us",
    "t_complete_us",
    "total_bytes",
    "aborted",
]


def _blank(value: Optional[int]) -> Any:
    return "" if value is None else value


def write_json(data: Any, path: str) -> str:
    path = validate_path_exists(path, overwrite=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def write_deliveries(records: Iterable[DeliveryRecord], path: str) -> str:
    path = validate_path_exists(path, overwrite=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(DELIVERY_COLUMNS)
        for r in sorted(records, key=lambda r: r.request_id):
            writer.writerow(
                [
                    r.request_id,
                    r.slice_id,
                    r.t_arrival,
                    _blank(r.t_first_byte),
                    _blank(r.t_complete),
                    r.total_bytes,
                    "true" if r.aborted else "false",
                ]
            )
    return path


def write_outputs(
    out_dir: str,
    summary: Optional[RunSummary] = None,
    records: Optional[Iterable[DeliveryRecord]] = None,
    report: Optional[ComparisonReport] = None,
) -> List[str]:
    """Write whatever results are given into ``out_dir`` (created if missing).

    - ``summary`` -> summary.json
    - ``records`` -> deliveries.csv (header only when empty)
    - ``report`` -> comparison.json and comparison.txt

    Returns:
        List[str]: paths written, in the order above.

    Raises:
        OutputError: the directory or a file could not be written.
    """

    written: List[str] = []
    try:
        os.makedirs(out_dir, exist_ok=True)
        if summary is not None:
            written.append(write_json(summary.to_dict(), os.path.join(out_dir, "summary.json")))
        if records is not None:
            written.append(write_deliveries(records, os.path.join(out_dir, "deliveries.csv")))
        if report is not None:
            written.append(write_json(report.to_dict(), os.path.join(out_dir, "comparison.json")))
            path = os.path.join(out_dir, "comparison.txt")
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                f.write(render_table(report))
            written.append(path)
    except OSError as exc:
        raise OutputError(f"cannot write results to {out_dir!r}: {exc}") from exc

    return written
