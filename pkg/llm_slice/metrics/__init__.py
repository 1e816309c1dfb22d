"""
llm_slice.metrics
=================

Run metrics (average completion latency, PRB utilization, downlink stability),
baseline vs treatment comparisons and the result files.

Classes:
- DeliveryRecord: outcome of one LLM response stream.
- StreamLedger: builds delivery records while a run progresses.
- SliceSummary / RunSummary: metrics of one run (or a seed average).
- ComparisonReport: relative improvements of one mode over another.

Functions:
- summarize, summarize_trace, average_summaries
- compare, render_table
- write_outputs
"""

from llm_slice.metrics.comparison import ComparisonReport, compare, render_table
from llm_slice.metrics.outputs import DELIVERY_COLUMNS, write_outputs
from llm_slice.metrics.records import DeliveryRecord, StreamLedger
from llm_slice.metrics.summary import (
    RunSummary,
    SliceSummary,
    average_summaries,
    summarize,
    summarize_trace,
)

__all__ = [
    "ComparisonReport",
    "DELIVERY_COLUMNS",
    "DeliveryRecord",
    "RunSummary",
    "SliceSummary",
    "StreamLedger",
    "average_summaries",
    "compare",
    "render_table",
    "summarize",
    "summarize_trace",
    "write_outputs",
]
