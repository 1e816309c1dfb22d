"""
llm_slice.ric
=============

The RAN Intelligent Controller: per-epoch KPI reports, EWMA demand smoothing and
quota decisions for the dynamic scheduler mode.

Classes:
- KpiReport: per-slice window counters plus the mean completed response size.
- EwmaEstimator: smoothed per-window arrivals.
- QuotaDecision: quotas of one epoch with their demand scores.
- QuotaController: controller interface.
- ProportionalDemandController: clamped proportional-demand controller.

Functions:
- build_report, start_window, ewma_update, solve_bounded_shares, compute_quotas, apply_decision
"""

from llm_slice.ric.controllers import (
    ProportionalDemandController,
    QuotaController,
    QuotaDecision,
    apply_decision,
    compute_quotas,
    solve_bounded_shares,
)
from llm_slice.ric.estimators import EwmaEstimator, ewma_update
from llm_slice.ric.kpi import KpiReport, build_report, start_window

__all__ = [
    "EwmaEstimator",
    "KpiReport",
    "ProportionalDemandController",
    "QuotaController",
    "QuotaDecision",
    "apply_decision",
    "build_report",
    "compute_quotas",
    "ewma_update",
    "solve_bounded_shares",
    "start_window",
]
