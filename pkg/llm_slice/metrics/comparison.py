"""Baseline vs treatment comparison and its fixed-width text table."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, Optional

from llm_slice.errors import DivisionByZeroMetricError
from llm_slice.metrics.summary import RunSummary

__all__ = [
    "ComparisonReport",
    "compare",
    "render_table",
]


@dataclass(frozen=True)
class ComparisonReport:
    """Relative improvements of ``treatment`` over ``baseline`` as fractions.

    Latency improves when it drops; utilization and stability improve when they rise.
    """

    baseline: RunSummary
    treatment: RunSummary
    latency_improvement: float
    utilization_improvement: float
    stability_improvement: float

    @property
    def latency_improvement_pct(self) -> float:
        return round(100 * self.latency_improvement, 1)

    @property
    def utilization_improvement_pct(self) -> float:
        return round(100 * self.utilization_improvement, 1)

    @property
    def stability_improvement_pct(self) -> float:
        return round(100 * self.stability_improvement, 1)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "baseline_mode": self.baseline.mode,
            "treatment_mode": self.treatment.mode,
            "latency_improvement": self.latency_improvement,
            "utilization_improvement": self.utilization_improvement,
            "stability_improvement": self.stability_improvement,
            "latency_improvement_pct": self.latency_improvement_pct,
            "utilization_improvement_pct": self.utilization_improvement_pct,
            "stability_improvement_pct": self.stability_improvement_pct,
            "baseline": self.baseline.to_dict(),
            "treatment": self.treatment.to_dict(),
        }


def _base(value: Optional[float], name: str) -> float:
    if value is None or value <= 0:
        raise DivisionByZeroMetricError(f"baseline {name} is {value!r}; no relative improvement exists")
    return value


def _treat(value: Optional[float], name: str) -> float:
    if value is None:
        raise DivisionByZeroMetricError(f"treatment {name} is missing")
    return value


def compare(baseline: RunSummary, treatment: RunSummary) -> ComparisonReport:
    """Relative improvements of ``treatment`` over ``baseline``.

    Example:

    .. code-block:: python

        # latency 250 -> 120 ms, utilization 0.65 -> 0.85, stability 0.92 -> 0.99
        report = compare(baseline, treatment)
        report.latency_improvement_pct      # 52.0
        report.utilization_improvement_pct  # 30.8
        report.stability_improvement_pct    # 7.6

    Raises:
        DivisionByZeroMetricError: a baseline metric is zero or missing.
    """

    base_latency = _base(baseline.mean_completion_latency_ms, "latency")
    base_util = _base(baseline.utilization, "utilization")
    base_stab = _base(baseline.stability, "stability")

    return ComparisonReport(
        baseline=baseline,
        treatment=treatment,
        latency_improvement=(base_latency - _treat(treatment.mean_completion_latency_ms, "latency")) / base_latency,
        utilization_improvement=(_treat(treatment.utilization, "utilization") - base_util) / base_util,
        stability_improvement=(_treat(treatment.stability, "stability") - base_stab) / base_stab,
    )


def render_table(report: ComparisonReport) -> str:
    """The comparison as a fixed-width table with one row per metric.

    .. code-block:: text

        Metric                  Baseline   LLM-Slice     Improv.
        Avg. Latency            250.0 ms    120.0 ms       52.0%
        Resource Utilization       65.0%       85.0%       30.8%
        Downlink Stability         92.0%       99.0%        7.6%
    """

    base, treat = report.baseline, report.treatment
    rows = [
        ("Metric", "Baseline", "LLM-Slice", "Improv."),
        (
            "Avg. Latency",
            f"{base.mean_completion_latency_ms:.1f} ms",
            f"{treat.mean_completion_latency_ms:.1f} ms",
            f"{report.latency_improvement_pct:.1f}%",
        ),
        (
            "Resource Utilization",
            f"{100 * base.utilization:.1f}%",
            f"{100 * treat.utilization:.1f}%",
            f"{report.utilization_improvement_pct:.1f}%",
        ),
        (
            "Downlink Stability",
            f"{100 * base.stability:.1f}%",
            f"{100 * treat.stability:.1f}%",
            f"{report.stability_improvement_pct:.1f}%",
        ),
    ]
    return "\n".join(f"{name:<22}{b:>10}{t:>12}{i:>12}" for name, b, t, i in rows) + "\n"
