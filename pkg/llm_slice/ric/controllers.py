"""Quota controllers of the RIC.

The proportional-demand controller scores every active slice by

    D = backlog_bytes + ewma(arrived_bytes per window)

and gives each slice ``q = clip(lam * D, min_share, max_share)`` with ``lam`` chosen
so that the shares sum to 1 (or every slice sits at its max_share when even that
is not enough). The fixed point is found by clamp-and-redistribute: share the
unclamped budget in proportion to demand, then pin either the slices above their
max or the slices below their min, whichever side overshoots more in total, and
repeat. Each round pins at least one slice.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, MutableMapping, Optional, Tuple

from llm_slice.config.enums import SchedulerModes
from llm_slice.config.settings import Settings
from llm_slice.engine.events import SimTime
from llm_slice.errors import InfeasibleBoundsError, ModeMismatchError
from llm_slice.mac.partition import QuotaVector
from llm_slice.mac.scheduler import MacScheduler
from llm_slice.ric.estimators import EwmaEstimator, ewma_update
from llm_slice.ric.kpi import KpiReport
from llm_slice.slicectl.fsm import SliceDescriptor

__all__ = [
    "QuotaDecision",
    "QuotaController",
    "ProportionalDemandController",
    "solve_bounded_shares",
    "compute_quotas",
    "apply_decision",
]

logger = logging.getLogger(__name__)

Bounds = Tuple[float, float]


@dataclass(frozen=True)
class QuotaDecision:
    epoch: int
    quotas: QuotaVector
    rationale: Dict[str, float] = field(default_factory=dict)
    """demand score (bytes) per slice"""


def solve_bounded_shares(weights: Mapping[str, float], bounds: Mapping[str, Bounds]) -> Dict[str, float]:
    """Shares proportional to ``weights`` that respect per-slice [min, max] bounds.

    Args:
        weights: non-negative weight per slice. All zero means equal weights.
        bounds: (min_share, max_share) per slice, same keys as ``weights``.

    Returns:
        Dict[str, float]: share per slice, sorted by slice_id.

    Raises:
        InfeasibleBoundsError: the min_shares sum above 1.
    """

    slices = sorted(weights)
    if sum(bounds[s][0] for s in slices) > 1 + Settings.SHARE_TOLERANCE:
        raise InfeasibleBoundsError(
            f"min_shares of {slices} sum to {sum(bounds[s][0] for s in slices):.6g} > 1"
        )
    if any(weights[s] < 0 for s in slices):
        raise ValueError(f"demand weights must be >= 0, got {dict(weights)}")
    if sum(weights[s] for s in slices) == 0:
        weights = {s: 1.0 for s in slices}

    shares: Dict[str, float] = {}
    free = list(slices)
    while free:
        budget = 1.0 - sum(shares.values())
        total_weight = sum(weights[s] for s in free)
        if total_weight == 0:
            for s in free:
                shares[s] = bounds[s][0]
            break

        trial = {s: budget * weights[s] / total_weight for s in free}
        over = [s for s in free if trial[s] > bounds[s][1]]
        under = [s for s in free if trial[s] < bounds[s][0]]
        if not over and not under:
            shares.update(trial)
            break

        excess = sum(trial[s] - bounds[s][1] for s in over)
        deficit = sum(bounds[s][0] - trial[s] for s in under)
        if excess >= deficit:
            pinned = {s: bounds[s][1] for s in over}
        else:
            pinned = {s: bounds[s][0] for s in under}
        shares.update(pinned)
        free = [s for s in free if s not in pinned]

    return {s: min(max(shares[s], bounds[s][0]), bounds[s][1]) for s in slices}


def compute_quotas(
    reports: Iterable[KpiReport],
    estimators: MutableMapping[str, EwmaEstimator],
    descriptors: Mapping[str, SliceDescriptor],
    epoch: int = 0,
    alpha: float = Settings.RIC_ALPHA,
) -> QuotaDecision:
    """One control step: smooth arrivals, score demand, solve the bounded shares.

    ``estimators`` is updated in place; slices seen for the first time get a fresh
    estimator with ``alpha``.

    Example:

    .. code-block:: python

        # D = {A: 300_000, B: 100_000}, bounds [0.1, 0.9] -> {A: 0.75, B: 0.25}
    """

    demand: Dict[str, float] = {}
    for report in sorted(reports, key=lambda r: r.slice_id):
        est = estimators.get(report.slice_id) or EwmaEstimator(alpha=alpha)
        est = ewma_update(est, report.arrived_bytes)
        estimators[report.slice_id] = est
        demand[report.slice_id] = report.backlog_bytes + est.value

    bounds = {s: (descriptors[s].min_share, descriptors[s].max_share) for s in demand}
    shares = solve_bounded_shares(demand, bounds)
    return QuotaDecision(epoch=epoch, quotas=QuotaVector(shares), rationale=demand)


def apply_decision(
    mac: MacScheduler,
    decision: QuotaDecision,
    now: SimTime,
    control_delay_us: SimTime = 0,
) -> SimTime:
    """Hand a decision to the MAC.

    The new quotas hold from the first TTI boundary strictly after ``now + control_delay_us``;
    until then the previous vector stays in force.

    Returns:
        SimTime: start of the first TTI scheduled with the new quotas.

    Raises:
        ModeMismatchError: the MAC is not in dynamic mode.
    """

    if mac.mode.kind != SchedulerModes.DYNAMIC:
        raise ModeMismatchError(f"quota decisions need dynamic mode, the MAC runs {mac.mode.name}")

    tti_us = mac.tti.tti_us
    effective = ((now + control_delay_us) // tti_us + 1) * tti_us
    mac.schedule_quota(effective, decision.quotas)
    return effective


class QuotaController(ABC):
    """Turns one epoch of KPI reports into a quota decision."""

    @abstractmethod
    def decide(
        self,
        epoch: int,
        reports: Iterable[KpiReport],
        descriptors: Mapping[str, SliceDescriptor],
    ) -> Optional[QuotaDecision]:
        """Return the decision for ``epoch``, or None to keep the current quotas."""


class ProportionalDemandController(QuotaController):
    """Clamped proportional-demand control with EWMA-smoothed arrivals.

    Args:
        alpha (float): EWMA smoothing factor in (0, 1].
    """

    def __init__(self, alpha: float = Settings.RIC_ALPHA) -> None:
        if not 0 < alpha <= 1:
            raise ValueError(f"alpha must be in (0, 1], got {alpha = }")
        self.alpha = alpha
        self.estimators: Dict[str, EwmaEstimator] = {}

    def decide(self, epoch, reports, descriptors):
        reports = list(reports)
        if not reports:
            return None
        decision = compute_quotas(reports, self.estimators, descriptors, epoch=epoch, alpha=self.alpha)
        logger.debug("epoch %d quotas %s", epoch, decision.quotas.as_dict())
        return decision
