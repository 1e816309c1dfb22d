"""Exponentially weighted moving average of per-window slice traffic."""

from __future__ import annotations

from dataclasses import dataclass, replace

from llm_slice.config.settings import Settings

__all__ = [
    "EwmaEstimator",
    "ewma_update",
]


@dataclass(frozen=True)
class EwmaEstimator:
    """Smoothed estimate. The first observation initializes it as-is."""

    alpha: float = Settings.RIC_ALPHA
    value: float = 0.0
    initialized: bool = False

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha = }")

    def update(self, x: float) -> "EwmaEstimator":
        return ewma_update(self, x)


def ewma_update(est: EwmaEstimator, x: float) -> EwmaEstimator:
    """Fold one observation into the estimate: ``alpha * x + (1 - alpha) * value``."""

    if x < 0:
        raise ValueError(f"observations must be >= 0, got {x = }")
    if not est.initialized:
        return replace(est, value=float(x), initialized=True)
    return replace(est, value=est.alpha * x + (1 - est.alpha) * est.value)
