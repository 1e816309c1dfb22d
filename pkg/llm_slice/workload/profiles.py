"""Workload data types: LLM service profiles, arrival processes, requests and
token streams, and constant-bit-rate background flows."""

from __future__ import annotations

from dataclasses import dataclass

from llm_slice.config.settings import Settings
from llm_slice.engine.events import SimTime
from llm_slice.errors import ConfigurationError

__all__ = [
    "ServiceProfile",
    "ArrivalProcess",
    "LlmRequest",
    "TokenStream",
    "BackgroundFlow",
]


@dataclass(frozen=True)
class ServiceProfile:
    """Statistical description of one LLM service's responses.

    The response length is ``round(exp(N(tokens_mu, tokens_sigma)))`` clamped to
    ``[tokens_min, tokens_max]`` tokens of ``bytes_per_token`` bytes each.
    """

    service_id: str
    tokens_mu: float = Settings.TOKENS_MU
    tokens_sigma: float = Settings.TOKENS_SIGMA
    tokens_min: int = Settings.TOKENS_MIN
    tokens_max: int = Settings.TOKENS_MAX
    bytes_per_token: int = Settings.BYTES_PER_TOKEN
    token_interval_ms: float = Settings.TOKEN_INTERVAL_MS
    first_token_delay_ms: float = Settings.FIRST_TOKEN_DELAY_MS

    def __post_init__(self):
        if self.tokens_sigma < 0:
            raise ConfigurationError(f"{self.service_id}: tokens_sigma must be >= 0")
        if self.tokens_min < 1:
            raise ConfigurationError(f"{self.service_id}: tokens_min must be >= 1")
        if self.tokens_min > self.tokens_max:
            raise ConfigurationError(f"{self.service_id}: tokens_min > tokens_max")
        if self.bytes_per_token < 1:
            raise ConfigurationError(f"{self.service_id}: bytes_per_token must be >= 1")
        if self.token_interval_ms < 0:
            raise ConfigurationError(f"{self.service_id}: token_interval_ms must be >= 0")
        if self.first_token_delay_ms < 0:
            raise ConfigurationError(f"{self.service_id}: first_token_delay_ms must be >= 0")


@dataclass(frozen=True)
class ArrivalProcess:
    """Two-state Markov-modulated Poisson process of one UE's requests for one service.

    The process starts in the off phase. Off phases last Exp(burst_off_ms), on phases
    Exp(burst_on_ms); the request rate is ``rate_per_s`` off and
    ``rate_per_s * burst_multiplier`` on.
    """

    rate_per_s: float
    burst_multiplier: float = 1.0
    burst_on_ms: float = 0.0
    burst_off_ms: float = 0.0

    def __post_init__(self):
        if self.rate_per_s < 0:
            raise ConfigurationError(f"rate_per_s must be >= 0, got {self.rate_per_s = }")
        if self.burst_multiplier < 1:
            raise ConfigurationError(f"burst_multiplier must be >= 1, got {self.burst_multiplier = }")
        if self.is_modulated and (self.burst_on_ms <= 0 or self.burst_off_ms <= 0):
            raise ConfigurationError("bursty arrivals need positive burst_on_ms and burst_off_ms")

    @property
    def is_modulated(self) -> bool:
        return self.burst_multiplier != 1

    @property
    def mean_rate_per_s(self) -> float:
        """Long-run request rate of the modulated process."""

        if not self.is_modulated:
            return self.rate_per_s
        on_fraction = self.burst_on_ms / (self.burst_on_ms + self.burst_off_ms)
        return self.rate_per_s * (1 + (self.burst_multiplier - 1) * on_fraction)


@dataclass(frozen=True)
class LlmRequest:
    request_id: int
    ue_id: str
    service_id: str
    t_arrival: SimTime
    prompt_bytes: int = Settings.PROMPT_BYTES


@dataclass(frozen=True)
class TokenStream:
    request_id: int
    n_tokens: int
    first_token_delay_ms: float
    token_interval_ms: float
    bytes_per_token: int

    @property
    def total_bytes(self) -> int:
        return self.n_tokens * self.bytes_per_token


@dataclass(frozen=True)
class BackgroundFlow:
    ue_id: str
    rate_bytes_per_s: float
    packet_bytes: int = 1500

    def __post_init__(self):
        if self.rate_bytes_per_s < 0:
            raise ConfigurationError(f"{self.ue_id}: background rate_bytes_per_s must be >= 0")
        if self.packet_bytes < 1:
            raise ConfigurationError(f"{self.ue_id}: background packet_bytes must be >= 1")
