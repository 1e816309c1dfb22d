"""Request and response generators.

All functions are pure given their RngStream: the same stream state produces the
same requests and token streams.

Functions:
- sample_request_arrivals: Markov-modulated Poisson request times of one UE for one service.
- sample_token_stream: heavy-tailed (clamped lognormal) response length of one request.
- token_enqueue_schedule: when each token of a response reaches the gNB queue.
- expected_token_count: numerical-integration mean of the clamped lognormal length.
- offered_load_bytes_per_s: long-run downlink bytes per second of one arrival process.
"""

from __future__ import annotations

import math
from typing import List, Tuple

from scipy import integrate, stats

from llm_slice.config.settings import Settings
from llm_slice.engine.events import SimTime, ms_to_us
from llm_slice.engine.rng import RngStream
from llm_slice.workload.profiles import (
    ArrivalProcess,
    LlmRequest,
    ServiceProfile,
    TokenStream,
)

__all__ = [
    "sample_request_arrivals",
    "sample_token_stream",
    "token_enqueue_schedule",
    "expected_token_count",
    "offered_load_bytes_per_s",
]

_US_PER_S = 1_000_000


def _homogeneous_times(rate_per_s: float, horizon: SimTime, rng: RngStream) -> List[float]:
    times = []
    mean_gap_us = _US_PER_S / rate_per_s
    t = 0.0
    while True:
        t += rng.exponential(mean_gap_us)
        if t >= horizon:
            return times
        times.append(t)


def _modulated_times(proc: ArrivalProcess, horizon: SimTime, rng: RngStream) -> List[float]:
    times = []
    on = False
    t = 0.0
    phase_end = rng.exponential(proc.burst_off_ms * 1000)
    while t < horizon:
        rate = proc.rate_per_s * (proc.burst_multiplier if on else 1.0)
        gap = rng.exponential(_US_PER_S / rate)
        if t + gap < phase_end:
            t += gap
            if t < horizon:
                times.append(t)
            continue
        # memoryless: the unfinished gap is dropped at the phase switch
        t = phase_end
        on = not on
        phase_end = t + rng.exponential((proc.burst_on_ms if on else proc.burst_off_ms) * 1000)
    return times


def _to_sim_times(times: List[float], horizon: SimTime) -> List[SimTime]:
    result: List[SimTime] = []
    last = -1
    for t in times:
        tick = max(int(t), last + 1)
        if tick >= horizon:
            break
        result.append(tick)
        last = tick
    return result


def sample_request_arrivals(
    proc: ArrivalProcess,
    ue_id: str,
    horizon: SimTime,
    rng: RngStream,
    service_id: str = "",
    first_request_id: int = 0,
    prompt_bytes: int = Settings.PROMPT_BYTES,
) -> List[LlmRequest]:
    """Sample the requests one UE issues for one service before ``horizon``.

    Within on phases the Poisson rate is ``rate_per_s * burst_multiplier``, otherwise
    ``rate_per_s``; phase dwell times are exponential. With ``burst_multiplier == 1``
    no phase is drawn at all and the output is a plain homogeneous Poisson process.

    Args:
        proc (ArrivalProcess): rate and burst parameters.
        ue_id (str): requesting UE.
        horizon (SimTime): end of the sampling window (exclusive), microseconds.
        rng (RngStream): the stream to draw from.
        service_id (str, optional): requested service. Defaults to "".
        first_request_id (int, optional): id of the first returned request; the rest count up.

    Returns:
        List[LlmRequest]: requests with strictly increasing ``t_arrival``.
    """

    if horizon <= 0:
        raise ValueError(f"horizon must be positive, got {horizon = }")
    if proc.rate_per_s == 0:
        return []

    if proc.is_modulated:
        raw = _modulated_times(proc, horizon, rng)
    else:
        raw = _homogeneous_times(proc.rate_per_s, horizon, rng)

    return [
        LlmRequest(
            request_id=first_request_id + i,
            ue_id=ue_id,
            service_id=service_id,
            t_arrival=t,
            prompt_bytes=prompt_bytes,
        )
        for i, t in enumerate(_to_sim_times(raw, horizon))
    ]


def sample_token_stream(profile: ServiceProfile, request_id: int, rng: RngStream) -> TokenStream:
    """Draw the response of one request.

    ``n_tokens = round(exp(N(tokens_mu, tokens_sigma)))`` clamped to the profile bounds.
    """

    z = rng.normal(profile.tokens_mu, profile.tokens_sigma)
    length = math.exp(min(z, 700.0))
    n_tokens = int(round(min(max(length, profile.tokens_min), profile.tokens_max)))

    return TokenStream(
        request_id=request_id,
        n_tokens=n_tokens,
        first_token_delay_ms=profile.first_token_delay_ms,
        token_interval_ms=profile.token_interval_ms,
        bytes_per_token=profile.bytes_per_token,
    )


def token_enqueue_schedule(stream: TokenStream, t_start: SimTime) -> List[Tuple[SimTime, int]]:
    """(time, bytes) of every token of ``stream`` when generation starts at ``t_start``.

    Token k (0-based) is ready at ``t_start + first_token_delay + k * token_interval``.
    """

    if t_start < 0:
        raise ValueError(f"t_start must be >= 0, got {t_start = }")

    first = t_start + ms_to_us(stream.first_token_delay_ms)
    interval = ms_to_us(stream.token_interval_ms)
    return [(first + k * interval, stream.bytes_per_token) for k in range(stream.n_tokens)]


def expected_token_count(profile: ServiceProfile) -> float:
    """Mean response length in tokens, by numerical integration of the clamped lognormal.

    Rounding to whole tokens is ignored (it shifts the mean by well under one token).
    """

    low, high = profile.tokens_min, profile.tokens_max
    if profile.tokens_sigma == 0:
        return float(min(max(math.exp(profile.tokens_mu), low), high))

    def integrand(z: float) -> float:
        return min(max(math.exp(z), low), high) * stats.norm.pdf(
            z, loc=profile.tokens_mu, scale=profile.tokens_sigma
        )

    span = 12 * profile.tokens_sigma
    a, b = profile.tokens_mu - span, profile.tokens_mu + span
    breaks = [p for p in (math.log(low), math.log(high)) if a < p < b]
    value, _ = integrate.quad(integrand, a, b, points=breaks or None, limit=200)
    return float(value)


def offered_load_bytes_per_s(profile: ServiceProfile, proc: ArrivalProcess) -> float:
    """Long-run downlink bytes per second one arrival process generates."""

    return proc.mean_rate_per_s * expected_token_count(profile) * profile.bytes_per_token
