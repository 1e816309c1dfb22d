"""
llm_slice.workload
==================

LLM request and response traffic, plus constant-bit-rate background load.

Classes:
- ServiceProfile: response length and pacing of one LLM service.
- ArrivalProcess: bursty (two-state modulated Poisson) request process.
- LlmRequest: one request from a UE.
- TokenStream: one response as fixed-size token payloads.
- BackgroundFlow: constant offered load of one UE.

Functions:
- sample_request_arrivals, sample_token_stream, token_enqueue_schedule,
  expected_token_count, offered_load_bytes_per_s
"""

from llm_slice.workload.generators import (
    expected_token_count,
    offered_load_bytes_per_s,
    sample_request_arrivals,
    sample_token_stream,
    token_enqueue_schedule,
)
from llm_slice.workload.profiles import (
    ArrivalProcess,
    BackgroundFlow,
    LlmRequest,
    ServiceProfile,
    TokenStream,
)

__all__ = [
    "ArrivalProcess",
    "BackgroundFlow",
    "LlmRequest",
    "ServiceProfile",
    "TokenStream",
    "expected_token_count",
    "offered_load_bytes_per_s",
    "sample_request_arrivals",
    "sample_token_stream",
    "token_enqueue_schedule",
]
