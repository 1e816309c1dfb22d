"""Centralized String Constants for the llm_slice Package

This module defines enumerations for the string constants used throughout the package.

Enumerations:
    EventKinds (Enum): Kinds of events handled by the simulation loop.
    SchedulerModes (Enum): How the MAC partitions downlink PRBs.
    SliceStates (Enum): Lifecycle states of a slice session.
    MessageKinds (Enum): Control-plane messages exchanged by UE, gNB and core network.
    TraceKinds (Enum): Record kinds written into a run trace.
    LogLevels (Enum): Accepted values of the LLMSLICE_LOG environment variable.

Functions:
    normalize_short_code (function): Normalizes a provided short code to a recognized standard form.
"""

from __future__ import annotations

from enum import Enum
from typing import Union

from llm_slice.utils.utils import (
    PrintableEnumMeta,
    search_in_values_to_retrieve_key,
)

__all__ = [
    "EventKinds",
    "SchedulerModes",
    "SliceStates",
    "MessageKinds",
    "TraceKinds",
    "LogLevels",
    "normalize_short_code",
]


class EventKinds(Enum, metaclass=PrintableEnumMeta):
    """
    Enumeration of simulation event kinds.

    Attributes:
        - REQUEST_ARRIVAL: a UE issues an LLM service request.
        - TOKEN_READY: one generated token enters the downlink queue.
        - TTI_TICK: start of a transmission time interval.
        - RIC_TICK: end of a RIC reporting epoch.
        - CONTROL_MESSAGE: a control-plane message reaches its destination.
        - TIMEOUT_CHECK: periodic head-of-line timeout scan.
        - HORIZON_END: end of the simulated period.
    """

    REQUEST_ARRIVAL = "request-arrival"
    TOKEN_READY = "token-ready"
    TTI_TICK = "tti-tick"
    RIC_TICK = "ric-tick"
    CONTROL_MESSAGE = "control-message"
    TIMEOUT_CHECK = "timeout-check"
    HORIZON_END = "horizon-end"


class SchedulerModes(Enum, metaclass=PrintableEnumMeta):
    """
    Enumeration of MAC scheduler modes.

    Attributes:
        - SHARED: one common PRB pool for every UE (baseline 5G, no slicing).
        - STATIC: fixed per-slice partitions.
        - DYNAMIC: per-slice partitions re-computed by the RIC every epoch.
    """

    SHARED = "shared"
    STATIC = "static"
    DYNAMIC = "dynamic"


class SliceStates(Enum, metaclass=PrintableEnumMeta):
    REQUESTED = "requested"
    REGISTERED = "registered"
    CHECKING = "checking"
    ACTIVE = "active"
    REJECTED = "rejected"
    RELEASED = "released"


class MessageKinds(Enum, metaclass=PrintableEnumMeta):
    """
    Enumeration of control-plane message kinds.

    PERMISSION_REPLY carries its verdict in ``ControlMessage.ok``.
    ACTIVATE and REJECT are notifications to the UE and never drive the state machine.
    """

    SLICE_REQUEST = "slice-request"
    REGISTER = "register"
    PERMISSION_QUERY = "permission-query"
    PERMISSION_REPLY = "permission-reply"
    ACTIVATE = "activate"
    REJECT = "reject"
    RELEASE = "release"


class TraceKinds(Enum, metaclass=PrintableEnumMeta):
    REQUEST = "request"
    TOKEN = "token"
    CONTROL = "control"
    ALLOCATION = "allocation"
    DELIVERY = "delivery"
    DISCONNECT = "disconnect"
    RIC = "ric"
    HORIZON = "horizon"


class LogLevels(Enum, metaclass=PrintableEnumMeta):
    OFF = "off"
    INFO = "info"
    DEBUG = "debug"


def normalize_short_code(short_code: Union[str, Enum]) -> str:
    """
    Normalize the provided short code to a standard form that is recognized package wide.

    Args:
        short_code (str): The short code to be normalized, e.g. "baseline" or "llm-slice".

    Returns:
        str: The normalized short code, or the lower-cased input if it has no alias.
    """

    if isinstance(short_code, Enum):
        short_code = str(short_code.value)

    normalized_to_codes = {
        SchedulerModes.SHARED.value: {"shared", "baseline", "no-slicing", "common"},
        SchedulerModes.STATIC.value: {"static", "fixed", "static-slicing"},
        SchedulerModes.DYNAMIC.value: {"dynamic", "llm-slice", "ric", "dynamic-slicing"},
    }

    normalized = search_in_values_to_retrieve_key(short_code, normalized_to_codes)
    return normalized if normalized else short_code.lower()
