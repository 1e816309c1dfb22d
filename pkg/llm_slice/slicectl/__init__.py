"""
llm_slice.slicectl
==================

Slice lifecycle and the core-network role: slice registration with admission
control, the permissions database, and the per-UE slice session state machine.

Classes:
- SliceDescriptor: quota bounds of one slice.
- ControlMessage: one control-plane message.
- PermissionRecord / PermissionDb: who may use which LLM service.
- SliceRegistry: admitted slices.
- SliceSession / SessionTable: per (slice, UE) lifecycle state.

Functions:
- fsm_step: the session transition table.
- authorize: default-deny permission lookup.
- load_permissions: parse the permissions CSV.
- register_slice: admit a slice into a registry.
"""

from llm_slice.slicectl.fsm import (
    TERMINAL_STATES,
    TRANSITIONS,
    ControlMessage,
    SliceDescriptor,
    fsm_step,
)
from llm_slice.slicectl.permissions import (
    PermissionDb,
    PermissionRecord,
    authorize,
    load_permissions,
)
from llm_slice.slicectl.registry import SliceRegistry, register_slice
from llm_slice.slicectl.sessions import SessionTable, SliceSession

__all__ = [
    "ControlMessage",
    "PermissionDb",
    "PermissionRecord",
    "SessionTable",
    "SliceDescriptor",
    "SliceRegistry",
    "SliceSession",
    "TERMINAL_STATES",
    "TRANSITIONS",
    "authorize",
    "fsm_step",
    "load_permissions",
    "register_slice",
]
