"""Slice descriptors, control-plane messages and the slice session state machine.

The session of a UE on an LLM slice walks

    Requested --Register--> Registered --PermissionQuery--> Checking
    Checking --PermissionReply(ok)--> Active --Release--> Released
    Checking --PermissionReply(deny)--> Rejected

Every other (state, message) pair is an invalid transition. Rejected and Released
are terminal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from llm_slice.config.enums import MessageKinds, SliceStates
from llm_slice.config.settings import Settings
from llm_slice.engine.events import SimTime
from llm_slice.errors import ConfigurationError, InvalidQuotaError, InvalidTransitionError

__all__ = [
    "SliceDescriptor",
    "ControlMessage",
    "TRANSITIONS",
    "TERMINAL_STATES",
    "fsm_step",
]


@dataclass(frozen=True)
class SliceDescriptor:
    """Resource bounds of one slice.

    Args:
        slice_id (str): unique label.
        service_id (str): LLM service carried by the slice ("" for the background slice).
        min_share (float): guaranteed fraction of the PRB grid.
        max_share (float): cap on the fraction of the PRB grid.
        priority (int): display order only.
        static_share (float, optional): fixed partition in static mode and first
            quota in dynamic mode, within [min_share, max_share]. Defaults to ``min_share``.
    """

    slice_id: str
    service_id: str
    min_share: float
    max_share: float
    priority: int = 0
    static_share: Optional[float] = None

    def __post_init__(self):
        if not 0 <= self.min_share <= self.max_share <= 1:
            raise ConfigurationError(
                f"slice {self.slice_id!r} needs 0 <= min_share <= max_share <= 1, "
                f"got {self.min_share = }, {self.max_share = }"
            )
        if self.static_share is not None and not self.min_share <= self.static_share <= self.max_share:
            raise InvalidQuotaError(
                f"slice {self.slice_id!r} static_share {self.static_share} outside "
                f"[{self.min_share}, {self.max_share}]"
            )

    @property
    def is_background(self) -> bool:
        return self.slice_id == Settings.BACKGROUND_SLICE_ID

    @property
    def fixed_share(self) -> float:
        return self.min_share if self.static_share is None else self.static_share


@dataclass(frozen=True)
class ControlMessage:
    """One control-plane message. ``ok`` is the verdict of a PermissionReply."""

    kind: MessageKinds
    slice_id: str
    ue_id: str
    t_sent: SimTime
    ok: Optional[bool] = None

    def __post_init__(self):
        if self.kind == MessageKinds.PERMISSION_REPLY and self.ok is None:
            raise ValueError("a permission reply must carry its verdict (ok=True/False)")

    @property
    def label(self) -> str:
        if self.kind == MessageKinds.PERMISSION_REPLY:
            return f"{self.kind.value}({'ok' if self.ok else 'deny'})"
        return self.kind.value


TRANSITIONS: Dict[Tuple[SliceStates, MessageKinds, Optional[bool]], SliceStates] = {
    (SliceStates.REQUESTED, MessageKinds.REGISTER, None): SliceStates.REGISTERED,
    (SliceStates.REGISTERED, MessageKinds.PERMISSION_QUERY, None): SliceStates.CHECKING,
    (SliceStates.CHECKING, MessageKinds.PERMISSION_REPLY, True): SliceStates.ACTIVE,
    (SliceStates.CHECKING, MessageKinds.PERMISSION_REPLY, False): SliceStates.REJECTED,
    (SliceStates.ACTIVE, MessageKinds.RELEASE, None): SliceStates.RELEASED,
}
"""(state, message kind, reply verdict) -> next state. The verdict is None except for replies."""

TERMINAL_STATES = frozenset({SliceStates.REJECTED, SliceStates.RELEASED})


def fsm_step(state: SliceStates, message: ControlMessage) -> SliceStates:
    """Next session state after ``message``.

    Raises:
        InvalidTransitionError: the pair is not in the transition table.
    """

    verdict = bool(message.ok) if message.kind == MessageKinds.PERMISSION_REPLY else None
    try:
        return TRANSITIONS[(state, message.kind, verdict)]
    except KeyError:
        raise InvalidTransitionError(state.value, message.label) from None
