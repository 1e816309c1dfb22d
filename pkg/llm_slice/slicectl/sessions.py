"""Per (slice, UE) sessions driven by control messages."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from llm_slice.config.enums import SliceStates
from llm_slice.errors import InvalidTransitionError
from llm_slice.slicectl.fsm import ControlMessage, fsm_step

__all__ = [
    "SliceSession",
    "SessionTable",
]

logger = logging.getLogger(__name__)

SessionKey = Tuple[str, str]
"""(slice_id, ue_id)"""


@dataclass
class SliceSession:
    slice_id: str
    ue_id: str
    state: SliceStates = SliceStates.REQUESTED
    waiting: List[int] = field(default_factory=list)
    """request ids held back until the session is Active"""

    @property
    def key(self) -> SessionKey:
        return (self.slice_id, self.ue_id)


class SessionTable:
    """All slice sessions of a run.

    Args:
        strict (bool): raise on an invalid transition. When False the message is
            ignored and counted in ``invalid_transitions``.
    """

    def __init__(self, strict: bool = True) -> None:
        self.strict = strict
        self.invalid_transitions = 0
        self._sessions: Dict[SessionKey, SliceSession] = {}

    def get(self, slice_id: str, ue_id: str) -> Optional[SliceSession]:
        return self._sessions.get((slice_id, ue_id))

    def open(self, slice_id: str, ue_id: str, state: SliceStates = SliceStates.REQUESTED) -> SliceSession:
        session = SliceSession(slice_id, ue_id, state)
        self._sessions[session.key] = session
        return session

    def state_of(self, slice_id: str, ue_id: str) -> Optional[SliceStates]:
        session = self.get(slice_id, ue_id)
        return session.state if session else None

    def apply(self, message: ControlMessage) -> Optional[SliceStates]:
        """Feed ``message`` to its session and return the new state.

        Returns None when the message was dropped as invalid (lenient mode only).

        Raises:
            InvalidTransitionError: strict mode, and the message does not fit the session state.
        """

        session = self.get(message.slice_id, message.ue_id)
        try:
            if session is None:
                raise InvalidTransitionError("none", message.label)
            session.state = fsm_step(session.state, message)
        except InvalidTransitionError:
            if self.strict:
                raise
            self.invalid_transitions += 1
            logger.info("ignored %s for %s/%s", message.label, message.slice_id, message.ue_id)
            return None
        return session.state

    def active_sessions(self) -> List[SliceSession]:
        return [s for _, s in sorted(self._sessions.items()) if s.state == SliceStates.ACTIVE]

    def is_slice_active(self, slice_id: str) -> bool:
        return any(
            s.state == SliceStates.ACTIVE for key, s in self._sessions.items() if key[0] == slice_id
        )

    def __iter__(self) -> Iterator[SliceSession]:
        return iter(s for _, s in sorted(self._sessions.items()))

    def __len__(self) -> int:
        return len(self._sessions)
