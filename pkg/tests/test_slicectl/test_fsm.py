import itertools

import numpy as np
import pytest

from llm_slice.config.enums import MessageKinds, SliceStates
from llm_slice.errors import ConfigurationError, InvalidQuotaError, InvalidTransitionError
from llm_slice.slicectl import TERMINAL_STATES, TRANSITIONS, ControlMessage, SessionTable, SliceDescriptor, fsm_step

EXPECTED = {
    (SliceStates.REQUESTED, "register"): SliceStates.REGISTERED,
    (SliceStates.REGISTERED, "permission-query"): SliceStates.CHECKING,
    (SliceStates.CHECKING, "permission-reply(ok)"): SliceStates.ACTIVE,
    (SliceStates.CHECKING, "permission-reply(deny)"): SliceStates.REJECTED,
    (SliceStates.ACTIVE, "release"): SliceStates.RELEASED,
}


def _messages():
    for kind in MessageKinds:
        if kind == MessageKinds.PERMISSION_REPLY:
            yield ControlMessage(kind, "llama", "ue1", 0, ok=True)
            yield ControlMessage(kind, "llama", "ue1", 0, ok=False)
        else:
            yield ControlMessage(kind, "llama", "ue1", 0)


def test_every_state_message_pair():
    for state, message in itertools.product(SliceStates, _messages()):
        expected = EXPECTED.get((state, message.label))
        if expected is None:
            with pytest.raises(InvalidTransitionError):
                fsm_step(state, message)
        else:
            assert fsm_step(state, message) == expected

    assert len(TRANSITIONS) == len(EXPECTED)
    assert TERMINAL_STATES == {SliceStates.REJECTED, SliceStates.RELEASED}


def test_examples():
    register = ControlMessage(MessageKinds.REGISTER, "llama", "ue1", 0)
    assert fsm_step(SliceStates.REQUESTED, register) == SliceStates.REGISTERED
    with pytest.raises(InvalidTransitionError):
        fsm_step(SliceStates.ACTIVE, register)


def test_reply_needs_a_verdict():
    with pytest.raises(ValueError):
        ControlMessage(MessageKinds.PERMISSION_REPLY, "llama", "ue1", 0)


def test_random_sequences_never_activate_without_approval():
    rng = np.random.default_rng(0)
    messages = list(_messages())
    for _ in range(10_000):
        table = SessionTable(strict=False)
        table.open("llama", "ue1")
        approved = False
        for index in rng.integers(0, len(messages), size=8):
            message = messages[index]
            before = table.state_of("llama", "ue1")
            after = table.apply(message)
            if before == SliceStates.CHECKING and message.kind == MessageKinds.PERMISSION_REPLY and message.ok:
                approved = True
                assert after == SliceStates.ACTIVE
            if table.state_of("llama", "ue1") == SliceStates.ACTIVE:
                assert approved


def test_session_table_modes():
    strict = SessionTable()
    strict.open("llama", "ue1")
    with pytest.raises(InvalidTransitionError):
        strict.apply(ControlMessage(MessageKinds.RELEASE, "llama", "ue1", 0))
    with pytest.raises(InvalidTransitionError):
        strict.apply(ControlMessage(MessageKinds.REGISTER, "bard", "ue1", 0))

    lenient = SessionTable(strict=False)
    lenient.open("llama", "ue1")
    assert lenient.apply(ControlMessage(MessageKinds.RELEASE, "llama", "ue1", 0)) is None
    assert lenient.invalid_transitions == 1
    assert lenient.state_of("llama", "ue1") == SliceStates.REQUESTED


def test_session_walk():
    table = SessionTable()
    table.open("llama", "ue1")
    for kind, ok in [
        (MessageKinds.REGISTER, None),
        (MessageKinds.PERMISSION_QUERY, None),
        (MessageKinds.PERMISSION_REPLY, True),
    ]:
        table.apply(ControlMessage(kind, "llama", "ue1", 0, ok))

    assert table.is_slice_active("llama")
    assert [s.key for s in table.active_sessions()] == [("llama", "ue1")]
    assert not table.is_slice_active("bard")


def test_descriptor_bounds():
    assert SliceDescriptor("llama", "llama", 0.2, 0.8).fixed_share == 0.2
    assert SliceDescriptor("llama", "llama", 0.2, 0.8, static_share=0.5).fixed_share == 0.5
    assert SliceDescriptor("background", "", 0.0, 0.3).is_background
    with pytest.raises(ConfigurationError):
        SliceDescriptor("llama", "llama", 0.6, 0.4)
    with pytest.raises(ConfigurationError):
        SliceDescriptor("llama", "llama", 0.2, 1.2)


@pytest.mark.parametrize("static_share", [0.1, 0.9])
def test_static_share_within_bounds(static_share):
    with pytest.raises(InvalidQuotaError):
        SliceDescriptor("background", "", 0.2, 0.8, static_share=static_share)
    assert SliceDescriptor("background", "", 0.2, 0.8, static_share=0.8).fixed_share == 0.8
