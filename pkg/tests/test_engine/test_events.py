import pytest

from llm_slice.config.enums import EventKinds
from llm_slice.engine import EventQueue, ms_to_us, us_to_ms
from llm_slice.errors import PastTimeError


def test_empty_queue():
    queue = EventQueue()
    assert queue.pop_next() is None
    assert queue.peek_time() is None
    assert not queue


def test_min_time_first():
    queue = EventQueue()
    queue.schedule(5, EventKinds.TTI_TICK, "a")
    queue.schedule(3, EventKinds.TTI_TICK, "b")

    event = queue.pop_next()
    assert (event.time, event.seq, event.payload) == (3, 1, "b")
    assert queue.clock == 3


def test_same_time_keeps_scheduling_order():
    queue = EventQueue()
    queue.schedule(5000, EventKinds.TTI_TICK, "A")
    queue.schedule(5000, EventKinds.RIC_TICK, "B")
    queue.schedule(4000, EventKinds.TOKEN_READY, "C")

    assert [queue.pop_next().payload for _ in range(3)] == ["C", "A", "B"]


def test_schedule_at_clock_is_dispatched_before_later_events():
    queue = EventQueue()
    queue.schedule(10, EventKinds.TTI_TICK, "first")
    queue.schedule(20, EventKinds.TTI_TICK, "later")
    queue.pop_next()

    queue.schedule(10, EventKinds.TOKEN_READY, "now")
    assert queue.pop_next().payload == "now"
    assert queue.pop_next().payload == "later"


def test_schedule_in_the_past():
    queue = EventQueue()
    queue.schedule(10, EventKinds.TTI_TICK)
    queue.pop_next()

    with pytest.raises(PastTimeError):
        queue.schedule(9, EventKinds.TTI_TICK)


def test_time_units():
    assert ms_to_us(2.5) == 2500
    assert ms_to_us(0.15) == 150
    assert us_to_ms(1500) == 1.5
