import numpy as np
import pytest

from llm_slice.errors import ConfigurationError
from llm_slice.mac import MacScheduler, QuotaVector, SchedulerMode, UeQueue, hand_out_round_robin
from llm_slice.radio import TtiConfig


def _mac(kind, quota=None, queues=(), work_conserving=None, n_prb=100):
    return MacScheduler(
        SchedulerMode.of(kind, work_conserving),
        TtiConfig(n_prb=n_prb),
        list(queues),
        initial_quota=QuotaVector(quota) if quota is not None else None,
    )


def test_mode_defaults():
    assert not SchedulerMode.of("static").work_conserving
    assert SchedulerMode.of("dynamic").work_conserving
    assert SchedulerMode.of("static", True).work_conserving
    assert SchedulerMode.of("shared").name == "shared"


def test_sliced_modes_need_a_quota():
    with pytest.raises(ConfigurationError):
        _mac("static")
    _mac("shared")


def test_hand_out_round_robin():
    grants, last = hand_out_round_robin(["a", "b", "c"], {"a": 2, "b": 10, "c": 0}, 7)
    assert grants == {"a": 2, "b": 5}
    assert last == "b"

    assert hand_out_round_robin(["a"], {"a": 0}, 5) == ({}, None)


def test_one_backlogged_ue_takes_the_partition():
    queue = UeQueue("ue1", "A", 120)
    queue.enqueue(0, 1_000_000, 0)
    mac = _mac("static", {"A": 0.6, "B": 0.4}, [queue, UeQueue("ue2", "B", 120)])

    allocation = mac.schedule_tti(mac.current_partition(), 0)
    assert allocation.grants == {("A", "ue1"): 60}


def test_round_robin_cursor_advances():
    queues = [UeQueue("ue1", "A", 120), UeQueue("ue2", "A", 120)]
    for q in queues:
        q.enqueue(0, 1_000_000, 0)
    mac = _mac("static", {"A": 0.61}, queues)

    first = mac.schedule_tti(mac.current_partition(), 0)
    second = mac.schedule_tti(mac.current_partition(), 1)
    assert first.grants == {("A", "ue1"): 31, ("A", "ue2"): 30}
    assert second.grants == {("A", "ue1"): 30, ("A", "ue2"): 31}


def test_no_backlog_no_grants():
    mac = _mac("static", {"A": 1.0}, [UeQueue("ue1", "A", 120)])
    allocation, fragments = mac.run_tti(0, 0)
    assert allocation.grants == {}
    assert fragments == []
    assert mac.allocation_log.total_prbs == 100
    assert mac.allocation_log.used_prbs == 0


@pytest.mark.parametrize("work_conserving, expected", [(True, 100), (False, 50)])
def test_idle_slice_prbs(work_conserving, expected):
    busy = UeQueue("ue1", "A", 120)
    busy.enqueue(0, 1_000_000, 0)
    mac = _mac("static", {"A": 0.5, "B": 0.5}, [busy, UeQueue("ue2", "B", 120)], work_conserving=work_conserving)

    allocation, _ = mac.run_tti(0, 0)
    assert allocation.grants == {("A", "ue1"): expected}
    assert allocation.total_used == expected


def test_reclaimed_prbs_rotate_over_other_slices():
    queues = [UeQueue("ue1", "A", 120), UeQueue("ue2", "B", 120), UeQueue("ue3", "C", 120)]
    for q in queues[1:]:
        q.enqueue(0, 1_000_000, 0)
    mac = _mac("static", {"A": 0.51, "B": 0.25, "C": 0.24}, queues, work_conserving=True)
    assert mac.current_partition() == {"A": 51, "B": 25, "C": 24}

    first, _ = mac.run_tti(0, 0)
    second, _ = mac.run_tti(1, 1000)
    assert first.grants == {("B", "ue2"): 51, ("C", "ue3"): 49}
    assert second.grants == {("B", "ue2"): 50, ("C", "ue3"): 50}
    assert ("A", "ue1") not in first.grants and ("A", "ue1") not in second.grants


def test_delivery_counts_used_prbs():
    queue = UeQueue("ue1", "A", 120)
    queue.enqueue(7, 1000, 0)
    mac = _mac("static", {"A": 0.1}, [queue])
    mac.open_stream(7, ("A", "ue1"), 1000)

    allocation, fragments = mac.run_tti(0, 0)
    assert allocation.grants == {("A", "ue1"): 9}
    assert allocation.per_slice_used == {"A": 9}
    assert [(f.request_id, f.bytes, f.time) for f in fragments] == [(7, 1000, 1000)]


def test_large_backlog_drains_over_two_ttis():
    queue = UeQueue("ue1", "A", 120)
    queue.enqueue(1, 24_000, 0)
    mac = _mac("static", {"A": 1.0}, [queue])
    mac.open_stream(1, ("A", "ue1"), 24_000)

    _, fragments = mac.run_tti(0, 0)
    assert sum(f.bytes for f in fragments) == 12_000
    assert queue.backlog_bytes == 12_000
    mac.run_tti(1, 1000)
    assert queue.backlog_bytes == 0
    assert mac.allocation_log.used_prbs == 200


def test_quota_takes_effect_at_scheduled_time():
    queue = UeQueue("ue1", "A", 120)
    queue.enqueue(0, 1_000_000, 0)
    mac = _mac("dynamic", {"A": 0.2, "B": 0.8}, [queue, UeQueue("ue2", "B", 120)], work_conserving=False)
    mac.schedule_quota(2000, QuotaVector({"A": 0.7, "B": 0.3}))

    assert mac.run_tti(0, 0)[0].grants == {("A", "ue1"): 20}
    assert mac.run_tti(1, 1000)[0].grants == {("A", "ue1"): 20}
    assert mac.run_tti(2, 2000)[0].grants == {("A", "ue1"): 70}

    # identical vector: partition unchanged
    partition = mac.current_partition()
    mac.set_quota(QuotaVector({"A": 0.7, "B": 0.3}))
    assert mac.current_partition() is partition


def test_timeout_boundaries():
    for wait_ms, aborted in ((1999, False), (2001, True)):
        queue = UeQueue("ue1", "A", 120)
        queue.enqueue(3, 100, 0)
        mac = _mac("static", {"A": 1.0}, [queue])
        mac.open_stream(3, ("A", "ue1"), 100)

        disconnections = mac.check_timeouts(wait_ms * 1000, t_disc_ms=2000)
        assert bool(disconnections) is aborted


def test_timeout_purges_all_segments_once():
    queue = UeQueue("ue1", "A", 120)
    for t in (0, 10, 20):
        queue.enqueue(5, 40, t)
    queue.enqueue(6, 40, 2_000_000)
    mac = _mac("static", {"A": 1.0}, [queue])
    mac.open_stream(5, ("A", "ue1"), 200)
    mac.open_stream(6, ("A", "ue1"), 40)

    disconnections = mac.check_timeouts(2_100_000, t_disc_ms=2000)
    assert len(disconnections) == 1
    assert disconnections[0].request_id == 5
    assert disconnections[0].bytes_undelivered == 200
    assert disconnections[0].bytes_wasted == 0
    assert queue.backlog_bytes == 40
    assert mac.counters["A"].disconnects == 1

    # late tokens of the aborted stream are refused, and it is never aborted again
    assert not mac.enqueue(("A", "ue1"), 5, 40, 2_100_000)
    assert mac.check_timeouts(2_200_000, t_disc_ms=2000) == []
    assert mac.is_aborted(5)


def test_stale_background_is_dropped_silently():
    queue = UeQueue("ue7", "background", 120)
    queue.enqueue(None, 1500, 0)
    mac = _mac("static", {"background": 1.0}, [queue])

    assert mac.check_timeouts(700_000, t_disc_ms=650) == []
    assert mac.background_dropped_bytes == 1500
    with pytest.raises(ValueError):
        mac.check_timeouts(0, t_disc_ms=0)


@pytest.mark.parametrize(
    "kind, work_conserving", [("static", False), ("static", True), ("dynamic", False), ("dynamic", True)]
)
def test_prb_conservation_over_random_ttis(kind, work_conserving):
    rng = np.random.default_rng(17)
    slices = ["A", "B", "C"]
    queues = [
        UeQueue(f"ue{u}", s, 12 * int(rng.integers(1, 16))) for s in slices for u in range(int(rng.integers(1, 4)))
    ]
    mac = _mac(kind, {"A": 0.3, "B": 0.3, "C": 0.4}, queues, work_conserving=work_conserving)

    for tti in range(1000):
        if kind == "dynamic":
            raw = rng.dirichlet(np.ones(len(slices))) * rng.uniform(0.5, 1.0)
            mac.set_quota(QuotaVector({s: float(x) for s, x in zip(slices, raw)}))
        for q in queues:
            if rng.random() < 0.5:
                q.enqueue(None, int(rng.integers(1, 20_000)), tti * 1000)

        partition = mac.current_partition()
        allocation, _ = mac.run_tti(tti, tti * 1000)
        assert allocation.total_granted <= 100
        assert allocation.total_used <= allocation.total_granted
        if not work_conserving:
            for s in slices:
                assert allocation.granted_to_slice(s) <= partition[s]
    if kind == "static":
        assert mac.current_partition() == {"A": 30, "B": 30, "C": 40}
