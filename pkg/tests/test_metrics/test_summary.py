import pytest

from llm_slice.errors import EmptyRunError
from llm_slice.mac import AllocationLog, TtiAllocation
from llm_slice.metrics import DeliveryRecord, RunSummary, average_summaries, summarize


def _completed(rid, latency_ms, slice_id="llama"):
    return DeliveryRecord(rid, slice_id, "ue1", 0, 10_000, int(latency_ms * 1000), 400)


def _aborted(rid, slice_id="llama"):
    return DeliveryRecord(rid, slice_id, "ue1", 0, None, None, 400, aborted=True)


def _log(**used_by_slice):
    log = AllocationLog(n_prb=100)
    log.add(TtiAllocation(0, per_slice_used=dict(used_by_slice)))
    return log


def test_mean_latency():
    summary = summarize([_completed(1, 100), _completed(2, 140)], _log(llama=50), 1_000_000, "static")

    assert summary.mean_completion_latency_ms == pytest.approx(120.0)
    assert summary.mean_first_byte_latency_ms == pytest.approx(10.0)
    assert summary.completions == 2
    assert summary.requests == 2
    assert summary.mode == "static"


def test_stability():
    records = [_completed(i, 100) for i in range(99)] + [_aborted(99)]
    summary = summarize(records, _log(llama=10), 1_000_000, "dynamic")

    assert summary.stability == pytest.approx(0.99)
    assert summary.aborts == 1
    assert summary.streams == 100


def test_unfinished_streams_are_not_aborts():
    records = [_completed(1, 100), DeliveryRecord(2, "llama", "ue1", 0, 5_000, None, 400)]
    summary = summarize(records, _log(), 1_000_000, "static")

    assert summary.stability == 1.0
    assert summary.unfinished == 1
    assert summary.mean_completion_latency_ms == pytest.approx(100.0)


def test_utilization_counts_background():
    summary = summarize([_completed(1, 100)], _log(llama=60, background=25), 1_000_000, "static")

    assert summary.utilization == pytest.approx(0.85)
    assert summary.per_slice["background"].utilization == pytest.approx(0.25)
    assert summary.per_slice["background"].streams == 0
    assert summary.per_slice["llama"].mean_completion_latency_ms == pytest.approx(100.0)


def test_empty_run():
    with pytest.raises(EmptyRunError):
        summarize([], _log(), 1_000_000, "static")

    summary = summarize([], _log(), 1_000_000, "static", allow_empty=True)
    assert summary.streams == 0
    assert summary.mean_completion_latency_ms is None
    assert summary.stability == 1.0


def test_extra_counts():
    summary = summarize([_completed(1, 100)], _log(), 1_000, "static", requests=3, denied=2, seeds=[4])
    assert summary.requests == 3
    assert summary.denied == 2
    assert summary.seeds == [4]


def _summary(latency, utilization, stability, streams=10, seed=1):
    return RunSummary(
        mode="static",
        mean_completion_latency_ms=latency,
        mean_first_byte_latency_ms=None,
        utilization=utilization,
        stability=stability,
        streams=streams,
        seeds=[seed],
    )


def test_average_summaries():
    averaged = average_summaries([_summary(100.0, 0.6, 0.9, seed=1), _summary(200.0, 0.8, 1.0, 30, seed=2)])

    assert averaged.mean_completion_latency_ms == pytest.approx(150.0)
    assert averaged.utilization == pytest.approx(0.7)
    assert averaged.stability == pytest.approx(0.95)
    assert averaged.mean_first_byte_latency_ms is None
    assert averaged.streams == 40
    assert averaged.seeds == [1, 2]


def test_average_skips_missing_latencies():
    averaged = average_summaries([_summary(None, 0.5, 1.0), _summary(80.0, 0.5, 1.0)])
    assert averaged.mean_completion_latency_ms == pytest.approx(80.0)


def test_average_rejects_mixed_modes():
    other = RunSummary("dynamic", 1.0, 1.0, 0.5, 1.0)
    with pytest.raises(ValueError):
        average_summaries([_summary(1.0, 0.5, 1.0), other])
    with pytest.raises(ValueError):
        average_summaries([])


def test_to_dict_orders_slices():
    summary = summarize([_completed(1, 100, "zeta"), _completed(2, 100, "alpha")], _log(), 1_000, "static")
    assert list(summary.to_dict()["per_slice"]) == ["alpha", "zeta"]
