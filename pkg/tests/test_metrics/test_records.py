import pytest

from llm_slice.metrics import DeliveryRecord, StreamLedger


def test_stream_completes_on_last_byte():
    ledger = StreamLedger()
    ledger.start(7, "llama", "ue1", t_arrival=0, total_bytes=400)

    assert not ledger.on_bytes(7, 150, now=51_000)
    assert ledger.is_open(7)
    assert ledger.on_bytes(7, 250, now=81_000)
    assert not ledger.is_open(7)

    (record,) = ledger.records()
    assert record.t_first_byte == 51_000
    assert record.t_complete == 81_000
    assert record.completion_latency_us == 81_000
    assert record.first_byte_latency_us == 51_000
    assert record.completed and not record.aborted and not record.unfinished


def test_abort_and_unfinished():
    ledger = StreamLedger()
    ledger.start(2, "bard", "ue2", 1_000, 800)
    ledger.start(1, "llama", "ue1", 0, 400)
    ledger.on_bytes(2, 100, 60_000)
    ledger.abort(2)
    ledger.abort(2)

    records = ledger.records()
    assert [r.request_id for r in records] == [1, 2]
    assert ledger.n_open == 1

    unfinished, aborted = records
    assert unfinished.unfinished and unfinished.t_first_byte is None
    assert aborted.aborted and aborted.t_complete is None
    assert aborted.completion_latency_us is None


def test_stream_starts_once():
    ledger = StreamLedger()
    ledger.start(1, "llama", "ue1", 0, 400)
    with pytest.raises(ValueError):
        ledger.start(1, "llama", "ue1", 0, 400)


def test_record_defaults():
    record = DeliveryRecord(3, "llama", "ue1", 10, None, None, 0)
    assert record.unfinished
    assert record.first_byte_latency_us is None
