import pytest
from hypothesis import given
from hypothesis import strategies as st

from llm_slice.errors import InvalidQuotaError
from llm_slice.mac import QuotaVector, partition_prbs


def test_partition_examples():
    assert partition_prbs(QuotaVector({"A": 0.6, "B": 0.4}), 100) == {"A": 60, "B": 40}
    assert partition_prbs(QuotaVector({"A": 1.0}), 100) == {"A": 100}
    assert partition_prbs(QuotaVector({"A": 1 / 3, "B": 1 / 3, "C": 1 / 3}), 100) == {"A": 34, "B": 33, "C": 33}


def test_partial_quota_leaves_prbs_unassigned():
    assert partition_prbs(QuotaVector({"A": 0.25, "B": 0.25}), 10) == {"A": 3, "B": 2}
    assert sum(partition_prbs(QuotaVector({"A": 0.2, "B": 0.35}), 100).values()) == 55


def test_quota_validation():
    with pytest.raises(InvalidQuotaError):
        QuotaVector({"A": 0.7, "B": 0.4})
    with pytest.raises(InvalidQuotaError):
        QuotaVector({"A": -0.1})
    with pytest.raises(InvalidQuotaError):
        partition_prbs({"A": 1.5}, 100)


@given(
    shares=st.lists(st.floats(0, 1), min_size=1, max_size=6),
    n_prb=st.integers(1, 275),
)
def test_partition_never_exceeds_the_grid(shares, n_prb):
    total = sum(shares)
    if total > 1:
        shares = [s / total for s in shares]
    quota = QuotaVector({f"s{i}": s for i, s in enumerate(shares)})

    counts = partition_prbs(quota, n_prb)
    assert sum(counts.values()) <= n_prb
    assert all(c >= 0 for c in counts.values())
    for slice_id, share in quota.entries.items():
        assert abs(counts[slice_id] - share * n_prb) < 1 + 1e-6
