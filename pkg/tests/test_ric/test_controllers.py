import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from llm_slice.errors import InfeasibleBoundsError, ModeMismatchError
from llm_slice.mac import MacScheduler, QuotaVector, SchedulerMode, UeQueue
from llm_slice.radio import TtiConfig
from llm_slice.ric import (
    KpiReport,
    ProportionalDemandController,
    QuotaDecision,
    apply_decision,
    compute_quotas,
    solve_bounded_shares,
)
from llm_slice.slicectl import SliceDescriptor


def _descriptors(bounds):
    return {s: SliceDescriptor(s, s, lo, hi) for s, (lo, hi) in bounds.items()}


def _reports(arrived, backlog=None):
    backlog = backlog or {}
    return [KpiReport(s, 0, 50_000, arrived_bytes=a, backlog_bytes=backlog.get(s, 0)) for s, a in arrived.items()]


def _fixed_point(weights, bounds):
    """Bisection on lam for sum(clip(lam * w, lo, hi)) == 1."""

    slices = sorted(weights)
    if sum(weights.values()) == 0:
        weights = {s: 1.0 for s in slices}

    def clipped(lam):
        return {s: min(max(lam * weights[s], bounds[s][0]), bounds[s][1]) for s in slices}

    ceiling = {s: bounds[s][1] if weights[s] > 0 else bounds[s][0] for s in slices}
    if sum(ceiling.values()) <= 1:
        return ceiling

    lo, hi = 0.0, 1.0
    while sum(clipped(hi).values()) < 1:
        hi *= 2
    for _ in range(200):
        mid = (lo + hi) / 2
        if sum(clipped(mid).values()) < 1:
            lo = mid
        else:
            hi = mid
    return clipped(hi)


@st.composite
def bounded_demands(draw):
    """Demand weights and [min, max] bounds whose mins leave room for every slice."""

    n = draw(st.integers(2, 5))
    slices = [f"s{i}" for i in range(n)]
    raw = draw(st.lists(st.integers(1, 100), min_size=n, max_size=n))
    scale = draw(st.floats(0.0, 0.95))
    spans = draw(st.lists(st.floats(0.0, 1.0), min_size=n, max_size=n))
    bounds = {}
    for s, r, span in zip(slices, raw, spans):
        lo = r / sum(raw) * scale
        bounds[s] = (lo, min(1.0, lo + span * (1 - lo)))
    weights = {s: float(w) for s, w in zip(slices, draw(st.lists(st.integers(0, 10**6), min_size=n, max_size=n)))}
    return weights, bounds


@settings(max_examples=300, deadline=None)
@given(bounded_demands(), st.data())
def test_more_demand_never_lowers_the_quota(case, data):
    weights, bounds = case
    target = data.draw(st.sampled_from(sorted(weights)))
    bump = data.draw(st.integers(1, 10**6))

    before = solve_bounded_shares(weights, bounds)
    after = solve_bounded_shares({**weights, target: weights[target] + bump}, bounds)
    assert after[target] >= before[target] - 1e-9


@settings(max_examples=300, deadline=None)
@given(bounded_demands(), st.floats(1e-3, 1e3))
def test_quotas_ignore_the_demand_scale(case, k):
    weights, bounds = case
    descriptors = {s: SliceDescriptor(s, s, lo, hi) for s, (lo, hi) in bounds.items()}
    arrived = {s: int(w) for s, w in weights.items()}

    plain = compute_quotas(_reports(arrived), {}, descriptors)
    scaled = compute_quotas(_reports({s: a * k for s, a in arrived.items()}), {}, descriptors)
    assert scaled.quotas.as_dict() == pytest.approx(plain.quotas.as_dict(), abs=1e-9)
    assert solve_bounded_shares({s: w * k for s, w in weights.items()}, bounds) == pytest.approx(
        solve_bounded_shares(weights, bounds), abs=1e-9
    )


@settings(max_examples=50, deadline=None)
@given(
    bounded_demands(),
    st.lists(st.integers(0, 10**6), min_size=5, max_size=5),
    st.sampled_from([0.05, 0.2, 0.3, 0.7, 1.0]),
)
def test_quotas_settle_under_constant_load(case, previous, alpha):
    weights, bounds = case
    descriptors = {s: SliceDescriptor(s, s, lo, hi) for s, (lo, hi) in bounds.items()}
    load = {s: int(w) + 1 for s, w in weights.items()}
    settled = solve_bounded_shares({s: float(a) for s, a in load.items()}, bounds)

    controller = ProportionalDemandController(alpha=alpha)
    for epoch, old in enumerate(previous):
        controller.decide(epoch, _reports({s: old for s in load}), descriptors)
    for epoch in range(5, 5 + math.ceil(50 / alpha)):
        decision = controller.decide(epoch, _reports(load), descriptors)
    assert decision.quotas.as_dict() == pytest.approx(settled, abs=1e-9)


@pytest.mark.parametrize(
    "arrived, bounds, expected",
    [
        ({"A": 300_000, "B": 100_000}, (0.1, 0.9), {"A": 0.75, "B": 0.25}),
        ({"A": 990_000, "B": 10_000}, (0.2, 0.8), {"A": 0.8, "B": 0.2}),
        ({"A": 0, "B": 0}, (0.1, 0.9), {"A": 0.5, "B": 0.5}),
    ],
)
def test_compute_quotas_examples(arrived, bounds, expected):
    decision = compute_quotas(_reports(arrived), {}, _descriptors({s: bounds for s in arrived}), epoch=3)

    assert decision.epoch == 3
    assert decision.quotas.as_dict() == pytest.approx(expected)
    assert decision.rationale == pytest.approx({s: float(a) for s, a in arrived.items()})


def test_demand_adds_backlog_to_smoothed_arrivals():
    estimators = {}
    descriptors = _descriptors({"A": (0.0, 1.0), "B": (0.0, 1.0)})
    compute_quotas(_reports({"A": 100, "B": 100}), estimators, descriptors, alpha=0.2)
    decision = compute_quotas(
        _reports({"A": 200, "B": 100}, backlog={"B": 80}), estimators, descriptors, alpha=0.2
    )

    assert estimators["A"].value == pytest.approx(120)
    assert decision.rationale == pytest.approx({"A": 120.0, "B": 180.0})
    assert decision.quotas.get("A") == pytest.approx(0.4)


def test_all_slices_capped_below_one():
    shares = solve_bounded_shares({"A": 5.0, "B": 1.0}, {"A": (0.1, 0.3), "B": (0.1, 0.4)})
    assert shares == pytest.approx({"A": 0.3, "B": 0.4})


def test_infeasible_bounds():
    with pytest.raises(InfeasibleBoundsError):
        solve_bounded_shares({"A": 1.0, "B": 1.0}, {"A": (0.6, 1.0), "B": (0.5, 1.0)})


def test_matches_bisection_fixed_point():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        n = int(rng.integers(2, 7))
        slices = [f"s{i}" for i in range(n)]
        raw = rng.random(n)
        mins = raw / raw.sum() * rng.uniform(0.0, 0.95)
        bounds = {s: (float(lo), float(lo + rng.random() * (1 - lo))) for s, lo in zip(slices, mins)}
        weights = {s: 0.0 if rng.random() < 0.2 else float(rng.random() * 1e6) for s in slices}

        shares = solve_bounded_shares(weights, bounds)
        expected = _fixed_point(weights, bounds)

        assert shares == pytest.approx(expected, abs=1e-6)
        assert sum(shares.values()) <= 1 + 1e-9
        for s in slices:
            assert bounds[s][0] - 1e-12 <= shares[s] <= bounds[s][1] + 1e-12


def _dynamic_mac(mode="dynamic"):
    queues = [UeQueue("ue1", "A", 120), UeQueue("ue2", "B", 120)]
    return MacScheduler(SchedulerMode.of(mode), TtiConfig(), queues, QuotaVector({"A": 0.5, "B": 0.5}))


def test_apply_decision_waits_for_the_next_tti():
    mac = _dynamic_mac()
    decision = QuotaDecision(epoch=1, quotas=QuotaVector({"A": 0.8, "B": 0.2}))

    effective = apply_decision(mac, decision, now=12_300, control_delay_us=5_000)
    assert effective == 18_000

    mac.run_tti(17, 17_000)
    assert mac.current_partition() == {"A": 50, "B": 50}
    mac.run_tti(18, 18_000)
    assert mac.current_partition() == {"A": 80, "B": 20}


def test_apply_decision_on_a_boundary():
    mac = _dynamic_mac()
    decision = QuotaDecision(epoch=1, quotas=QuotaVector({"A": 0.8, "B": 0.2}))
    assert apply_decision(mac, decision, now=45_000, control_delay_us=5_000) == 51_000

    mac.run_tti(50, 50_000)
    assert mac.current_partition() == {"A": 50, "B": 50}
    mac.run_tti(51, 51_000)
    assert mac.current_partition() == {"A": 80, "B": 20}


def test_apply_decision_needs_dynamic_mode():
    decision = QuotaDecision(epoch=1, quotas=QuotaVector({"A": 0.8, "B": 0.2}))
    with pytest.raises(ModeMismatchError):
        apply_decision(_dynamic_mac("static"), decision, now=0)


def test_controller():
    controller = ProportionalDemandController(alpha=0.3)
    descriptors = _descriptors({"A": (0.1, 0.9), "B": (0.1, 0.9)})

    assert controller.decide(0, [], descriptors) is None

    decision = controller.decide(1, _reports({"A": 300_000, "B": 100_000}), descriptors)
    assert decision.quotas.as_dict() == pytest.approx({"A": 0.75, "B": 0.25})
    assert set(controller.estimators) == {"A", "B"}

    with pytest.raises(ValueError):
        ProportionalDemandController(alpha=0)
