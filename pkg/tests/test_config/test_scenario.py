import json

import pytest

from llm_slice.config.assets import Assets
from llm_slice.config.enums import SchedulerModes, normalize_short_code
from llm_slice.config.scenario import load_scenario, mode_from_name, parse_scenario, scenario_summary
from llm_slice.errors import (
    AdmissionRejectedError,
    ConfigurationError,
    CrossRefError,
    DuplicateSliceError,
    InvalidCqiError,
    InvalidQuotaError,
    MissingKeyError,
    ParseError,
    UnknownKeyError,
)
from llm_slice.slicectl import authorize


def test_parse(scenario):
    assert scenario.name == "unit"
    assert scenario.horizon_us == 1_000_000
    assert [u.ue_id for u in scenario.ues] == ["ue1", "ue2"]
    assert scenario.ue("ue2").services == ("llama", "bard")
    assert scenario.mode.kind == SchedulerModes.STATIC
    assert not scenario.mode.work_conserving
    assert scenario.slice_of_service("bard").slice_id == "bard"
    assert scenario.initial_quota().as_dict() == {"bard": 0.5, "llama": 0.5}
    assert scenario.seeds == (1, 2)
    assert scenario.tti.n_prb == 100
    assert scenario.background_slice is None


def test_default_permissions_follow_subscriptions(scenario):
    assert authorize(scenario.permissions, "ue2", "bard")
    assert not authorize(scenario.permissions, "ue1", "bard")


def test_bundled_scenarios():
    minimal = load_scenario(Assets.get_path("minimal.json")[0])
    assert minimal.permissions_path.endswith("minimal_permissions.csv")
    assert not authorize(minimal.permissions, "ue2", "bard")
    assert minimal.seeds == (1, 2, 3)

    tab1 = load_scenario(Assets.get_path("tab1.json")[0])
    assert tab1.mode.kind == SchedulerModes.DYNAMIC
    assert tab1.background_slice is not None
    assert len(tab1.ues) == 8
    assert tab1.seeds == tuple(range(1, 11))
    tab1.build_registry()


def test_missing_key(build_scenario):
    with pytest.raises(MissingKeyError) as exc_info:
        build_scenario(horizon_ms=None)
    assert exc_info.value.key == "horizon_ms"


def test_unknown_key(build_scenario):
    with pytest.raises(UnknownKeyError):
        build_scenario(colour="blue")
    with pytest.raises(UnknownKeyError):
        build_scenario(ric={"epoch_ms": 50, "beta": 1})


def test_unknown_service(scenario_doc):
    scenario_doc["ues"][0]["services"] = ["gpt5"]
    with pytest.raises(CrossRefError) as exc_info:
        parse_scenario(json.dumps(scenario_doc))
    assert exc_info.value.ref == "gpt5"


def test_arrivals_need_a_subscription(scenario_doc):
    scenario_doc["arrivals"].append({"ue_id": "ue1", "service_id": "bard", "rate_per_s": 1})
    with pytest.raises(CrossRefError):
        parse_scenario(json.dumps(scenario_doc))


def test_bad_values(scenario_doc):
    scenario_doc["ues"][0]["cqi"] = 16
    with pytest.raises(InvalidCqiError):
        parse_scenario(json.dumps(scenario_doc))

    scenario_doc["ues"][0]["cqi"] = "high"
    with pytest.raises(ParseError) as exc_info:
        parse_scenario(json.dumps(scenario_doc))
    assert exc_info.value.location == "ues[0].cqi"


def test_malformed_json():
    with pytest.raises(ParseError):
        parse_scenario('{"name": "x",')


def test_slice_checks(scenario_doc):
    scenario_doc["slices"][1]["slice_id"] = "llama"
    with pytest.raises(DuplicateSliceError):
        parse_scenario(json.dumps(scenario_doc))

    scenario_doc["slices"][1]["slice_id"] = "bard"
    scenario_doc["slices"][1]["static_share"] = 0.6
    with pytest.raises(InvalidQuotaError):
        parse_scenario(json.dumps(scenario_doc))

    scenario_doc["slices"][1]["static_share"] = 0.9
    with pytest.raises(InvalidQuotaError, match="outside"):
        parse_scenario(json.dumps(scenario_doc))


@pytest.mark.parametrize("kind", ["shared", "static", "dynamic"])
def test_overbooked_slices_fail_admission(build_scenario, kind):
    slices = [
        {"slice_id": "llama", "service_id": "llama", "min_share": 0.5, "max_share": 0.8},
        {"slice_id": "bard", "service_id": "bard", "min_share": 0.6, "max_share": 0.8},
    ]
    with pytest.raises(AdmissionRejectedError):
        build_scenario(slices=slices, mode={"kind": kind})


def test_dynamic_mode_needs_ric(build_scenario):
    with pytest.raises(MissingKeyError):
        build_scenario(mode={"kind": "dynamic"}, ric=None)

    scenario = build_scenario(ric=None)
    with pytest.raises(MissingKeyError):
        scenario.with_mode("dynamic")


def test_with_mode(scenario):
    dynamic = scenario.with_mode("llm-slice")
    assert dynamic.mode.kind == SchedulerModes.DYNAMIC
    assert dynamic.mode.work_conserving
    assert scenario.mode.kind == SchedulerModes.STATIC

    assert scenario.with_mode("static") == scenario
    assert scenario.with_mode("static", work_conserving=True).mode.work_conserving
    assert scenario.with_mode("baseline").initial_quota() is None


def test_missing_permissions_file(scenario_doc, tmp_path):
    scenario_doc["permissions"] = "absent.csv"
    with pytest.raises(ConfigurationError):
        parse_scenario(json.dumps(scenario_doc), base_dir=str(tmp_path))


def test_mode_names():
    assert mode_from_name("baseline") == SchedulerModes.SHARED
    assert mode_from_name("Fixed") == SchedulerModes.STATIC
    assert mode_from_name(SchedulerModes.DYNAMIC) == SchedulerModes.DYNAMIC
    assert normalize_short_code("unheard-of") == "unheard-of"
    with pytest.raises(ConfigurationError):
        mode_from_name("round-robin")


def test_summary(scenario):
    info = scenario_summary(scenario)
    assert info["ues"] == 2
    assert info["slices"] == ["llama", "bard"]
    assert info["mode"] == "static"
