import copy
import json

import pytest

from llm_slice.config.scenario import parse_scenario

BASE_DOC = {
    "name": "unit",
    "horizon_ms": 1000,
    "ues": [
        {"ue_id": "ue1", "cqi": 10, "services": ["llama"]},
        {"ue_id": "ue2", "cqi": 7, "services": ["llama", "bard"]},
    ],
    "services": [
        {"service_id": "llama", "tokens_mu": 4.0, "tokens_sigma": 0.5, "token_interval_ms": 2, "first_token_delay_ms": 50},
        {"service_id": "bard", "tokens_mu": 4.0, "tokens_sigma": 0.5, "token_interval_ms": 2, "first_token_delay_ms": 50},
    ],
    "slices": [
        {"slice_id": "llama", "service_id": "llama", "min_share": 0.2, "max_share": 0.8, "static_share": 0.5},
        {"slice_id": "bard", "service_id": "bard", "min_share": 0.2, "max_share": 0.8, "static_share": 0.5},
    ],
    "arrivals": [
        {"ue_id": "ue1", "service_id": "llama", "rate_per_s": 5},
        {"ue_id": "ue2", "service_id": "llama", "rate_per_s": 3},
        {"ue_id": "ue2", "service_id": "bard", "rate_per_s": 4},
    ],
    "mode": {"kind": "static"},
    "ric": {"epoch_ms": 50, "alpha": 0.2},
    "seeds": [1, 2],
}


def make_doc(**overrides) -> dict:
    doc = copy.deepcopy(BASE_DOC)
    for key, value in overrides.items():
        if value is None:
            doc.pop(key, None)
        else:
            doc[key] = value
    return doc


def make_scenario(**overrides):
    return parse_scenario(json.dumps(make_doc(**overrides)))


@pytest.fixture
def scenario_doc():
    return make_doc()


@pytest.fixture
def scenario():
    return make_scenario()


@pytest.fixture
def build_scenario():
    """``build_scenario(horizon_ms=0, mode={"kind": "shared"})`` -> parsed Scenario."""

    return make_scenario
