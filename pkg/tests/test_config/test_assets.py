import os

import pytest

from llm_slice.config.assets import Assets


def test_get_ids():
    # exact match
    assert Assets.get_ids("tab1.json") == ["tab1.json"]

    # regex
    ids = Assets.get_ids(r".*\.json")
    assert "minimal.json" in ids and "tab1.json" in ids
    assert ids == sorted(ids)

    # match nothing
    assert Assets.get_ids(r"match-$^-nothing") == []
    assert Assets.get_ids("[unclosed") == []


def test_get_path():
    (path,) = Assets.get_path("minimal_permissions.csv")
    assert os.path.isabs(path)
    assert os.path.exists(path)


def test_set_root_dir(tmp_path):
    default = Assets.ROOT_DIR
    (tmp_path / "other.json").write_text("{}")
    try:
        Assets.set_root_dir(str(tmp_path))
        assert Assets.get_ids(r".*\.json") == ["other.json"]
    finally:
        Assets.set_root_dir(default)

    with pytest.raises(ValueError):
        Assets.set_root_dir(str(tmp_path / "other.json"))
    assert Assets.ROOT_DIR == default
