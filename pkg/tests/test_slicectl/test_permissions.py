import pytest

from llm_slice.errors import DuplicateRecordError, ParseError
from llm_slice.slicectl import PermissionDb, authorize, load_permissions

HEADER = "ue_id,service_id,allowed,tier\n"


def test_header_only():
    assert len(load_permissions(HEADER)) == 0


def test_two_rows_and_decisions():
    db = load_permissions(HEADER + "# comment\nue1,llama,true,premium\n\nue2,bard,false,\n")

    assert len(db) == 2
    assert authorize(db, "ue1", "llama")
    assert not authorize(db, "ue2", "bard")
    assert not authorize(db, "ue2", "llama")
    assert db[("ue1", "llama")].tier == "premium"
    assert db[("ue2", "bard")].tier == "standard"


def test_bad_boolean_reports_its_line():
    with pytest.raises(ParseError) as exc_info:
        load_permissions(HEADER + "ue1,llama,true,premium\nue1,bard,maybe,premium\n")
    assert exc_info.value.location == 3


@pytest.mark.parametrize(
    "text, line",
    [
        ("ue,svc,ok,tier\n", 1),
        ("", 1),
        (HEADER + "ue1,llama,true\n", 2),
        (HEADER + ",llama,true,premium\n", 2),
        (HEADER + "ue1,llama,TRUE,premium\n", 2),
        (HEADER + "ue1,llama,False,premium\n", 2),
    ],
)
def test_malformed(text, line):
    with pytest.raises(ParseError) as exc_info:
        load_permissions(text)
    assert exc_info.value.location == line


def test_duplicate_pair():
    with pytest.raises(DuplicateRecordError):
        load_permissions(HEADER + "ue1,llama,true,a\nue1,llama,false,b\n")


def test_from_subscriptions():
    db = PermissionDb.from_subscriptions({"ue1": ["llama", "bard"], "ue2": []})
    assert sorted(db) == [("ue1", "bard"), ("ue1", "llama")]
    assert authorize(db, "ue1", "bard")
