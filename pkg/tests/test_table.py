from nicesec.sections import codes_of_height, section
from nicesec.stacks import oracle_4crown_stack_retract
from nicesec.table import build_segment_table, decide_stack_retract, parse_tsv
from nicesec.verify import table_fixture

import pytest


@pytest.fixture(scope="module")
def table():
    return build_segment_table(6)


def test_fixture_shape():
    rows = parse_tsv(table_fixture())
    assert len(rows) == 63
    assert rows["1111"] == ("0,3", "n")
    assert rows["10011"] == ("0,2,4", "y")
    assert rows["101011"][1] == "n"


def test_matches_fixture(table):
    assert table.to_tsv() == table_fixture()


def test_examples(table):
    assert table.flag("1010") and table.flag("10")
    assert [h for h in range(1, 7) if table.flag("1" * h)] == [3, 6]
    assert table.rows["1010"].how == "reduced to 10"


def test_without_criteria():
    assert build_segment_table(5, use_criteria=False).to_tsv() == build_segment_table(5).to_tsv()


def test_flags_against_oracle(table):
    for c in [c for h in range(1, 6) for c in codes_of_height(h, "LS")]:
        assert table.flag(c) == (oracle_4crown_stack_retract(section(c)) is not None), c


def test_general_codes():
    memo = {}
    for c in [c for h in range(1, 6) for c in codes_of_height(h)]:
        assert decide_stack_retract(c, memo=memo) == (oracle_4crown_stack_retract(section(c)) is not None), c


def test_height_limit():
    with pytest.raises(ValueError):
        build_segment_table(11)
