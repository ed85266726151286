import io
import json

import pytest

from nicesec.cli import EXIT_BUDGET, EXIT_FAILED, EXIT_OK, EXIT_USAGE, run
from nicesec.maps import is_retraction
from nicesec.poset import Poset
from nicesec.sections import section
from nicesec.verify import table_fixture


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_build_round_trips():
    code, text = call("build", "11")
    assert code == EXIT_OK
    P = Poset.from_json(text)
    assert P.n == 9 and P.ls.height == 2


def test_classify():
    code, text = call("classify", "11")
    rows = dict(line.split("\t") for line in text.splitlines())
    assert code == EXIT_OK
    assert (rows["height"], rows["width"], rows["section"], rows["nice"], rows["horizon"]) == ("2", "3", "y", "y", "2")
    assert call("classify", "1")[1].count("horizon\t-") == 1


def test_table():
    code, text = call("table", "--max-height", "6")
    assert code == EXIT_OK and text == table_fixture()
    assert call("table", "--max-height", "0")[0] == EXIT_USAGE


def test_check_retract_both_agree():
    code, text = call("check-retract", "1001", "--method", "both")
    assert code == EXIT_OK
    recs = [json.loads(line) for line in text.splitlines()]
    assert [r["method"] for r in recs] == ["oracle", "split"]
    P = section("1001")
    assert all(is_retraction(P, r["map"]) for r in recs)
    code, text = call("check-retract", "1111", "--method", "both")
    assert code == EXIT_OK and text == "none\nnone\n"


def test_certificates_round_trip(tmp_path):
    lines = []
    for c in ("1001", "10011", "111"):
        lines += [l for l in call("check-retract", c, "--method", "both")[1].splitlines() if l != "none"]
    lines.append(call("theo32", "110101")[1].strip())
    f = tmp_path / "certs.jsonl"
    f.write_text("\n".join(lines) + "\n")
    code, text = call("verify", "--suite", "certificates", "--input", str(f))
    assert code == EXIT_OK and text.count("[PASS]") == len(lines)
    rec = json.loads(lines[0])
    rec["map"][0], rec["map"][1] = rec["map"][1], rec["map"][0]
    f.write_text(json.dumps(rec) + "\n")
    assert call("verify", "--suite", "certificates", "--input", str(f))[0] == EXIT_FAILED


def test_theo32():
    code, text = call("theo32", "110101")
    rec = json.loads(text)
    assert code == EXIT_OK and rec["heights"] == [1, 2, 3] and rec["orientation"] == "primal"
    assert call("theo32", "11011")[1] == "none\n"


def test_dot(tmp_path):
    code, text = call("dot", "11")
    assert code == EXIT_OK and text.startswith('digraph "11"') and "dashed" not in text
    f = tmp_path / "r.jsonl"
    f.write_text(call("check-retract", "1001", "--method", "oracle")[1])
    code, text = call("dot", "1001", "--retraction", str(f))
    assert code == EXIT_OK and "style=dashed" in text
    assert call("dot", "11", "--retraction", str(f))[0] == EXIT_USAGE


def test_verify_suite():
    code, text = call("verify", "--suite", "table")
    assert code == EXIT_OK and text.startswith("[PASS] 1 table")


@pytest.mark.parametrize(
    "argv",
    [
        ["build", "12"],
        ["check-retract", "1010"],
        ["theo32", "1"],
        ["nope"],
        ["table", "--budget", "0"],
        ["verify", "--suite", "bogus"],
    ],
)
def test_usage_errors(argv):
    assert call(*argv)[0] == EXIT_USAGE


def test_budget_exit():
    assert call("check-retract", "101011", "--method", "oracle", "--budget", "10")[0] == EXIT_BUDGET


def test_oracle_accepts_non_n2():
    code, text = call("check-retract", "1010", "--method", "oracle")
    assert code == EXIT_OK and json.loads(text)["method"] == "oracle"


def test_deterministic():
    for argv in (["check-retract", "10011", "--method", "both"], ["theo32", "101001"], ["dot", "101"]):
        assert call(*argv) == call(*argv)
