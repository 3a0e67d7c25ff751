import io
import json

import pytest

from pgcode.cli import EXIT_OK, EXIT_PRECONDITION, EXIT_USAGE, parse_budget, run


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def strip_timestamp(text):
    doc = json.loads(text)
    doc.pop("timestamp")
    return doc


@pytest.mark.parametrize("text,value", [("2^26", 2**26), ("2**10", 1024), ("12345", 12345), (" 3^4 ", 81)])
def test_parse_budget(text, value):
    assert parse_budget(text) == value


def test_code_min_weight():
    code, out, err = invoke("code", "--p", "3", "--n", "2", "--k", "1", "--min-weight", "--threads", "1")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["schema"] == "pgcode.code.v1"
    assert "minimum weight 4" in err
    assert doc["config"]["budget"] == 2**26


def test_dual_alias_sets_flag():
    code, out, _ = invoke("dual", "--p", "2", "--h", "2", "--n", "2", "--k", "1", "--min-weight", "--threads", "1")
    assert code == EXIT_OK
    assert json.loads(out)["config"]["dual"] is True


def test_output_is_reproducible(tmp_path):
    args = ["table1", "--p", "2", "--n", "3", "--k", "2", "--threads", "1"]
    a = invoke(*args)[1]
    b = invoke(*args)[1]
    assert strip_timestamp(a) == strip_timestamp(b)
    assert a.split('"timestamp"')[0] == b.split('"timestamp"')[0]
    target = tmp_path / "r.json"
    code, out, _ = invoke(*args, "--out", str(target))
    assert code == EXIT_OK and out == ""
    assert strip_timestamp(target.read_text()) == strip_timestamp(a)


def test_unknown_flag_is_usage_error():
    assert invoke("code", "--bogus")[0] == EXIT_USAGE
    assert invoke("frobnicate")[0] == EXIT_USAGE
    assert invoke("code", "--budget", "lots")[0] == EXIT_USAGE


def test_precondition_exit():
    assert invoke("spread", "--p", "2", "--h", "1", "--n", "2")[0] == EXIT_PRECONDITION
    assert invoke("code", "--p", "4", "--n", "2", "--k", "1")[0] == EXIT_PRECONDITION
    assert invoke("table1", "--p", "2", "--n", "2", "--k", "2")[0] == EXIT_PRECONDITION
    assert invoke("table1", "--p", "2", "--n", "2")[0] == EXIT_USAGE


def test_blocking_and_redei_from_file(tmp_path):
    f = tmp_path / "k.json"
    f.write_text(json.dumps({"n": 3, "p": 3, "points": [[1, 0, 0, 0], [0, 1, 0, 0], [1, 1, 0, 0], [1, 2, 0, 0], [0, 0, 1, 0]]}))
    code, out, _ = invoke("blocking", "--k", "1", "--input", str(f))
    assert code == EXIT_OK
    code, out, _ = invoke("redei", "--input", str(f))
    assert code == EXIT_OK
    res = json.loads(out)["results"]
    assert len(res["nonessential"]) == 1


@pytest.mark.parametrize(
    "args",
    [
        ("construct", "trace", "--p", "3", "--h", "2", "--n", "2", "--k", "1"),
        ("construct", "hyperoval", "--p", "2", "--h", "2"),
        ("construct", "difference", "--p", "3", "--n", "3", "--k", "2"),
        ("construct", "projection", "--p", "3", "--n", "3", "--k", "2"),
        ("construct", "embedding", "--p", "2", "--n", "4", "--k", "2"),
        ("gap", "--p", "3", "--n", "2", "--k", "1"),
        ("space", "--p", "2", "--n", "2", "--k", "1"),
        ("spread", "--p", "2", "--h", "2", "--n", "2"),
    ],
)
def test_subcommands_succeed(args):
    code, out, err = invoke(*args, "--threads", "1")
    assert code == EXIT_OK, err
    assert json.loads(out)["results"]


def test_embedding_needs_k_two():
    assert invoke("construct", "embedding", "--p", "2", "--n", "3", "--k", "1")[0] == EXIT_PRECONDITION
