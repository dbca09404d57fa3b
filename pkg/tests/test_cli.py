import json

import pytest

from parity_descents import identities
from parity_descents.cli import main
from parity_descents.exactalg import IdentityReport, Mismatch, ONE, V

SAMPLE_IMAGE_ASCII = "1 [min]\n  L: 5\n  R: 2 [min]\n    L: 3 [min]\n      R: 4\n    R: 6\n"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--id", "B1", "--nmax", "6", "--q", "one", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["id"] == "B1" and obj["status"] == "pass" and obj["nmax"] == 6 and obj["qmode"] == "one"
    assert obj["first_mismatch"] is None


def test_verify_text_multiple(capsys):
    code, out, _ = run(capsys, "verify", "--id", "CF,Z1", "--id", "TREE_INORDER", "--nmax", "5")
    assert code == 0
    assert [line.split()[0] for line in out.splitlines()] == ["CF", "Z1", "TREE_INORDER"]


def test_table_family(capsys):
    code, out, _ = run(capsys, "table", "--family", "A", "--n", "2")
    assert (code, out) == (0, "1 + 1*q*x\n")


def test_table_json(capsys):
    code, out, _ = run(capsys, "table", "--family", "B", "--nmax", "2", "--format", "json")
    assert code == 0
    assert json.loads(out) == {"family": "B", "polynomials": {"1": "1 + 1*y", "2": "1 + 3*y + 3*x + 1*x*y"}}


def test_table_kind_csv(capsys, tmp_path):
    target = tmp_path / "g.csv"
    code, out, _ = run(capsys, "table", "--kind", "g", "--nmax", "3", "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text() == "n,0,1\n1,1,\n2,1,1\n3,1,5\n"


def test_gamma_command(capsys):
    assert run(capsys, "gamma", "--family", "ATILDE", "--n", "3", "--basis", "SYM")[:2] == (0, "1 2\n")
    assert run(capsys, "gamma", "--family", "ATILDE", "--n", "3")[:2] == (0, "1 1\n")
    code, out, _ = run(capsys, "gamma", "--family", "BBAR", "--n", "2", "--format", "json")
    assert code == 0 and json.loads(out)["coefficients"] == [3, -2]


def test_gamma_not_representable(capsys):
    code, _, err = run(capsys, "gamma", "--family", "A", "--n", "3", "--basis", "SYM")
    assert code in (1, 2) and err


def test_tree_sample_psi2(capsys):
    code, out, _ = run(capsys, "tree", "--word", "562314", "--apply-psi", "2")
    assert (code, out) == (0, SAMPLE_IMAGE_ASCII)


def test_tree_json(capsys):
    code, out, _ = run(capsys, "tree", "--word", "562314", "--apply-psi", "2", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["word"] == [5, 1, 3, 4, 2, 6]
    assert obj["tree"] == SAMPLE_IMAGE_ASCII.splitlines()


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["verify"],
        ["verify", "--id", ""],
        ["verify", "--id", "NOPE"],
        ["verify", "--id", "B1", "--nmax", "1"],
        ["verify", "--id", "FIG1", "--q", "generic"],
        ["verify", "--id", "B1", "--q", "half"],
        ["verify", "--id", "B1", "--jobs", "0"],
        ["table"],
        ["table", "--family", "Q", "--n", "2"],
        ["table", "--family", "A", "--n", "0"],
        ["gamma", "--family", "A"],
        ["tree"],
        ["tree", "--word", "1a"],
        ["tree", "--word", "112"],
        ["tree", "--word", "21", "--apply-psi", "3"],
        ["report", "--id", ""],
        ["report", "--format", "csv"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "usage" in err


def test_recorded_failure_does_not_change_exit(capsys):
    code, out, _ = run(capsys, "verify", "--id", "CS_Q", "--nmax", "4", "--q", "generic", "--format", "json")
    obj = json.loads(out)
    assert code == 0
    assert obj["status"] == "fail" and obj["first_mismatch"]["n"] == 2


def test_required_failure_exits_one(capsys, monkeypatch):
    def broken(identity, nmax=None, qmode=None):
        return IdentityReport(identity, nmax, qmode or "one", "fail", Mismatch(2, ONE, V("x")), 0.0)

    monkeypatch.setattr(identities, "verify", broken)
    code, out, _ = run(capsys, "verify", "--id", "B1", "--nmax", "3")
    assert code == 1 and "first mismatch at n=2" in out
    code, out, _ = run(capsys, "report", "--id", "CS_Q")
    payload = json.loads(out)
    assert code == 1 and payload["summary"]["required_failed"] == ["CS_Q"]


def test_report_io_failure(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    code, out, err = run(capsys, "report", "--id", "B1", "--out", str(blocker / "r.json"))
    assert code == 1 and "could not write" in err
    assert json.loads(out)["summary"]["all_required_pass"] is True


def test_report_subset_schema(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, _, _ = run(capsys, "report", "--id", "CS_Q,FIG1", "--out", str(target))
    payload = json.loads(target.read_text())
    assert code == 0
    assert set(payload) == {"required", "recorded", "summary", "nmax_a", "nmax_b"}
    assert [r["id"] for r in payload["required"]] == ["CS_Q", "FIG1"]
    assert [(r["id"], r["qmode"], r["status"]) for r in payload["recorded"]] == [("CS_Q", "generic", "fail")]
    assert payload["summary"] == {
        "required_total": 2,
        "required_passed": 2,
        "required_failed": [],
        "recorded_total": 1,
        "all_required_pass": True,
    }
