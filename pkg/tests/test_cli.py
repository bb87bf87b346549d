import io
import json
import subprocess
import sys

import pytest

from concathier.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv, "--json")
    return code, json.loads(out)


def test_leq():
    code, out, _ = run("leq", "--basis", "at", "--w", "ab", "--w2", "ba")
    assert code == 0 and "true" in out
    code, data = run_json("leq", "--basis", "st0", "--w", "ab", "--w2", "ba", "--k", "2")
    assert code == 0 and data["leq"] is False


def test_class_and_period():
    code, data = run_json("class", "--basis", "at", "--regex", "a*b*")
    assert code == 0
    assert data["members"] == 16
    assert data["member"] is False and data["witness"] == ["ab", "ba"]
    code, data = run_json("period", "--basis", "att:2")
    assert code == 0 and data["period"] == 2


def test_stratum_member():
    code, data = run_json("stratum", "member", "--regex", "a*b*", "--k", "2")
    assert code == 0
    assert data["status"] == "NotMember"
    w1, w2 = data["witness"]
    assert w1.startswith("a") and "ba" in w2


def test_stratum_kmax_stops_at_member():
    code, data = run_json("stratum", "member", "--regex", ".*a.*b.*", "--basis", "st0",
                          "--kmax", "3")
    assert code == 0
    statuses = [v["status"] for v in data]
    assert statuses == ["NotMember", "NotMember", "Member"]


def test_bpol_member():
    code, data = run_json("stratum", "bpol-member", "--regex", "b*", "--basis", "st0",
                          "--k", "1")
    assert code == 0 and data["status"] == "Member"


def test_inconclusive_exit_code():
    code, out, _ = run("stratum", "member", "--regex", "(ab)*", "--k", "3",
                       "--budget", "5", "--max-len", "2")
    assert code == 2 and "Inconclusive" in out


def test_separate():
    code, data = run_json("separate", "--regex", ".*ab.*", "--regex2", "b*a*",
                          "--basis", "st0", "--k", "2")
    assert code == 0 and data["status"] == "Separable"
    assert "separator" in data
    code, data = run_json("separate", "--regex", "a+b+", "--regex2", "b+a+",
                          "--basis", "at", "--k", "0")
    assert data["status"] == "NotSeparable"
    code, data = run_json("separate", "--regex", "b*", "--regex2", ".*a.*",
                          "--basis", "st0", "--k", "1", "--bool")
    assert data["status"] == "Separable"


def test_witnesses():
    code, data = run_json("witness", "strictness", "--basis", "st0", "--kmax", "1")
    assert code == 0 and all(r["ok"] for r in data["rows"])
    code, data = run_json("witness", "nonmember", "--basis", "at", "--regex", "a*b*")
    assert code == 0 and data["witness"] == ["ab", "ba"]


def test_formulas():
    code, data = run_json("compile-formula", "--basis", "st0",
                          "--formula", "exists x. exists y. x < y & a(x) & b(y)",
                          "--check-maxlen", "5")
    assert code == 0
    assert data["class"] == "Sigma(1)" and data["claim"] == "st0[1/2]"
    assert data["check"]["agree"] is True
    assert set(data["dfa"]) >= {"states", "transitions", "accepting"}
    code, data = run_json("eval-formula", "--formula", "exists x. max(x) & b(x)",
                          "--word", "aab")
    assert code == 0 and data["value"] is True


def test_piece_complement_and_classic():
    code, out, _ = run("piece-complement", "--letters", "ab")
    assert code == 0 and "(b)* b (a)*" in out
    for verb in ("classic", "classic-expressions"):
        code, data = run_json(verb)
        assert code == 0
        assert all(e["equal"] for e in data.values())


def test_verify_suite_only():
    code, out, _ = run("verify-suite", "--only", "4,8")
    assert code == 0
    lines = [ln for ln in out.splitlines() if ln.startswith("[")]
    assert len(lines) == 2 and all("PASS" in ln for ln in lines)


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["leq", "--w", "ab"],
    ["stratum", "member", "--regex", "a(", "--k", "1"],
    ["stratum", "member", "--regex", "ac", "--k", "1"],
    ["leq", "--basis", "nope", "--w", "a", "--w2", "b"],
    ["eval-formula", "--formula", "exists x.", "--word", "a"],
    ["stratum", "member", "--regex", "a", "--k", "-1"],
])
def test_errors_exit_one(argv):
    code, out, err = run(*argv)
    assert code == 1
    assert err.strip()


def test_json_is_deterministic():
    argv = ["stratum", "member", "--regex", "a*b*", "--k", "1", "--json"]
    first = run(*argv)[1]
    second = run(*argv)[1]
    assert first == second
    assert json.loads(first) == json.loads(second)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "concathier", "leq", "--basis", "at", "--w", "ab", "--w2", "ba"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and "true" in proc.stdout


def test_verify_suite_reduced_budget_is_inconclusive():
    code, out, _ = run("verify-suite", "--only", "1", "--budget", "10")
    assert code == 2
    assert "[INCONCLUSIVE" in out


def test_verify_suite_json():
    code, data = run_json("verify-suite", "--only", "3")
    assert code == 0
    assert data[0]["criterion"] == 3 and data[0]["status"] == "pass"
    assert set(data[0]) == {"criterion", "title", "status", "seconds", "detail"}
