import json
import subprocess
import sys

import pytest

from u11 import verify as V
from u11.cli import main, run


def report(argv):
    rep, code = run(argv)
    return rep, code


def test_correspond_example():
    rep, code = report(["correspond", "--p", "3", "--r", "2", "--k", "1"])
    assert code == 0
    res = rep["results"]
    assert res["param"]["r"] == 7
    assert [(i["r"], i["k"]) for i in res["fiber"]] == [(0, 0), (2, 1)]


def test_defring_example():
    rep, code = report(["defring", "--shape", "w"])
    assert code == 0 and rep["results"]["relations"] == ["c11*c22 + p"]


def test_classify_example():
    rep, code = report(["classify", "--p", "3", "--f", "1"])
    assert code == 0 and rep["results"]["total"] == 20
    assert rep["results"]["counts"] == {"character": 4, "special": 4, "ps": 12}


@pytest.mark.parametrize("argv", [
    ["verify", "correspondence", "--p", "3", "--f", "2"],
    ["verify", "galois", "--p", "5", "--n", "2"],
    ["verify", "kisin", "--p", "3", "--samples", "100"],
    ["verify", "reps", "--p", "3", "--f", "2"],
    ["verify", "arith", "--p", "5", "--samples", "100"],
])
def test_verify_suites_clean(argv):
    rep, code = report(argv)
    assert code == 0 and rep["violations"] == []
    assert all(r["passed"] for r in rep["results"]["properties"])


def test_verify_violation_exit_code(monkeypatch):
    def prop_broken(cfg):
        return 1, [{"why": "forced"}]

    monkeypatch.setitem(V.SUITES, "reps", [prop_broken])
    rep, code = report(["verify", "reps", "--p", "3"])
    assert code == 1
    assert rep["violations"] == [{"property": "broken", "counterexample": {"why": "forced"}}]


def test_domain_error_exit_code():
    rep, code = report(["orientation", "--p", "7", "--a", "3", "--b", "3"])
    assert code == 3 and rep["error"]["type"] == "DomainError"
    rep, code = report(["packet", "--p", "3", "--r", "5"])
    assert code == 3


def test_usage_errors():
    with pytest.raises(SystemExit) as e:
        run(["frobnicate"])
    assert e.value.code == 2
    rep, code = report(["packet", "--r", "0"])
    assert code == 2 and "--p" in rep["error"]["message"]
    assert report(["verify", "--p", "3"])[1] == 2


def test_other_commands():
    assert report(["packet", "--p", "3", "--r", "0", "--k", "0"])[0]["results"]["multiplicities"] == [
        {"factor": {"type": "character", "k": 0}, "count": 2},
        {"factor": {"type": "special", "k": 0}, "count": 2},
    ]
    gen = report(["generic", "--p", "5", "--r", "0", "--n", "1"])[0]["results"]
    assert gen["witness"] == {"w": "1", "a": -2, "b": -4}
    assert report(["generic", "--p", "7", "--a", "-20", "--b", "-10", "--n", "0"])[0]["results"]["n_generic"]
    assert report(["orientation", "--p", "7", "--a", "-20", "--b", "-26"])[0]["results"]["orientation"] == ["s", "id"]
    assert report(["ftsd", "--p", "3", "--a", "1", "--b", "5"])[0]["results"]["is_ftsd"] is True
    sh, code = report(["shape", "--p", "3", "--m", "2", "--ring-modulus=-3,0,1", "--shape", "w", "--seed", "4"])
    assert code == 0 and sh["results"]["detected_shape"] == "w" and sh["results"]["polarised"]
    assert report(["shape", "--p", "3", "--m", "2", "--shape", "w"])[1] == 3
    pol = report(["polarise", "--p", "3", "--r", "0", "--lambda", "2"])[0]["results"]
    assert pol["alpha"] == [[[0], [2]], [[2], [0]]] and pol["verified"]


def test_lambda_index():
    rep, _ = report(["packet", "--p", "3", "--f", "2", "--r", "1", "--lambda-index", "0"])
    assert rep["results"]["index"]["lambda"] == [0, 1]


def test_param_equiv_inverse_pair():
    # in F_9 = F_3[x]/(x^2+1), x^-1 = 2x
    res = report(["param-equiv", "--p", "3", "--f", "2", "--r", "7", "--lambda", "0,1",
                  "--r2", "7", "--lambda2", "0,2"])[0]["results"]
    assert res["cparam_equiv_fast"] is True and res["cparam_equiv_bruteforce"] is True
    res = report(["param-equiv", "--p", "3", "--r", "7", "--r2", "3"])[0]["results"]
    assert res["lparam_equiv"] is True and res["cparam_equiv_fast"] is False


def test_reports_byte_identical(capsys):
    argv = ["verify", "kisin", "--p", "3", "--samples", "30", "--seed", "9"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first
    json.loads(first)


def test_timing_opt_in():
    rep, _ = report(["classify", "--p", "3"])
    assert "timing" not in rep
    rep, _ = report(["classify", "--p", "3", "--timing"])
    assert rep["timing"]["seconds"] >= 0


def test_text_output(capsys):
    main(["defring", "--shape", "t", "--output", "text"])
    out = capsys.readouterr().out
    assert out.startswith('command: "defring"') and "c22_star" in out


def test_jobs_matches_serial():
    argv = ["verify", "reps", "--p", "3", "--f", "2"]
    assert report(argv) == report(argv + ["--jobs", "2"])


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "u11", "classify", "--p", "2"],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["results"]["total"] == 3 + 3 + 3 * 1 - 3
