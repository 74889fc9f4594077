import json
import subprocess
import sys

import pytest

from pcfram.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_pcf_check_json(capsys):
    code, out, _ = run(capsys, "pcf-check", "--map", "z^2-2")
    data = json.loads(out)
    assert code == 0 and data["status"] == "PCF" and data["map"] == "[x^2 - 2*y^2 : y^2]"


def test_ramify_json(capsys):
    code, out, _ = run(capsys, "ramify", "--map", "z^2-1", "--alpha", "3", "--levels", "3")
    data = json.loads(out)
    assert code == 0
    assert data["cumulative"] == [2, 3] and data["stabilized_at"] == 2
    assert data["outside_predicted"] == [] and data["predicted_bad_set"]["primes"] == [2, 3]


def test_ramify_growing(capsys):
    code, out, _ = run(capsys, "ramify", "--map", "z^2+1", "--alpha", "0", "--levels", "4")
    data = json.loads(out)
    assert code == 0 and data["stabilized_at"] == "growing at budget" and data["growth"] == [1, 1, 2, 3]


def test_predicted_bad_and_provenance(capsys):
    code, out, _ = run(capsys, "predicted-bad", "--map", "z^2-2", "--alpha", "3")
    data = json.loads(out)
    assert code == 0 and data["primes"] == [2, 5]
    assert data["provenance"] == {"2": ["inseparable"], "5": ["collision"]}


def test_orbit_vals_and_lemma12(capsys):
    code, out, _ = run(capsys, "orbit-vals", "--map", "z^2+1", "--alpha", "0", "--levels", "4", "--format", "csv")
    assert code == 0 and out.splitlines()[0].startswith("n,")
    assert len(out.splitlines()) == 5
    code, out, _ = run(capsys, "lemma12", "--map", "z^2+1", "--alpha", "0", "--exclude-primes", "2,5")
    data = json.loads(out)
    assert code == 0 and {"p": 13, "n": 4, "v": 1} in [{k: w[k] for k in ("p", "n", "v")} for w in data["witnesses"]]


def test_newton_formats(capsys):
    code, out, _ = run(capsys, "newton", "--poly", "x^2-2", "--prime", "2")
    assert code == 0 and json.loads(out)["segments"] == [{"slope": "-1/2", "length": 2}]
    code, out, _ = run(capsys, "newton", "--poly", "x^2-2", "--prime", "2", "--format", "markdown")
    assert "| slope | length |" in out and "| -1/2 | 2 |" in out
    code, out, _ = run(capsys, "newton", "--poly", "x^2-2", "--prime", "2", "--format", "text")
    assert "slope=-1/2" in out


def test_verify_paper(capsys):
    code, out, _ = run(capsys, "verify-paper")
    data = json.loads(out)
    assert code == 0 and data["passed"]
    assert [r["name"] for r in data["reports"]] == ["dupont", "tchebyshev", "index-fixture"]


@pytest.mark.parametrize(
    "argv,code_name",
    [
        (["pcf-check", "--map", "z^2 +* 1"], "invalid-input"),
        (["pcf-check", "--map", "z"], "degree-too-small"),
        (["ramify", "--map", "z^2-2", "--alpha", "2"], "alpha-postcritical"),
        (["ramify", "--map", "z^2", "--alpha", "0"], "alpha-exceptional"),
        (["lemma12", "--map", "z^2-2", "--alpha", "0"], "preperiodic"),
        (["newton", "--poly", "x^2-2", "--prime", "4"], "invalid-input"),
        (["ramify", "--map", "z^2", "--alpha", "1/0"], "invalid-input"),
        (["pcf-check", "--levels", "0", "--map", "z^2"], "usage"),
    ],
)
def test_input_errors_exit_2(capsys, argv, code_name):
    if code_name == "usage":
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2
        err = capsys.readouterr().err
    else:
        code, _, err = run(capsys, *argv)
        assert code == 2
    lines = [ln for ln in err.splitlines() if ln.startswith("error:")]
    assert len(lines) == 1 and lines[0].startswith(f"error: code={code_name} ")


def test_budget_exit_3_with_partial_output(capsys):
    code, out, err = run(capsys, "ramify", "--map", "z^2+1", "--alpha", "0", "--levels", "6", "--degree-budget", "8")
    data = json.loads(out)
    assert code == 3 and len(data["levels"]) == 3 and data["incomplete"] and data["stop_reason"]
    assert "error: code=budget" in err


def test_out_file(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "newton", "--poly", "x^3-2", "--prime", "3", "--out", str(target))
    assert code == 0 and out == "" and json.loads(target.read_text())["p"] == 3


def test_json_identical_across_worker_counts(tmp_path):
    outs = []
    for w in (1, 8):
        target = tmp_path / f"w{w}.json"
        assert main(["ramify", "--map", "z^2+1", "--alpha", "0", "--levels", "4", "--workers", str(w), "--out", str(target)]) == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pcfram", "newton", "--poly", "x^2-2", "--prime", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["p"] == 2
