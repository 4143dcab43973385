import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from twdiag import cli

ROOT = Path(__file__).resolve().parents[1]
FIX = ROOT / "fixtures"


def run(*argv, env_path=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if monkeypatch is not None:
        monkeypatch.setenv(cli.FIXTURE_ENV, str(env_path))
    code = cli.run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def report(*argv):
    code, out, _ = run(*argv, "--json")
    return code, json.loads(out)


@pytest.mark.parametrize("argv,code", [
    (["validate", FIX / "p1_analog.tw"], 0),
    (["kan", FIX / "p1_analog.tw", "--along", "+,-"], 0),
    (["kan", FIX / "p1_analog.tw", "--along", "+,-", "--right"], 0),
    (["free", FIX / "p1_analog.tw", "--at", "+"], 0),
    (["latch", FIX / "spectrum.tw", "--at", "1"], 0),
    (["match", FIX / "spectrum.tw", "--at", "0"], 0),
    (["classify", FIX / "chain_square.tw"], 0),
    (["classify", FIX / "chain_square.tw", "--expect", "c_fib"], 1),
    (["factor", FIX / "chain_square.tw", "--map", "f"], 0),
    (["factor", FIX / "chain_square.tw", "--map", "f", "--mode", "goodacyclic-then-fib"], 0),
    (["lift", FIX / "chain_square.tw", "--square", "i,p,u,v"], 0),
    (["sheaf", FIX / "shift_qiso.tw"], 1),
    (["sheaf", FIX / "p1_analog.tw"], 1),
    (["hsheaf", FIX / "shift_qiso.tw"], 0),
    (["hsheaf", FIX / "basechange_z2.tw"], 1),
    (["hsheaf", FIX / "basechange_z2.tw", "--naive"], 0),
    (["hominv", FIX / "times_two.tw"], 0),
    (["groth", FIX / "p1_analog.tw"], 0),
    (["groth", FIX / "ptd_span.tw", "--extra", "1"], 0),
])
def test_exit_codes(argv, code):
    assert run(*argv)[0] == code


def test_axioms_verb():
    code, rep = report("axioms", FIX / "shift_qiso.tw", "--maps", "1")
    assert code == 0
    assert sorted(rep["results"]) == [f"MC{k}" for k in range(1, 6)]


def test_validate_example():
    code, rep = report("validate", FIX / "p1_analog.tw")
    assert code == 0 and rep["verdict"] is True
    assert rep["category"] == [] and rep["bundle"]["violations"] == []


def test_hominv_example():
    code, rep = report("hominv", FIX / "shift_qiso.tw")
    assert code == 0
    assert rep["homotopy_sheaf"] is True and rep["strict_in_ho"] is True


def test_hominv_times_two_both_false():
    _, rep = report("hominv", FIX / "times_two.tw")
    assert rep["homotopy_sheaf"] is False and rep["strict_in_ho"] is False and rep["agree"]


def test_nondirect_classify():
    code, out, err = run("classify", "--structure", "c", FIX / "nondirect.tw")
    assert code == 2 and "index not locally direct" in err
    code, out, _ = run("classify", "--structure", "c", FIX / "nondirect.tw", "--json")
    assert code == 2 and "index not locally direct" in json.loads(out)["error"]


def test_input_errors():
    assert run("latch", FIX / "spectrum.tw")[0] == 2
    assert run("latch", FIX / "spectrum.tw", "--at", "nowhere")[0] == 2
    assert run("hsheaf", FIX / "p1_analog.tw")[0] == 2
    assert run("validate", "no_such_file.tw")[0] == 2
    assert run("lift", FIX / "chain_square.tw", "--square", "i,p")[0] == 2
    with pytest.raises(SystemExit) as e:
        run("bogus", FIX / "spectrum.tw")
    assert e.value.code == 2


def test_parse_error_has_file_and_line(tmp_path):
    p = tmp_path / "bad.tw"
    p.write_text("category c\nobject a 0\narrow f : a -> zz\n")
    code, _, err = run("validate", p)
    assert code == 2 and f"{p}:3:" in err


def test_fixture_search_path(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    assert run("validate", "p1_analog.tw")[0] == 2
    code, _, _ = run("validate", "p1_analog.tw", env_path=FIX, monkeypatch=monkeypatch)
    assert code == 0


def test_json_report_keys():
    _, rep = report("hsheaf", FIX / "shift_qiso.tw", "--seed", "4")
    assert {"verb", "file", "seed", "verdict", "per_arrow", "naive", "replacement_trivial"} <= set(rep)
    assert rep["seed"] == 4 and rep["verb"] == "hsheaf"


def test_text_output_lines():
    code, out, _ = run("hsheaf", FIX / "shift_qiso.tw")
    assert "verdict: true" in out.splitlines()


def test_same_seed_same_bytes():
    argv = ("axioms", FIX / "chain_square.tw", "--maps", "1", "--seed", "9", "--json")
    assert run(*argv)[1] == run(*argv)[1]


def test_module_entry_point():
    env = {"PYTHONPATH": str(ROOT / "src"), cli.FIXTURE_ENV: str(FIX)}
    p = subprocess.run([sys.executable, "-m", "twdiag", "validate", "p1_analog.tw"],
                       cwd="/", env=env, capture_output=True, text=True)
    assert p.returncode == 0 and "verdict: true" in p.stdout
