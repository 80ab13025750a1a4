import json
import subprocess
import sys

import pytest

from conftest import MACHINES, load, three_step
from zenosim.cli import main
from zenosim.universal import dfa_to_json, right_mover_to_dfa
from zenosim.zenohalt import zeno_halt_check


def tm(name):
    return str(MACHINES / name)


def cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def last_json(out):
    return json.loads(out.strip().splitlines()[-1])


def test_validate(capsys):
    code, out, _ = cli(capsys, "validate", tm("incrementer.tm"))
    assert code == 0 and json.loads(out)["valid"] is True


def test_validate_reports_line(capsys, tmp_path):
    bad = tmp_path / "bad.tm"
    bad.write_text("machine x\nstates: q\nstart: q\nrule: q _ _ -> q _ _ X N\nend\n")
    code, _, err = cli(capsys, "validate", str(bad))
    assert code == 1 and ":4:" in err


def test_missing_file(capsys, tmp_path):
    code, _, _ = cli(capsys, "run", str(tmp_path / "nope.tm"))
    assert code == 1


def test_run_halts_and_exhausts(capsys, tmp_path):
    code, out, _ = cli(capsys, "run", tm("incrementer.tm"))
    res = json.loads(out)
    assert code == 0 and res["steps"] == 5 and res["outcome"] == "accept"
    assert res["tape1"] == "1 1 1 1"
    code, out, _ = cli(capsys, "run", tm("flipflop.tm"), "--fuel", "7")
    assert code == 2 and json.loads(out)["steps"] == 7


def test_run_input_override(capsys):
    code, out, _ = cli(capsys, "run", tm("incrementer.tm"), "--input", "1")
    assert code == 0 and json.loads(out)["tape1"] == "1 1"


def test_jsonl_trace_has_one_line_per_step(capsys):
    code, out, err = cli(capsys, "run", tm("incrementer.tm"), "--trace", "jsonl")
    lines = out.strip().splitlines()
    summary = json.loads(err)
    assert code == 0 and len(lines) == summary["steps"] == 5
    assert [json.loads(ln)["step"] for ln in lines] == [1, 2, 3, 4, 5]


def test_run_with_oracle_machine(capsys):
    code, out, _ = cli(capsys, "run", tm("branch.tm"), "--oracle", tm("parity.tm"))
    assert code == 0 and json.loads(out)["tape2"] == "1"
    code, out, _ = cli(capsys, "run", tm("branch.tm"), "--stub", "parity=0")
    assert code == 0 and json.loads(out)["tape2"] == "0"
    code, _, _ = cli(capsys, "run", tm("branch.tm"), "--stub", "parity=?", "--fuel", "20")
    assert code == 2


def test_zeno_matches_library(capsys):
    code, out, _ = cli(capsys, "zeno", tm("three_step.tm"))
    assert code == 0
    assert json.loads(out) == zeno_halt_check(three_step()).to_json()
    assert json.loads(out)["wall_clock"] == "7/4"


def test_zeno_limit_stage_flags(capsys):
    code, out, _ = cli(capsys, "zeno", tm("flipflop.tm"), "--fuel", "50")
    assert code == 0 and json.loads(out)["counter"] == "0@w*1+0" and json.loads(out)["bit"] == 0
    code, out, _ = cli(capsys, "zeno", tm("flipflop.tm"), "--fuel", "50", "--no-limit-stage")
    assert code == 2 and json.loads(out)["exhausted"] is True
    code, out, _ = cli(capsys, "zeno", tm("three_step.tm"), "--mu0", "1/2")
    assert json.loads(out)["wall_clock"] == "7/8"


def test_fuel_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("ZENOSIM_FUEL", "3")
    code, out, _ = cli(capsys, "run", tm("flipflop.tm"))
    assert code == 2 and json.loads(out)["steps"] == 3


def test_counter(capsys):
    assert cli(capsys, "counter")[1].strip() == "1@0"
    assert cli(capsys, "counter", "--n", "2")[1].strip() == "001@2"
    assert cli(capsys, "counter", "--limit")[1].strip() == "0@w*1+0"


def test_dovetail_trace(capsys):
    code, out, _ = cli(capsys, "dovetail", tm("branch.tm"), "--oracle", tm("parity.tm"))
    lines = [json.loads(ln) for ln in out.strip().splitlines()]
    final = lines[-1]["final"]
    assert code == 0 and final["t"] == 1 and final["u"] == 1
    assert final["profile"]["kind"] == "Condition1"
    killed = [r for r in lines[:-1] if r["status"] == "killed"]
    assert killed and all(r["r"] == 3 and r["killed_by"] == 1 for r in killed)


def test_dovetail_unknown_oracle(capsys):
    code, _, err = cli(capsys, "dovetail", tm("branch.tm"))
    assert code == 1 and "parity" in err


def test_paradox(capsys):
    code, out, _ = cli(capsys, "paradox", "--fuel", "300")
    rep = json.loads(out)
    assert code == 0 and len(rep["rows"]) == 2 and rep["consistent_assumptions"] == []


def test_dfa(capsys, tmp_path):
    code, out, _ = cli(capsys, "dfa", tm("ends_in_1.tm"), "--show-dfa")
    res = json.loads(out)
    assert code == 0 and res["equivalent"] and "<accept>" in res["dfa"]["states"]
    code, _, _ = cli(capsys, "dfa", tm("incrementer.tm"))
    assert code == 3


def test_dfa_against_broken_dfa(capsys, tmp_path):
    d = dfa_to_json(right_mover_to_dfa(load("ends_in_1.tm")[0]))
    d["accept"] = sorted(set(d["accept"]) | {"s0"})
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(d))
    code, out, _ = cli(capsys, "dfa", tm("ends_in_1.tm"), "--against", str(path))
    res = json.loads(out)
    assert code == 1 and res["counterexample"] == ""


def test_bad_arguments_exit_nonzero():
    with pytest.raises(SystemExit) as err:
        main(["run", tm("flipflop.tm"), "--fuel", "0"])
    assert err.value.code != 0


def test_console_script_runs():
    r = subprocess.run([sys.executable, "-m", "zenosim.cli", "counter", "--n", "1"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "01@1"
