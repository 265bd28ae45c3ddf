import json
import subprocess
import sys
from pathlib import Path

import pytest

from pdakit.cli import main

FIXTURES = Path(__file__).parent / "fixtures"
SMALL = str(FIXTURES / "pda_4_6_3_4.pda")
OPT685 = str(FIXTURES / "pda_6_8_5_5.pda")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_fixtures(capsys):
    assert run(capsys, "verify", SMALL) == (0, "ok: (K=4,F=6,Z=3,S=4) g=3\n", "")
    code, out, _ = run(capsys, "verify", OPT685)
    assert code == 0 and out == "ok: (K=6,F=8,Z=5,S=5)\n"


def test_verify_invalid_lists_violations(capsys, tmp_path):
    bad = tmp_path / "bad.pda"
    bad.write_text("2 2\n0 1\n1 *\n")
    code, out, err = run(capsys, "verify", str(bad))
    assert code == 1
    payload = json.loads(err)
    assert payload["ok"] is False
    assert payload["violations"][0] == {
        "kind": "CrossEntryNotStar",
        "symbol": 1,
        "cells": [[0, 1], [1, 0]],
        "cross_cell": [0, 0],
        "cross_value": 0,
    }


def test_verify_malformed_file(capsys, tmp_path):
    bad = tmp_path / "bad.pda"
    bad.write_text("2 2\n0 1\n")
    code, _, err = run(capsys, "verify", str(bad))
    assert code == 1 and "format_error" in json.loads(err)


def test_missing_file_is_usage_error(capsys, tmp_path):
    code, _, err = run(capsys, "verify", str(tmp_path / "nope.pda"))
    assert code == 2 and "cannot read" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["construct", "mn", "--k", "4", "--t", "2"],
        ["construct", "grouped", "--k", "4", "--t", "2", "--m", "2"],
        ["construct", "variant", "--k", "5", "--t", "2", "--which", "e"],
        ["construct", "p1", "--k", "5", "--t", "2"],
        ["construct", "p2", "--k", "6", "--t", "4"],
    ],
)
def test_constructed_arrays_reverify(capsys, tmp_path, argv):
    path = tmp_path / "out.pda"
    assert main(argv + ["--out", str(path)]) == 0
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0 and out.startswith("ok: ")


def test_construct_out_of_range(capsys):
    code, _, err = run(capsys, "construct", "p1", "--k", "4", "--t", "3")
    assert code == 2 and "0 < t < k-1" in err


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "6", "8", "5")
    assert code == 0
    assert "144/38" in out and "bound2                  5 = 3 + 1 + 1" in out
    code, out, _ = run(capsys, "bounds", "6", "8", "5", "--csv")
    assert out.splitlines()[1].startswith("6,8,5,18,72/19,4,5,")
    assert run(capsys, "bounds", "6", "8", "8")[0] == 2


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "4", "6", "3", "--witness")
    assert code == 0 and out.startswith("min S = 4")
    assert run(capsys, "oracle", "6", "8", "5")[0] == 2  # over the default size guard


def test_simulate_golden_slots(capsys):
    code, out, _ = run(capsys, "simulate", "--pda", SMALL, "--files", "4", "--demand", "0,1,2,3")
    assert code == 0
    lines = out.splitlines()
    expected = (FIXTURES / "slots_4_6_3_4_d0123.txt").read_text(encoding="utf-8").splitlines()
    assert [line.split(None, 1)[1] for line in lines[2:6]] == expected
    assert lines[-1] == "all 4 users decoded; rate 2/3"


def test_simulate_sweeps(capsys):
    code, out, _ = run(capsys, "simulate", "--pda", SMALL, "--files", "4", "--sweep", "exhaustive")
    assert code == 0 and out == "exhaustive: 256 demands, 0 failures, rate 2/3\n"
    code, out, _ = run(capsys, "simulate", "--pda", SMALL, "--files", "6", "--sweep", "sampled:50", "--seed", "4")
    assert code == 0 and out.startswith("sampled:50: 50 demands, 0 failures")
    assert run(capsys, "simulate", "--pda", SMALL, "--files", "4", "--sweep", "bogus")[0] == 2


def test_simulate_rejects_invalid_pda(capsys, tmp_path):
    bad = tmp_path / "bad.pda"
    bad.write_text("2 2\n0 0\n* *\n")
    code, _, err = run(capsys, "simulate", "--pda", str(bad), "--files", "2")
    assert code == 1 and json.loads(err)["violations"][0]["kind"] == "SameRowRepeat"


def test_simulate_bad_demand(capsys):
    assert run(capsys, "simulate", "--pda", SMALL, "--files", "2", "--demand", "0,1,2,3")[0] == 2
    assert run(capsys, "simulate", "--pda", SMALL, "--files", "4", "--demand", "a,b")[0] == 2


def test_compare(capsys):
    code, out, _ = run(capsys, "compare", "p1-shang", "--k", "7", "--t", "3", "--m", "3", "--q", "3", "--l", "2")
    assert code == 0 and "R ratio = 4/5" in out and "[ok] P1 dominates" in out
    code, out, _ = run(capsys, "compare", "p1-yan", "--k", "5", "--t", "2")
    assert code == 0 and "no matching parameters" in out
    code, _, err = run(capsys, "compare", "p1-mn", "--k", "5")
    assert code == 2 and "--t" in err


@pytest.mark.parametrize("fmt", ["text", "csv", "md"])
def test_compare_table(capsys, fmt):
    code, out, _ = run(capsys, "compare-table", "shang", "--format", fmt)
    assert code == 0 and "[published 0.6481]" in out


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["bounds", "6", "8"])
    assert exc.value.code == 2


def test_module_entry_point_is_deterministic():
    argv = [sys.executable, "-m", "pdakit", "simulate", "--pda", SMALL, "--files", "4",
            "--demand", "3,2,1,0", "--payload", "--seed", "11"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and b"all 4 users decoded" in first
