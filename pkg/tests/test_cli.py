import json
import subprocess
import sys
from pathlib import Path

import pytest

from euclidtower.cli import main, parse_seeds

GOLDEN = Path(__file__).parent / "golden"

GOLDEN_RUNS = [
    (["chain", "8", "5"], "chain_8_5.json"),
    (["partition", "5", "3"], "partition_5_3.json"),
    (["tower", "3", "2"], "tower_3_2.json"),
    (["verify-lemma", "8", "5"], "verify_lemma_8_5.json"),
    (["scan", "5"], "scan_5.json"),
    (["finite-prop1", "2", "1", "--q", "2", "--seeds", "0..2"], "finite_prop1_2_1_q2.json"),
    (["finite-unfold", "2", "1", "--q", "2", "--chi", "0", "--seeds", "0..1"], "finite_unfold_2_1_q2.json"),
]


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("argv,name", GOLDEN_RUNS, ids=[g[1] for g in GOLDEN_RUNS])
def test_golden(argv, name, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0
    assert out == (GOLDEN / name).read_text()


def test_out_flag(tmp_path, capsys):
    target = tmp_path / "c.json"
    assert main(["chain", "8", "5", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert target.read_text() == (GOLDEN / "chain_8_5.json").read_text()


@pytest.mark.parametrize(
    "argv,needle",
    [
        (["chain", "6", "4"], "not coprime"),
        (["tower", "2", "3"], "n1 > n2"),
        (["verify-lemma", "1", "1"], "n1 > n2"),
        (["finite-prop1", "3", "2", "--q", "5"], "limit"),
        (["finite-unfold", "2", "1", "--q", "2", "--chi", "1"], "chi"),
        (["scan"], "MAX_N"),
    ],
)
def test_invalid_input_exit_2(argv, needle, capsys):
    code, out, err = run(argv, capsys)
    assert code == 2
    assert out == ""
    assert needle in err


def test_scan_flag_and_positional_agree(capsys):
    _, a, _ = run(["scan", "6"], capsys)
    _, b, _ = run(["scan", "--max-n", "6"], capsys)
    assert a == b
    assert json.loads(a)["pairs"] == 5  # (2,1) (3,1) (3,2) (4,1) (5,1)


def test_parse_seeds():
    assert parse_seeds("0..3") == (0, 1, 2, 3)
    assert parse_seeds("1,4, 7") == (1, 4, 7)
    assert parse_seeds("5") == (5,)
    assert parse_seeds("0..1,9") == (0, 1, 9)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "euclidtower", "partition", "8", "5"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["orbit_dim"] == 128
