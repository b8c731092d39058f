import json

import pytest

from hyperalias.cli import main
from hyperalias.design import loads_design
from hyperalias.tables import parse_table


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_design_json(capsys):
    code, out, err = run(capsys, "design", "--d", "3", "--Q", "2,2", "--M", "1", "--format", "json")
    assert code == 0
    assert loads_design(out).size == 8
    assert "N=8" in err


def test_design_missing_M(capsys):
    code, _, err = run(capsys, "design", "--d", "3", "--Q", "2,2")
    assert code == 2
    assert "usage" in err


def test_invalid_index_exit_2(capsys):
    code, _, _ = run(capsys, "aliases", "--d", "3", "--ell", "1", "--m", "2,0", "--Q", "2,2", "--M", "1", "--s0-max", "1")
    assert code == 2


def test_aliases_table(capsys):
    code, out, _ = run(
        capsys, "aliases", "--d", "3", "--ell", "0", "--m", "0,0", "--Q", "2,2", "--M", "1",
        "--s0-max", "4", "--format", "table",
    )
    assert code == 0
    rows = parse_table(out)
    assert {str(t) for t in rows[1]["A_0,A_1"]} == {"a_{2,2,-2}", "a_{2,2,2}"}


def test_aliases_empty_table(capsys):
    code, out, _ = run(
        capsys, "aliases", "--d", "3", "--ell", "0", "--m", "0,0", "--Q", "4,4", "--M", "4",
        "--s0-max", "3", "--format", "table",
    )
    assert code == 0
    assert all(row == {} for row in parse_table(out).values())


def test_aliases_csv_and_json_round_trip(capsys, tmp_path):
    code, out, _ = run(
        capsys, "aliases", "--d", "3", "--ell", "0", "--m", "0,0", "--Q", "2,2", "--M", "1",
        "--s0-max", "2", "--format", "csv",
    )
    lines = out.strip().splitlines()
    assert lines[0] == "ell,m,s0,s,r,intensity,distance,class"
    assert len(lines) == 1 + 10
    path = tmp_path / "rep.json"
    code, _, _ = run(
        capsys, "aliases", "--d", "3", "--ell", "0", "--m", "0,0", "--Q", "2,2", "--M", "1",
        "--s0-max", "2", "--out", str(path),
    )
    obj = json.loads(path.read_text())
    assert json.loads(json.dumps(obj)) == obj
    assert obj["s0_max"] == 2 and len(obj["aliases"]) == 10


def test_aliases_figure(capsys):
    code, out, _ = run(
        capsys, "aliases", "--d", "3", "--ell", "0", "--m", "0,0", "--Q", "2,2", "--M", "1",
        "--s0-max", "1", "--format", "figure",
    )
    assert out.splitlines() == ["ell,m1,m2,class", "2,2,-2,secondary", "2,2,2,secondary"]


@pytest.mark.parametrize("rule,expected", [("exact", 0), ("literal", 1)])
def test_aliases_oracle_flag(capsys, rule, expected):
    code, _, err = run(
        capsys, "aliases", "--d", "3", "--ell", "0", "--m", "0,0", "--Q", "2,2", "--M", "1",
        "--s0-max", "3", "--oracle", "--rule", rule,
    )
    assert code == expected
    assert "oracle:" in err


def test_tau(capsys):
    code, out, _ = run(
        capsys, "tau", "--d", "3", "--Q", "2,2", "--M", "1", "--ell", "0", "--m", "0,0",
        "--ell-target", "2", "--m-target", "2,2",
    )
    obj = json.loads(out)
    assert abs(obj["tau_direct"][0] - obj["tau_separable"][0]) < 1e-12


def test_fold(capsys, tmp_path):
    spec = tmp_path / "C.json"
    spec.write_text(json.dumps({"values": [1.0, 0.5, 2.0, 0.25], "band_limit": 3}))
    code, out, _ = run(
        capsys, "fold", "--d", "3", "--Q", "4,4", "--M", "4", "--ell-max", "3", "--s0-max", "2",
        "--spectrum", str(spec),
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["folded"] == pytest.approx([1.0, 0.5, 2.0, 0.25], abs=1e-12)
    code, _, _ = run(capsys, "fold", "--d", "3", "--Q", "4,4", "--M", "4", "--ell-max", "3", "--s0-max", "2", "--spectrum", str(tmp_path / "nope.json"))
    assert code == 2


def test_verify_pass_and_fail(capsys):
    code, out, _ = run(capsys, "verify", "--d", "3", "--L0", "3", "--Q", "4,4", "--M", "4", "--seed", "7")
    assert code == 0 and "PASS" in out
    code, out, _ = run(capsys, "verify", "--d", "3", "--L0", "3", "--Q", "2,2", "--M", "1", "--seed", "7")
    assert code == 1 and "FAIL" in out
    model = float(out.split("alias model|  = ")[1].split()[0])
    assert model < 1e-10


def test_verify_check_N(capsys):
    code, out, _ = run(capsys, "verify", "--check-N", "--L0", "3", "--d", "3")
    assert code == 0
    assert "N=128" in out and "54" in out


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# verify run\nd = 3\nQ = 4,4\nM = 4\nL0 = 3\nseed = 7\n")
    code, out, _ = run(capsys, "--config", str(cfg), "verify")
    assert code == 0
    code, out, _ = run(capsys, "--config", str(cfg), "verify", "--Q", "2,2", "--M", "1")
    assert code == 1


def test_deterministic(capsys):
    args = ("verify", "--d", "2", "--L0", "2", "--Q", "2", "--M", "2", "--seed", "3")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b


def test_tables_command(capsys):
    code, out, _ = run(capsys, "tables")
    assert code == 0
    assert "best match: caption parameters" in out
    code, out, _ = run(capsys, "tables", "--format", "json")
    assert len(json.loads(out)) == 4
