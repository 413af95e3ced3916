import csv

import pytest

from ffsolve import harness
from ffsolve.cli import main
from ffsolve.fuzzy_core import validate


def rows(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# example=")
    return list(csv.DictReader(lines[1:]))


def test_run_writes_table_and_plot(tmp_path, capsys):
    assert main(["run", "--example", "1", "--alpha", "0.3", "--h", "0.2", "--out", str(tmp_path)]) == 0
    table = rows(tmp_path / "ex1_a0.3_h0.2.csv")
    assert len(table) == 10
    assert (table[0]["lower0"], table[0]["mid"], table[0]["upper0"]) == ("0.000000", "0.617034", "0.925551")
    assert (tmp_path / "ex1_a0.3_h0.2_plot.csv").exists()
    assert "ok" in capsys.readouterr().out


def test_header_lists_configuration(tmp_path):
    main(["run", "--example", "2", "--alpha", "0.9", "--h", "0.02", "--out", str(tmp_path)])
    first = (tmp_path / "ex2_a0.9_h0.02.csv").read_text().splitlines()[0]
    for field in ("example=2", "alpha=0.9", "h=0.02", "levels=11", "scheme=euler", "plan=declared"):
        assert field in first


def test_reruns_are_byte_identical(tmp_path):
    args = ["run", "--example", "2", "--alpha", "0.6,0.9", "--h", "0.1,0.02"]
    main([*args, "--out", str(tmp_path / "a")])
    main([*args, "--out", str(tmp_path / "b"), "--jobs", "2"])
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert names == sorted(p.name for p in (tmp_path / "b").iterdir())
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


@pytest.mark.parametrize("example", [1, 2])
def test_printed_triples_are_fuzzy_numbers(tmp_path, example):
    main(["run", "--example", str(example), "--alpha", "0.3,0.9", "--h", "0.2,0.02", "--out", str(tmp_path)])
    for path in tmp_path.glob(f"ex{example}_*.csv"):
        if path.name.endswith("_plot.csv"):
            continue
        for row in rows(path):
            y = harness.unscramble([float(row[k]) for k in ("lower0", "mid", "upper0")])
            assert validate(y)


def test_example4_writes_errors_and_switching(tmp_path):
    assert main(["run", "--example", "4", "--alpha", "0.9", "--h", "1/10,1/20", "--out", str(tmp_path)]) == 0
    errors = rows(tmp_path / "ex4_errors.csv")
    assert [r["error"] for r in errors] == ["5.020076e-02", "2.566848e-02"]
    switching = rows(tmp_path / "ex4_switching.csv")
    assert switching[0]["t_switch"] == "0.738166"


def test_step_invalid_is_reported(tmp_path):
    code = main(["run", "--example", "3", "--alpha", "0.8", "--h", "0.002", "--out", str(tmp_path)])
    assert code == 1
    assert "status=step-invalid" in (tmp_path / "ex3_a0.8_h0.002.csv").read_text()


def test_bad_config_exits_two(tmp_path, capsys):
    assert main(["run", "--example", "1", "--alpha", "1.5", "--h", "0.1", "--out", str(tmp_path)]) == 2
    assert "error" in capsys.readouterr().err


def test_switching_command(capsys):
    assert main(["switching", "--example", "4", "--alpha", "0.9,0.1"]) == 0
    assert capsys.readouterr().out.split() == ["0.9", "0.738166", "0.1", "0.970100"]


def test_suite_command_prints_one_line_per_check(capsys):
    code = main(["suite", "--which", "convergence"])
    out = capsys.readouterr().out.splitlines()
    assert code == 0
    assert out and all(line.endswith(("PASS", "FAIL")) for line in out)
