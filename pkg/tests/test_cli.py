import json

import pytest

from ftca import config
from ftca.cli import main, to_pbm, to_rows
from ftca.grid import Topology

from conftest import sq, tri


@pytest.fixture
def cfg_file(tmp_path):
    def write(text, name="c.txt"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def _kv(out):
    return dict(line.split("=", 1) for line in out.splitlines() if "=" in line and " " not in line.split("=")[0])


def test_simulate_writes_frames(cfg_file, tmp_path, capsys):
    seed = config.zeros(Topology.square(9)).with_cells([(4, 4)])
    f = cfg_file(config.serialize(seed))
    out = tmp_path / "frames"
    assert main(["simulate", "--grid", "sq", "--rule", "1", "--input", f, "--steps", "4",
                 "--render-every", "2", "--out", str(out)]) == 0
    kv = _kv(capsys.readouterr().out)
    assert kv["active"] == "25" and kv["steps_to_fix"] == "4"
    assert sorted(p.name for p in out.iterdir()) == ["final.pbm", "final.txt", "step00000.pbm",
                                                     "step00002.pbm", "step00004.pbm"]
    assert config.parse((out / "final.txt").read_text()).active_count() == 25


def test_decide_both_agree(cfg_file, capsys):
    c = config.random(Topology.square(10), 0.3, 2)
    u = next((r, q) for r in range(10) for q in range(10) if not c[(r, q)])
    f = cfg_file(config.serialize(c))
    assert main(["decide", "--rule", "34", "--input", f, "--cell", f"{u[0]},{u[1]}", "--method", "both"]) == 0
    assert _kv(capsys.readouterr().out)["agree"] == "1"


def test_exit_codes(cfg_file, capsys):
    f = cfg_file("SQ 2\n10\n00\n")
    assert main(["decide", "--rule", "34", "--input", f, "--cell", "0,0"]) == 5
    assert main(["decide", "--rule", "34", "--input", cfg_file("SQ 2\n1\n"), "--cell", "0,0"]) == 3
    assert main(["decide", "--rule", "99", "--input", f, "--cell", "1,1"]) == 3
    assert main(["decide", "--grid", "tri", "--rule", "2", "--input", f, "--cell", "1,1"]) == 3
    assert main(["decide", "--rule", "34", "--input", "/nonexistent", "--cell", "1,1"]) == 1


def test_crosscheck_reports_zero(capsys):
    assert main(["crosscheck", "--grid", "tri", "--rule", "23", "--trials", "8", "--sizes", "8"]) == 0
    kv = _kv(capsys.readouterr().out)
    assert kv["trials"] == "8" and kv["mismatches"] == "0"


def test_bench_runs(capsys):
    assert main(["bench", "--grid", "sq", "--rule", "234", "--sizes", "32"]) == 0
    assert "speedup=" in capsys.readouterr().out


def test_bad_netlist_is_a_parse_error(cfg_file):
    bad = cfg_file(json.dumps({"inputs": ["a"], "gates": [{"id": "a", "kind": "INPUT"},
                                                          {"id": "y", "kind": "OUTPUT", "inputs": ["zz"]}]}))
    assert main(["circuits", "compile", "--netlist", bad, "--inputs", "1"]) == 3


def test_renders():
    assert to_pbm(sq(["10", "01"])) == "P1\n2 2\n1 0\n0 1\n"
    assert to_rows(tri(["1000", "0001"])).splitlines() == ["#...", "...#"]
