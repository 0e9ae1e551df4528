import json
import subprocess
import sys

import pytest

from helpers import DATA
from powdiag.cli import main

BLOCKED_TRIO = str(DATA / "blocked_trio.json")
SQUARE_CENTER = str(DATA / "square_center.json")


def run(argv, tmp_path):
    out = tmp_path / "out.json"
    code = main([*argv, "--json", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_tri(tmp_path):
    code, data = run(["tri", BLOCKED_TRIO], tmp_path)
    assert code == 0
    assert len(data["cells"]) == 7 and data["disappearing"] == [] and data["general_position"]


def test_dvf(tmp_path):
    code, data = run(["dvf", BLOCKED_TRIO], tmp_path)
    assert code == 0
    assert data == {"arrows": [[[2], [1, 2]], [[2, 3], [1, 2, 3]], [[3], [1, 3]]],
                    "critical": [[1]]}


def test_dvf_svg(tmp_path):
    svg = tmp_path / "f.svg"
    assert main(["dvf", BLOCKED_TRIO, "--json", str(tmp_path / "d.json"), "--svg", str(svg)]) == 0
    text = svg.read_text()
    assert text.startswith("<svg") and text.count("marker-end") == 3


def test_check(tmp_path):
    code, data = run(["check", BLOCKED_TRIO, "--seed", "3"], tmp_path)
    assert code == 0 and data["ok"]
    names = {c["name"] for c in data["checks"]}
    assert {"envelope equivalence", "duality F = 0", "Morse Euler", "Up-set partition",
            "acyclic", "jump monotonicity"} <= names


def test_check_skips_morse_with_disappearing_vertices(tmp_path):
    code, data = run(["check", SQUARE_CENTER], tmp_path)
    assert code == 0
    assert data["checks"][-1]["detail"].startswith("skipped")


def test_refusal(tmp_path, capsys):
    code, data = run(["dvf", SQUARE_CENTER], tmp_path)
    assert code == 3 and data is None
    assert "disappearing vertex 5: lifted point in epigraph" in capsys.readouterr().err
    assert main(["morse", SQUARE_CENTER]) == 3


def test_cells(tmp_path):
    svg = tmp_path / "c.svg"
    code = main(["cells", BLOCKED_TRIO, "--viewport", "-8", "-7", "8", "7", "--svg", str(svg),
                 "--json", str(tmp_path / "c.json")])
    assert code == 0 and svg.read_text().count("<polygon") == 3
    assert main(["cells", BLOCKED_TRIO, "--svg", str(svg)]) == 2
    assert main(["cells", BLOCKED_TRIO, "--viewport", "1", "0", "0", "1"]) == 2


def test_korder(tmp_path):
    code, data = run(["korder", BLOCKED_TRIO, "-k", "2"], tmp_path)
    assert code == 0 and data["k"] == 2
    assert main(["korder", BLOCKED_TRIO, "-k", "5"]) == 2


def test_morse_with_oracle(tmp_path):
    code, data = run(["morse", BLOCKED_TRIO, "--oracle", "--grid", "100"], tmp_path)
    assert code == 0 and data["oracle_agrees"] and data["euler"] == 1


def test_medial(tmp_path):
    code, data = run(["medial", "--shape", "circle", "--r", "1", "--grid", "40",
                      "--window", "-2", "-2", "2", "2", "--h", "100"], tmp_path)
    assert code == 0 and data["corners"] == [[0.0, 0.0]]
    assert data["dequant_max_gap"] > 0
    assert main(["medial", "--grid", "1"]) == 2
    assert main(["medial", "--h", "0.5", "--grid", "10"]) == 2


def test_invalid_inputs(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["tri", str(bad)]) == 2
    bad.write_text('{"dim": 2, "sites": [{"p": [1]}]}')
    assert main(["tri", str(bad)]) == 2
    assert main(["tri", str(tmp_path / "missing.json")]) == 2
    assert main(["nope"]) == 2
    assert main([]) == 2


def test_threads_variable(monkeypatch, tmp_path):
    monkeypatch.setenv("POWDIAG_THREADS", "0")
    assert main(["tri", BLOCKED_TRIO]) == 2
    monkeypatch.setenv("POWDIAG_THREADS", "2")
    assert run(["tri", BLOCKED_TRIO], tmp_path)[0] == 0


def test_deterministic_output(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["dvf", BLOCKED_TRIO, "--json", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_entry_point():
    r = subprocess.run([sys.executable, "-m", "powdiag.cli", "tri", BLOCKED_TRIO],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["general_position"]


@pytest.mark.parametrize("cmd", ["tri", "cells", "morse", "dvf", "check"])
def test_stdout_output(cmd, capsys):
    assert main([cmd, BLOCKED_TRIO]) == 0
    json.loads(capsys.readouterr().out)
