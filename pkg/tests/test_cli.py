import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from chatelet import cache
from chatelet.cli import main, run
from chatelet.quadfield import make_field, narrow_class_group
from chatelet.report import SCHEMA, determinism_hash, emit_json, parse_json

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


@pytest.fixture
def at_root(monkeypatch):
    monkeypatch.chdir(ROOT)


def test_exit_codes(at_root):
    code, doc = run(["find-point", "fixtures/ex11.surf"])
    assert code == 0 and doc["verdict"] == "point_found"
    assert run(["frobnicate"])[0] == 1
    assert run(["find-point"])[0] == 1
    assert run(["find-point", "fixtures/missing.surf"])[0] == 1
    code, doc = run(["find-point", "fixtures/ex11.surf", "--budget", "1"])
    assert code == 2 and doc["verdict"] == "budget_exhausted"
    assert doc["result"]["point"] is None


def test_json_round_trip(at_root):
    _, doc = run(["find-point", "fixtures/ex12.surf", "--json"])
    text = emit_json(doc)
    assert emit_json(parse_json(text)) == text
    assert doc["schema"] == SCHEMA
    assert set(doc) == {"schema", "command", "verdict", "result", "timings", "versions",
                        "spec"}
    _, failed = run(["find-point", "fixtures/missing.surf"])
    assert failed["verdict"] == "error" and "missing.surf" in failed["error"]


def test_determinism_hash(at_root):
    for argv in (["find-point", "fixtures/ex11.surf", "--strategy", "faithful"],
                 ["bm", "fixtures/iskovskikh.surf"], ["classgroup", "-47"]):
        first = determinism_hash(run(argv)[1])
        assert determinism_hash(run(argv)[1]) == first


def test_obstructed_report_lists_scanned_interval(at_root):
    _, doc = run(["find-point", "fixtures/berg67.surf"])
    assert doc["verdict"] == "obstructed_infinity"
    assert doc["result"]["certificate"]["scanned"]["ranges"] == [["-2", "2"]]
    assert doc["result"]["checked"] is True


def test_golden_report(at_root):
    _, doc = run(["find-point", "fixtures/berg43.surf"])
    doc.pop("timings")
    doc.pop("versions")
    golden = (FIXTURES / "golden_berg43.json").read_text()
    assert emit_json(doc) == golden


def test_subcommands(at_root):
    code, doc = run(["classgroup", "-5"])
    assert code == 0 and doc["result"]["h_plus"] == "2"
    _, doc = run(["hilbert", "-1", "3", "3"])
    assert doc["result"]["symbol"] == "-1"
    _, doc = run(["local", "fixtures/unsolvable3.surf", "3"])
    assert doc["verdict"] == "not_solvable"
    _, doc = run(["bm", "fixtures/iskovskikh.surf"])
    assert doc["verdict"] == "obstructed_bm"
    _, doc = run(["solve-norm", "-5", "3"])
    assert doc["verdict"] == "not_solvable"
    _, doc = run(["chebotarev", "fixtures/imag5.surf"])
    assert [e["p"] for e in doc["result"]["tuple"]] == ["3"]
    assert run(["verify", "fixtures/ex11.surf", "59", "47", "-4"])[1]["verdict"] == "true"
    assert run(["verify", "fixtures/ex11.surf", "59", "47", "4"])[1]["verdict"] == "false"


def test_find_point_options(at_root):
    code, doc = run(["find-point", "fixtures/ex11.surf", "--S", "3", "--eps", "3:2",
                     "--strategy", "direct", "--workers", "2"])
    assert code == 0
    t = int(doc["result"]["point"][2])
    r = int(doc["result"]["target"]["residue_targets"]["3"][0])
    assert (t - r) % 9 == 0
    assert run(["find-point", "fixtures/ex11.surf", "--eps", "3:x"])[0] == 1


def test_main_writes_json(at_root, capsys):
    assert main(["verify", "fixtures/ex11.surf", "59", "47", "-4", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"] == "true"
    assert main(["nope"]) == 1
    assert "usage" in capsys.readouterr().err.lower()


def test_console_script_runs():
    out = subprocess.run([sys.executable, "-m", "chatelet.cli", "hilbert", "2", "5", "inf",
                          "--json"], capture_output=True, text=True, cwd=ROOT, check=True)
    assert json.loads(out.stdout)["result"]["symbol"] == "1"


def test_cache_file_written_and_reused():
    K = make_field(-71)
    G = narrow_class_group(K)
    path = cache.cache_path(K.d)
    assert path.exists()
    assert path.read_text().splitlines()[0] == f"qncg v1 d={K.d}"
    again = narrow_class_group(K)
    assert again.h_plus == G.h_plus == 7
    assert [(f.A, f.B, f.C) for f in again.forms] == [(f.A, f.B, f.C) for f in G.forms]


def test_corrupt_cache_is_ignored():
    K = make_field(-59)
    path = cache.cache_path(K.d)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("qncg v1 d=-59\ngarbage\n")
    assert narrow_class_group(K).h_plus == 3


def test_cache_dir_from_environment():
    assert str(cache.cache_path(-3)).startswith(os.environ[cache.ENV_VAR])
