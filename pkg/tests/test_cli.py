import json
import subprocess
import sys
from pathlib import Path

import pytest

from inflate_kit import __version__, limits
from inflate_kit.cli import run

DATA = Path(__file__).parent / "data"


def call(capsys, *argv):
    status = run([str(a) for a in argv])
    out = capsys.readouterr().out
    return status, json.loads(out)


def test_verify_wedge_edge(capsys):
    status, rep = call(capsys, "verify-wedge", "--complex", DATA / "edge.json", "--counts", "2,2")
    assert status == 0
    assert rep["match"] is True and rep["actual"]["betti"]["1"] == 1
    assert rep["tool"] == {"name": "inflate-kit", "version": __version__}
    assert rep["hypotheses"]["flabby"] and rep["hypotheses"]["inhabited"]


def test_check_sheaf_bad(capsys):
    status, rep = call(capsys, "check-sheaf", "--diagram", DATA / "bad.json")
    assert status == 1
    w = rep["witness"]["not_flabby"]
    assert w == {"U": ["1", "2", "12"], "V": ["1"], "section": {"1": "b"}}


def test_from_map_verify(capsys):
    status, rep = call(capsys, "from-map", "--map", DATA / "cover.json", "--verify")
    assert status == 0 and rep["isomorphic_to_source"] is True


def test_other_verbs(capsys):
    status, rep = call(capsys, "homology", "--complex", DATA / "rp2.json")
    assert status == 0 and rep["homology"]["torsion"] == {"1": [2]}
    status, rep = call(capsys, "cm-check", "--complex", DATA / "edge.json")
    assert status == 0 and rep["cohen_macaulay"]["cohen_macaulay"] is True
    status, rep = call(capsys, "vertex-inflate", "--complex", DATA / "edge.json", "--counts", "3,2")
    assert status == 0 and rep["spheres"] == 2
    status, rep = call(capsys, "multiclique", "--graph", DATA / "triangle_multigraph.json")
    assert status == 0 and len(rep["inflation"]["elements"]) == 3 + 4 + 2
    status, rep = call(capsys, "etale-check", "--diagram", DATA / "bad.json")
    assert status == 0 and rep["etale_matches_alexandrov"] is True
    status, rep = call(capsys, "inflate", "--diagram", DATA / "bad.json")
    assert status == 0 and len(rep["inflation"]["elements"]) == 4


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "x.json"
    bad.write_text('{"vertices": ["1"],\n "facets": [["1", {}]]}\n')
    status, rep = call(capsys, "homology", "--complex", bad)
    assert status == 2 and rep["error"]["kind"] == "ParseError"
    assert rep["error"]["witness"]["line"] == 2
    status, rep = call(capsys, "verify-wedge", "--complex", DATA / "edge.json", "--counts", "2,x")
    assert status == 2
    status, rep = call(capsys, "verify-wedge", "--complex", DATA / "edge.json", "--counts", "2,0")
    assert status == 2 and rep["error"]["kind"] == "NonPositiveCount"


def test_size_bound_and_override(capsys):
    with limits.override(limits.Limits(max_faces=5)):
        status, rep = call(capsys, "homology", "--complex", DATA / "rp2.json")
        assert status == 3 and rep["error"]["kind"] == "TooLarge"
        status, rep = call(capsys, "homology", "--complex", DATA / "rp2.json", "--unsafe-limits")
        assert status == 0


def test_out_file_and_determinism(capsys, tmp_path):
    out = tmp_path / "rep.json"
    args = ["verify-wedge", "--complex", DATA / "edge.json", "--counts", "2,2"]
    assert run([str(a) for a in args] + ["--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    first = out.read_text()
    run([str(a) for a in args] + ["--out", str(out)])
    assert out.read_text() == first


def test_missing_required_argument():
    with pytest.raises(SystemExit) as exc:
        run(["check-sheaf"])
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "inflate_kit", "verify-wedge", "--complex", str(DATA / "edge.json"), "--counts", "2,2"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["status"] == "verified"
