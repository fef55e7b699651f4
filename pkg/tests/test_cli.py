import json
import subprocess
import sys

import pytest

from scw.cli import main, report_digest, run
from scw.complex import dumps_complex
from scw.diagrams import diagram_from_faces, dumps_diagram, folded_pair
from scw.generators import gen_hex


@pytest.fixture(scope="module")
def fixtures(tmp_path_factory):
    root = tmp_path_factory.mktemp("fx")
    for argv in (["gen", "hex", "--radius", "3"], ["gen", "blowup", "--m", "2"], ["gen", "thicksquare"],
                 ["gen", "petal", "--n", "3"], ["gen", "band", "--width", "1", "--length", "5"], ["gen", "doublehex"]):
        code, rep = run(argv + ["--out", str(root / argv[1])])
        assert code == 0
    return root


def cx_of(fixtures, name):
    return str(fixtures / name / "complex.json")


def test_gen_writes_sidecars(fixtures):
    names = sorted(p.name for p in (fixtures / "blowup").iterdir())
    assert names == ["complex.json", "marked_R'.json", "marked_R.json", "marked_Xprime.json", "marked_central.json"]
    code, rep = run(["gen", "hex", "--radius", "1"])
    assert rep["result"]["counts"] == {"vertices": 24, "edges": 30, "faces2": 7}
    assert rep["result"]["marked"]["centre"]["faces"] == ["h[0,0]"]


def test_check_strict_on_hex3(fixtures):
    code, rep = run(["check", "--complex", cx_of(fixtures, "hex"), "--cn", "6", "--strict"])
    assert code == 0 and rep["result"]["holds"]
    code, rep = run(["check", "--complex", cx_of(fixtures, "blowup"), "--cn", "6", "--strict"])
    assert code == 3 and len(rep["result"]["violations"]) == 928


def test_dfdist_on_blowup(fixtures):
    code, rep = run(["dfdist", "--complex", cx_of(fixtures, "blowup"), "--from", "V[0,0]", "--to", "V[0,1]"])
    assert code == 0 and rep["result"]["distance"] == 4
    assert len(rep["digest"]) == 64


def test_usage_errors(fixtures):
    assert run(["check", "--complex", cx_of(fixtures, "hex"), "--cn", "6", "--bogus"])[0] == 2
    assert run(["frobnicate"])[0] == 2
    assert run([])[0] == 2
    assert run(["check", "--cn", "6"])[0] == 2


def test_invalid_inputs(fixtures, tmp_path):
    code, rep = run(["dfdist", "--complex", cx_of(fixtures, "hex"), "--from", "s[0,1|1,0]", "--to", "h[0,0]"])
    assert code == 4 and rep["error"]["code"] == "not-a-face"
    code, rep = run(["dfdist", "--complex", cx_of(fixtures, "hex"), "--from", "zzz", "--to", "h[0,0]"])
    assert code == 4 and rep["error"]["code"] == "unknown-id"
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["validate", "--complex", str(bad)])[0] == 4
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps({"vertices": ["a"], "edges": [{"id": "e", "src": "a", "dst": "b"}], "faces": []}))
    code, rep = run(["validate", "--complex", str(broken)])
    assert code == 3 and not rep["result"]["valid"]
    assert run(["nerve", "--complex", str(broken)])[0] == 4
    assert run(["nerve", "--complex", str(tmp_path / "missing.json")])[0] == 4


def test_size_cap_is_invalid_input(fixtures, monkeypatch):
    monkeypatch.setenv("SCW_MAX_CELLS", "100")
    code, rep = run(["nerve", "--complex", cx_of(fixtures, "hex")])
    assert code == 4 and rep["error"]["code"] == "oversize"


def test_hull_and_quasiconvex(fixtures, tmp_path):
    out = tmp_path / "hull.json"
    sq = cx_of(fixtures, "thicksquare")
    faces = ",".join(f"T{i}" for i in range(8))
    code, rep = run(["hull", "--complex", sq, "--faces", faces, "--out", str(out)])
    assert code == 0 and rep["result"]["size"] == 17
    assert len(json.loads(out.read_text())["faces"]) == 17
    b = str(fixtures / "thicksquare" / "marked_B.json")
    assert run(["quasiconvex", "--complex", sq, "--sub", b, "--k", "1"])[0] == 3
    assert run(["quasiconvex", "--complex", sq, "--sub", b, "--k", "2"])[0] == 0


def test_coarse_diam(fixtures):
    dh = fixtures / "doublehex"
    diams = []
    for r in (0, 1, 2):
        code, rep = run(["coarse-diam", "--complex", str(dh / "complex.json"), "--sub1", str(dh / "marked_Y1.json"),
                         "--sub2", str(dh / "marked_Y2.json"), "--r", str(r)])
        diams.append(rep["result"]["diameter"])
    assert diams == [0, 2, 4]


def test_wall_then_halfspaces(fixtures, tmp_path):
    hexcx = cx_of(fixtures, "hex")
    wall = tmp_path / "wall.json"
    code, rep = run(["wall", "--complex", hexcx, "--edge", "s[0,1|1,0]", "--face", "h[0,0]", "--out", str(wall)])
    assert code == 0
    data = json.loads(wall.read_text())
    assert data["kind"] == "wall" and len(data["edges"]) == 8
    assert all(set(entry) == {"face", "chosen"} for entry in data["log"])
    code, rep = run(["halfspaces", "--complex", hexcx, "--wall", str(wall)])
    assert code == 0 and rep["result"]["components"] == 2
    assert all(rep["result"]["convex"].values())
    code, rep = run(["wall", "--complex", hexcx, "--edge", "s[0,1|1,0]", "--face", "h[0,0]", "--all"])
    assert code == 0 and rep["result"]["count"] >= 1
    not_wall = tmp_path / "nw.json"
    not_wall.write_text(json.dumps({"edges": ["s[0,1|1,0]"], "kind": "wall", "log": []}))
    assert run(["halfspaces", "--complex", hexcx, "--wall", str(not_wall)])[0] == 4


def test_wall_segment(fixtures):
    hexcx = cx_of(fixtures, "hex")
    code, rep = run(["wall-segment", "--complex", hexcx, "--faces", "h[0,-2],h[0,-1],h[0,0],h[0,1]"])
    assert code == 0 and rep["result"]["unique_geodesic"]
    code, rep = run(["wall-segment", "--complex", hexcx, "--faces", '["h[0,0]", "h[1,0]", "h[1,1]"]'])
    assert code == 4


def test_nerve_systolic_pullback(fixtures, tmp_path):
    hexcx = cx_of(fixtures, "hex")
    out = tmp_path / "nerve.json"
    code, rep = run(["nerve", "--complex", hexcx, "--out", str(out)])
    data = json.loads(out.read_text())
    assert code == 0 and len(data["nodes"]) == 37 and len(data["edges"]) == rep["result"]["edges"]
    assert run(["systolic-check", "--complex", hexcx, "--interior-only"])[0] == 0
    assert run(["systolic-check", "--complex", cx_of(fixtures, "blowup")])[0] == 3
    ball = "h[0,0],h[1,0],h[0,1],h[-1,1],h[-1,0],h[0,-1],h[1,-1]"
    code, rep = run(["pullback", "--complex", hexcx, "--vertices", ball])
    assert code == 0 and rep["result"]["ok"] and len(rep["result"]["patch"]["faces"]) == 7
    petal = cx_of(fixtures, "petal")
    code, rep = run(["pullback", "--complex", petal, "--vertices", "R,B0,B1,B2,B3,B4,B5"])
    assert code == 3 and rep["result"]["witness"] == "B0"


def test_diagram_classification(fixtures, tmp_path):
    hexcx = cx_of(fixtures, "hex")
    amb = gen_hex(3).complex
    ball = [f"h[{a},{b}]" for a in range(-2, 3) for b in range(-2, 3) if abs(a + b) <= 2]
    path = tmp_path / "ball.json"
    path.write_text(dumps_diagram(diagram_from_faces(amb, ball)))
    code, rep = run(["greendlinger", "--diagram", str(path), "--ambient", hexcx])
    assert code == 0 and rep["result"]["verdict"] == "three-or-more"
    d, x = folded_pair()
    (tmp_path / "fold.json").write_text(dumps_diagram(d))
    (tmp_path / "one.json").write_text(dumps_complex(x))
    code, rep = run(["greendlinger", "--diagram", str(tmp_path / "fold.json"), "--ambient", str(tmp_path / "one.json")])
    assert code == 4 and rep["error"]["detail"]["edges"] == ["s[1,-1|1,0]"]


def test_reports_are_reproducible(fixtures, capsys):
    argv = ["hull", "--complex", cx_of(fixtures, "blowup"), "--faces", "V[0,0],V[0,1]"]
    reports = []
    for _ in range(2):
        assert main(argv) == 0
        reports.append(json.loads(capsys.readouterr().out))
    assert report_digest(reports[0]) == report_digest(reports[1])
    assert set(reports[0]) >= {"command", "parameters", "digest", "result", "timing"}


def test_summary_goes_to_stderr(fixtures, capsys):
    main(["dfdist", "--complex", cx_of(fixtures, "blowup"), "--from", "V[0,0]", "--to", "V[0,1]", "--summary"])
    cap = capsys.readouterr()
    json.loads(cap.out)
    assert "distance=4" in cap.err


def test_module_entry_point(fixtures):
    proc = subprocess.run([sys.executable, "-m", "scw", "dfdist", "--complex", cx_of(fixtures, "hex"),
                           "--from", "h[0,0]", "--to", "h[3,0]"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["distance"] == 3
