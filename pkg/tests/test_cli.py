import json
import shutil
import subprocess

import pytest
from click.testing import CliRunner
from conftest import fig6

from grasspd.cli import main
from grasspd.diagrams import gpd_birth_death
from grasspd.filtration import Filtration
from grasspd.invariants import SegmentDiagram


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(main, [str(a) for a in args], catch_exceptions=False)

    return invoke


@pytest.fixture
def fig6_file(tmp_path):
    p = tmp_path / "fig6.json"
    p.write_text(json.dumps(fig6().to_json()))
    return p


@pytest.fixture
def two_points_file(tmp_path, run):
    csv = tmp_path / "two.csv"
    csv.write_text("a,b\n0,1\n1,0\n")
    out = tmp_path / "two.json"
    assert run("vr", csv, "-o", out).exit_code == 0
    return out


def test_gpd_two_points(run, two_points_file):
    res = run("gpd", two_points_file)
    assert res.exit_code == 0
    obj = json.loads(res.output)
    assert [(e["b"], e["d"], e["dim"]) for e in obj["entries"]] == [(1, 2, 1), (1, "inf", 1)]
    assert obj["order"] == "product" and obj["ambient"] == 2


def test_gpd_fig6_degree_one(run, fig6_file):
    obj = json.loads(run("gpd", fig6_file, "-q", 1).output)
    # values 0..6, so value-(2,2) and value-(5,6) are indices (3,3) and (6,7)
    assert [(e["b"], e["d"]) for e in obj["entries"]] == [(3, 3), (6, 7)]
    lap = json.loads(run("gpd", fig6_file, "-q", 1, "--method", "laplacian").output)
    assert [(e["b"], e["d"]) for e in lap["entries"]] == [(6, 7)]


def test_gpd_degree_above_dimension(run, fig6_file):
    res = run("gpd", fig6_file, "-q", 5)
    assert res.exit_code == 0
    assert json.loads(res.output)["entries"] == []


def test_output_is_byte_stable(run, fig6_file, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run("gpd", fig6_file, "-q", 1, "-o", a, "--threads", 1)
    run("gpd", fig6_file, "-q", 1, "-o", b, "--threads", 4)
    assert a.read_bytes() == b.read_bytes()
    assert run("pd", fig6_file).output == run("pd", fig6_file).output


def test_floats_have_full_precision(run, tmp_path):
    p = tmp_path / "f.json"
    p.write_text(json.dumps({"values": [0.1, 1 / 3], "simplices": [{"t": 0.1, "verts": ["a"]}, {"t": 1 / 3, "verts": ["b"]}, {"t": 1 / 3, "verts": ["a", "b"]}]}))
    obj = json.loads(run("gpd", p).output)
    assert obj["values"] == [0.1, 1 / 3]
    direct = gpd_birth_death(Filtration.from_json(json.loads(p.read_text())), 0).to_json()
    assert obj["entries"] == direct["entries"]


def test_pd_reports_both_methods(run, fig6_file):
    obj = json.loads(run("pd", fig6_file, "-q", 1).output)
    assert obj["agree"] is True
    assert {"b": 3, "d": 3, "multiplicity": 1} in obj["dims"]
    assert obj["betti"] == [{"b": 6, "d": 7, "multiplicity": 1}]


def test_harmonic_cells(run, fig6_file):
    obj = json.loads(run("harmonic", fig6_file).output)
    assert obj["entries"] and all(e["isomorphism_verified"] for e in obj["entries"])
    literal = json.loads(run("harmonic", fig6_file, "--k0", "first").output)
    assert not all(e["isomorphism_verified"] for e in literal["entries"])


def test_treegram_directions(run, fig6_file, tmp_path):
    t1 = tmp_path / "t1.json"
    g = tmp_path / "g.json"
    assert run("treegram", fig6_file, "-o", t1).exit_code == 0
    run("gpd", fig6_file, "-o", g)
    t2 = run("treegram", g, "--direction", "from-gpd").output
    assert json.loads(t2) == json.loads(t1.read_text())
    back = SegmentDiagram.from_json(json.loads(run("treegram", t1, "--direction", "to-gpd").output))
    assert back.equals(SegmentDiagram.from_json(json.loads(g.read_text())), 1e-9)
    with pytest.warns(UserWarning, match="dendrogram"):
        csv = run("treegram", t1, "--direction", "to-ultrametric").output
    assert csv.splitlines()[0] == "a,b,c,d"


def test_vr_equilateral(run, tmp_path):
    csv = tmp_path / "tri.csv"
    csv.write_text("x,y,z\n0,1,1\n1,0,1\n1,1,0\n")
    obj = json.loads(run("vr", csv, "--max-dim", 2).output)
    assert obj["values"] == [0.0, 1.0]
    assert {"t": 1.0, "verts": ["x", "y", "z"]} in obj["simplices"]


def test_verify_passes_on_fixtures(run, fig6_file, two_points_file):
    for f in (fig6_file, two_points_file):
        res = run("verify", f)
        assert res.exit_code == 0, res.output
        assert "FAIL" not in res.output
        assert "PASS [q=0] gpd.dual_route" in res.output


def test_verify_names_corrupted_diagram(run, fig6_file, tmp_path):
    obj = json.loads(run("gpd", fig6_file).output)
    obj["entries"][1]["basis"][0] = obj["entries"][0]["basis"][0]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    res = run("verify", bad)
    assert res.exit_code == 1
    assert "FAIL diagram.transverse" in res.output


def test_verify_non_orthonormal_basis(run, fig6_file, tmp_path):
    obj = json.loads(run("gpd", fig6_file).output)
    obj["entries"][0]["basis"][0] = [2 * x for x in obj["entries"][0]["basis"][0]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    res = run("verify", bad)
    assert res.exit_code == 1
    assert "FAIL diagram.orthonormal_bases" in res.output


def test_verify_zb_diagram_violation(run, tmp_path):
    obj = {"order": "product", "ambient": 2, "values": [1.0, 2.0], "kind": "zb", "entries": [
        {"b": 1, "d": 2, "dim": 1, "basis": [[1.0, 0.0]]},
        {"b": 2, "d": 2, "dim": 1, "basis": [[0.6, 0.8]]},
        {"b": 1, "d": "inf", "dim": 2, "basis": [[1.0, 0.0], [0.0, 1.0]]},
        {"b": 2, "d": "inf", "dim": 2, "basis": [[1.0, 0.0], [0.0, 1.0]]},
    ]}
    p = tmp_path / "zb.json"
    p.write_text(json.dumps(obj))
    res = run("verify", p)
    assert res.exit_code == 1 and "FAIL diagram.intersection_monotone" in res.output


@pytest.mark.parametrize("content", ["{not json", json.dumps({"values": [1]}),
                                     json.dumps({"values": [1, 1], "simplices": []}),
                                     json.dumps({"values": [1], "simplices": [{"t": 1, "verts": ["a", "a"]}]})])
def test_parse_errors_exit_2(run, tmp_path, content):
    p = tmp_path / "bad.json"
    p.write_text(content)
    for cmd in ("gpd", "pd", "verify"):
        res = run(cmd, p)
        assert res.exit_code == 2, (cmd, res.output)


def test_missing_file_exits_2(run, tmp_path):
    assert run("gpd", tmp_path / "nope.json").exit_code == 2


def test_bad_csv_exits_2(run, tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("a,b\n0,1\n2,0\n")
    assert run("vr", p).exit_code == 2


def test_numerical_rank_failure_exits_3(run, fig6_file):
    res = run("pd", fig6_file, "--tol", 0.3)
    assert res.exit_code == 3
    assert "negative multiplicity" in res.output


def test_stdin_input(fig6_file):
    res = CliRunner().invoke(main, ["gpd", "-"], input=fig6_file.read_text())
    assert res.exit_code == 0 and json.loads(res.output)["entries"]


@pytest.mark.skipif(shutil.which("grasspd") is None, reason="console script not installed")
def test_console_script(fig6_file):
    out = subprocess.run(["grasspd", "gpd", str(fig6_file)], capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["degree"] == 0
