import json

import pytest

from conftest import cube11, scalene_simplex
from projcong import io
from projcong.cli import main
from projcong.kernel import linear_image, negate, translate


@pytest.fixture
def files(tmp_path):
    P = scalene_simplex()
    paths = {}
    for name, K in {"P": P, "R": translate(negate(P), (1, 2, 3)), "C": cube11(),
                    "rot": linear_image(P, [(0, -1, 0), (1, 0, 0), (0, 0, 1)])}.items():
        paths[name] = tmp_path / f"{name}.json"
        paths[name].write_text(io.dumps(io.polytope_to_json(K)))
    return paths


def test_decide_positive(files, tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["decide", str(files["P"]), str(files["R"]), "--jobs", "1", "--report", str(out)]) == 0
    assert json.loads(out.read_text())["verdict"] == {"kind": "ReflectTranslate", "b": ["1", "2", "3"]}


def test_decide_not_congruent(files, capsys):
    assert main(["decide", str(files["P"]), str(files["rot"]), "--jobs", "1"]) == 1
    assert json.loads(capsys.readouterr().out)["verdict"]["kind"] == "NotCongruent"


def test_decide_sections(files, capsys):
    assert main(["decide", str(files["C"]), str(files["C"]), "--mode", "sections", "--jobs", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["verdict"] == {"kind": "Identity"}


def test_input_errors(files, tmp_path, capsys):
    assert main(["decide", str(tmp_path / "missing.json"), str(files["P"])]) == 3
    assert main(["decide", str(files["P"]), str(files["P"]), "--samples", "1"]) == 3
    with pytest.raises(SystemExit) as e:
        main(["decide", str(files["P"])])
    assert e.value.code == 3
    assert main(["project", str(files["P"]), "--xi", "0,0,0"]) == 3


def test_project_section_stratify(files, tmp_path, capsys):
    svg = tmp_path / "a.svg"
    assert main(["project", str(files["C"]), "--xi", "1,1,1", "--svg", str(svg)]) == 0
    assert len(json.loads(capsys.readouterr().out)["vertices"]) == 6
    assert svg.read_text().startswith("<svg")
    assert main(["section", str(files["C"]), "--xi", "1,1,1"]) == 0
    assert len(json.loads(capsys.readouterr().out)["vertices"]) == 6
    assert main(["stratify", str(files["C"]), "--svg", str(svg)]) == 0
    data = json.loads(capsys.readouterr().out)
    assert len(data["circles"]) == 3 and len(data["cells"]) == 8


def test_congruent_and_minkowski(files, tmp_path, capsys):
    a = tmp_path / "a.json"
    main(["project", str(files["C"]), "--xi", "1,2,3", "--out", str(a)])
    assert main(["congruent", str(a), str(a)]) == 0
    assert len(json.loads(capsys.readouterr().out)["witnesses"]) == 2
    poly = tmp_path / "poly.json"
    poly.write_text(json.dumps({"normals": [[1, 0], [0, 1], [-1, 0], [0, -1]], "lengths": [2, 1, 2, 1]}))
    assert main(["minkowski2d", str(poly)]) == 0
    assert len(json.loads(capsys.readouterr().out)["vertices"]) == 4


def test_classify_lines(tmp_path, capsys):
    f = tmp_path / "lines.json"
    f.write_text(json.dumps({"lines": [{"a": [0, 0, 1], "b": [1, 1, 0]}, {"a": [0, 0, 1], "b": [2, 1, 0]},
                                       {"a": [0, 0, 1], "b": [3, 2, 0]}, {"a": [0, 0, 1], "b": [4, 2, 0]}]}))
    assert main(["classify-lines", str(f)]) == 0
    assert json.loads(capsys.readouterr().out) == {"kind": "ParallelTranslate", "b": ["2", "1", "0"]}
