"""Command line front end: subcommands, exit codes, determinism."""

import json

import pytest

from sharpcells.cli import main


@pytest.fixture
def circle(tmp_path):
    p = tmp_path / "circle.fml"
    p.write_text("x^2 + y^2 - 1 = 0")
    return str(p)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_and_fdinfo(circle, capsys):
    code, out, _ = run(["parse", circle], capsys)
    assert code == 0
    assert "free variables: x y" in out
    code, out, _ = run(["fdinfo", circle], capsys)
    assert code == 0
    assert "format 2  degree 2  P-format 2" in out


def test_cad_stats(circle, capsys, tmp_path):
    dest = str(tmp_path / "out.json")
    code, out, _ = run(["cad", circle, "--stats", "--json", dest], capsys)
    assert code == 0
    assert "13 cells" in out
    doc = json.load(open(dest))
    assert len(doc["cells"]) == 13
    assert doc["stats"]["cells"] == 13
    # exact rationals come out as p/q strings (or isolating intervals)
    import re
    rat = re.compile(r"^-?\d+(/\d+)?$")
    for cell in doc["cells"]:
        for value in cell["sample"]:
            if isinstance(value, str):
                assert rat.match(value)
            else:
                assert all(rat.match(s) for s in value["isolating"])


def test_json_is_deterministic(circle, capsys, tmp_path):
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    assert run(["cad", circle, "--seed", "5", "--json", a], capsys)[0] == 0
    assert run(["cad", circle, "--seed", "5", "--json", b], capsys)[0] == 0
    assert open(a, "rb").read() == open(b, "rb").read()


def test_components_and_betti(circle, capsys):
    code, out, _ = run(["components", circle], capsys)
    assert code == 0 and "1 connected component" in out
    code, out, _ = run(["betti", circle], capsys)
    assert code == 0 and "b0 1  b1 1  b2 0" in out


def test_missing_file_is_input_error(capsys):
    code, _, err = run(["components", "no_such_file.fml"], capsys)
    assert code == 1
    assert "no_such_file.fml" in err


def test_parse_error_is_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.fml"
    bad.write_text("x >= 0")
    code, _, err = run(["fdinfo", str(bad)], capsys)
    assert code == 1 and "error" in err


def test_ceiling_exceeded_is_resource_error(tmp_path, capsys):
    f = tmp_path / "ball4.fml"
    f.write_text("w^2 + x^2 + y^2 + z^2 - 1 < 0")
    code, _, err = run(["cad", str(f)], capsys)
    assert code == 2 and "ceiling" in err


def test_choice_evaluation(tmp_path, capsys):
    f = tmp_path / "ray.fml"
    f.write_text("x - l > 0")
    code, out, _ = run(["choice", str(f), "--fiber", "x", "--at", "2"],
                       capsys)
    assert code == 0
    assert "cases C" in out and "(3)" in out


def test_bound_check(tmp_path, capsys):
    files = []
    for d in (1, 2, 3):
        poly = " * ".join(f"(x - {i})" for i in range(1, d + 1))
        p = tmp_path / f"f{d}.fml"
        p.write_text(f"{poly} = 0")
        files.append(str(p))
    code, out, _ = run(["bound-check", *files, "--cap", "3/2"], capsys)
    assert code == 0 and "pass" in out


def test_tree_subcommand(tmp_path, capsys):
    doc = {
        "tree": {"version": 1, "slanted": False,
                 "root": {"kind": "node", "op": "union",
                          "children": [{"kind": "leaf", "name": "a"},
                                       {"kind": "leaf", "name": "b"}]}},
        "leaves": {"a": {"formula": "x^2 + y^2 - 1 = 0", "fd": [2, 2]},
                   "b": {"formula": "x - y > 0", "fd": [2, 1]}},
    }
    f = tmp_path / "tree.json"
    f.write_text(json.dumps(doc))
    code, out, _ = run(["tree", str(f)], capsys)
    assert code == 0 and "tree FD (2, 3)" in out


def test_star_and_report(circle, capsys):
    code, out, _ = run(["star", circle], capsys)
    assert code == 0 and "star FD (2, 2)" in out
    code, out, _ = run(["report", circle], capsys)
    assert code == 0
    assert "star-FD" in out


def test_triangulate_writes_off(tmp_path, capsys):
    f = tmp_path / "disk.fml"
    f.write_text("not (x^2 + y^2 - 1 > 0)")
    off = str(tmp_path / "disk.off")
    code, out, _ = run(["triangulate", str(f), "--off", off], capsys)
    assert code == 0
    assert open(off).read().startswith("OFF")
