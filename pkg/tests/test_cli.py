import io
import json
import random
import subprocess
import sys

import pytest

from breakdiv.cli import run
from breakdiv.fixtures import random_graph


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv)
    return code, json.loads(out)


def no_floats(obj, allowed=()):
    if isinstance(obj, float):
        return False
    if isinstance(obj, dict):
        return all(k in allowed or no_floats(v, allowed) for k, v in obj.items())
    if isinstance(obj, list):
        return all(no_floats(v, allowed) for v in obj)
    return True


def test_canonical(tri, graph_file, tmp_path):
    d = tmp_path / "d.json"
    d.write_text('{"v1": 2, "v2": -1}')
    assert call_json("canonical", "--graph", graph_file(tri), "--divisor", str(d)) == (
        0,
        {"break_divisor": {"v3": 1}},
    )


def test_verify(th, graph_file):
    code, report = call_json("verify", "--graph", graph_file(th))
    assert code == 0
    assert (report["det"], report["wG"], report["trees"], report["identity"]) == ("8", "8", 3, True)
    assert report["passed"]


def test_is_break(thu, graph_file):
    path = graph_file(thu)
    assert call_json("is-break", "--graph", path, "--divisor", '{"x": 2}') == (
        1,
        {"break": False, "witness": ["u", "v", "y"]},
    )
    code, report = call_json("is-break", "--graph", path, "--divisor", '{"x": 1, "y": 1}')
    assert code == 0 and report["certificate"]["tree"] == ["a1", "b", "c1"]


def test_reduce_and_orient(tri, th, graph_file):
    code, report = call_json("reduce", "--graph", graph_file(tri), "--divisor", '{"v1":2,"v2":-1}', "--q", "v3")
    assert code == 0 and report["reduced"] == {"v3": 1}
    code, report = call_json("orient", "--graph", graph_file(th), "--divisor", '{"u":3,"v":-2}')
    assert report["divisor"] == {"v": 1} and report["firings"] == [["u"]]
    code, report = call_json("q-orient", "--graph", graph_file(th), "--divisor", '{"u":-1,"v":2}', "--q", "v")
    assert report["divisor"] == {"u": 2, "v": -1}
    assert len(report["break_set"]) == 2


def test_metric_canonical(th, graph_file):
    d = '{"points": [{"edge": "b", "offset": "1/2", "coeff": 2}]}'
    code, report = call_json("canonical", "--graph", graph_file(th), "--metric", "--divisor", d)
    assert code == 0
    assert report["break_divisor"]["points"] == [{"vertex": "u", "coeff": 1}, {"vertex": "v", "coeff": 1}]


def test_enumerate_and_trees(thu, th, graph_file):
    code, report = call_json("enumerate-break", "--graph", graph_file(thu))
    assert report["count"] == report["trees"] == 8
    code, report = call_json("trees", "--graph", graph_file(th), "--conductance", "length")
    assert report["wG"] == "8" and report["wG_prime"] == "5"
    code, report = call_json("trees", "--graph", graph_file(th))
    assert report["wG_prime"] == "2"


def test_volumes(th, graph_file):
    code, report = call_json("volumes", "--graph", graph_file(th))
    assert [c["vol_ratio"] for c in report["cells"]] == ["1/4", "1/2", "1/4"]
    assert report["ratio_sum"] == "1" and report["reduced_laplacian_det"] == "2"
    assert no_floats(report, allowed=report["approx_fields"])


def test_equiv(tri, graph_file):
    path = graph_file(tri)
    code, report = call_json("equiv", "--graph", path, "--divisor", '{"v1":2,"v2":-1}', "--divisor", '{"v3":1}')
    assert code == 0 and report["equivalent"]
    code, report = call_json("equiv", "--graph", path, "--divisor", '{"v1":1}', "--divisor", '{"v2":1}')
    assert code == 1 and not report["equivalent"]


def test_jacobian_svg(th, tri, graph_file, tmp_path):
    out = tmp_path / "cells.svg"
    code, report = call_json("jacobian-svg", "--graph", graph_file(th), "--out", str(out))
    assert code == 0 and report["areas"] == ["1/4", "1/2", "1/4"]
    assert out.read_text().startswith("<svg")
    code, text, _ = call("jacobian-svg", "--graph", graph_file(th))
    assert text.startswith("<svg")
    code, _, err = call("jacobian-svg", "--graph", graph_file(tri))
    assert code == 2 and "genus" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["trees", "--graph", "/nonexistent.json"],
        ["trees", "--graph", "{not json"],
        ["trees", "--graph", '{"vertices": ["u","v"], "edges": []}'],
        ["canonical", "--graph", '{"vertices": ["u"], "edges": []}'],
        ["canonical", "--graph", '{"vertices": ["u"], "edges": []}', "--divisor", '{"w": 1}'],
        ["canonical", "--graph", '{"vertices": ["u"], "edges": []}', "--divisor", '{"u": 1.5}'],
    ],
)
def test_invalid_input(argv):
    code, out, err = call(*argv)
    assert code == 2 and err.startswith("breakdiv: error")


def test_bad_subcommand():
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate", "--graph", "x"], stderr=io.StringIO())
    assert exc.value.code == 2


def test_text_format(th, graph_file):
    code, text, _ = call("verify", "--graph", graph_file(th), "--format", "text")
    assert "det: 8" in text.splitlines()


def test_deterministic_given_seed(graph_file):
    g = random_graph(random.Random(4), max_vertices=5, max_edges=8)
    path = graph_file(g)
    a = call("verify", "--graph", path, "--seed", "9")
    b = call("verify", "--graph", path, "--seed", "9")
    assert a == b and a[0] == 0


def test_reports_round_trip(thu, graph_file):
    path = graph_file(thu)
    for argv in (["trees"], ["volumes"], ["verify"], ["enumerate-break"]):
        code, text, _ = call(*argv, "--graph", path)
        report = json.loads(text)
        assert json.loads(json.dumps(report)) == report
        assert no_floats(report, allowed=report.get("approx_fields", ()))


def test_console_script(th, graph_file):
    proc = subprocess.run(
        [sys.executable, "-m", "breakdiv.cli", "verify", "--graph", graph_file(th)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["identity"] is True
