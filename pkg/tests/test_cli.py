from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from operadforge.cli import main
from operadforge.treekit import make_tree, tree_to_json


@pytest.fixture
def run():
    runner = CliRunner()

    def _run(*args):
        return runner.invoke(main, [str(a) for a in args], catch_exceptions=False)

    return _run


def test_enumerate_counts(run):
    assert run("enumerate", "--labels", 4, "--count").output.strip() == "26"
    assert run("enumerate", "--labels", 3, "--scheme", "rbw", "--count").output.strip() == "18"
    assert run("enumerate", "--labels", 3, "--scheme", "five", "--count").output.strip() == "44"


def test_enumerate_json_is_valid_and_deterministic(run):
    a = run("enumerate", "--labels", 3, "--scheme", "rbw", "--format", "json").output
    b = run("enumerate", "--labels", 3, "--scheme", "rbw", "--format", "json").output
    assert a == b
    assert len(json.loads(a)) == 18


def test_enumerate_domain_error_exits_2(run):
    res = run("enumerate", "--labels", 1)
    assert res.exit_code == 2
    assert "Traceback" not in res.output


def test_verify_passes_and_reports_json(run):
    res = run("verify", "links", "--labels-max", 3, "--workers", 1, "--format", "json")
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["summary"] == [{"suite": "links", "certificates": len(data["certificates"]["links"]), "failures": 0}]
    again = run("verify", "links", "--labels-max", 3, "--workers", 1, "--format", "json")
    assert again.output == res.output


def test_verify_usage_errors(run):
    assert run("verify", "links", "--labels-max", 1).exit_code == 2
    assert run("verify", "nonsense").exit_code == 2


def test_linkcheck_single_tree(run):
    tree = json.dumps(tree_to_json(make_tree({"r": [1], "c": [2, 3]}, {"c": "r"}, {"r": "B", "c": "R"})))
    res = run("linkcheck", "--tree", tree, "--format", "json")
    assert res.exit_code == 0, res.output
    assert all(c["ok"] for c in json.loads(res.output)["certificates"])
    assert run("linkcheck", "--tree", "{not json").exit_code == 2


def test_euler_and_betti(run, tmp_path):
    path = tmp_path / "circle.json"
    path.write_text(json.dumps({"facets": [[0, 1], [1, 2], [2, 0]]}))
    assert run("euler", path).output.strip() == "0"
    assert json.loads(run("betti", path).output) == [1, 1]
    assert json.loads(run("betti", path, "--reduced").output) == {"1": 1}
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert run("euler", bad).exit_code == 2


def test_stratlab_boundary(run):
    res = run("stratlab", "boundary", "--model", "interval", "--arity", 3, "--format", "json")
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["recognized"]["kind"] == "circles"
    assert data["counts"] == {"0": 12, "1": 12}
    assert data["free"] is True
    dot = run("stratlab", "boundary", "--arity", 3, "--format", "dot").output
    assert dot.startswith("digraph")


def test_stratlab_boundary_with_fill(run):
    res = run("stratlab", "boundary", "--arity", 4, "--fill", 3, "--format", "json")
    data = json.loads(res.output)
    assert data["euler"] == data["stratified_euler"]


def test_stratlab_unknown_model(run):
    assert run("stratlab", "boundary", "--model", "nope", "--arity", 3).exit_code == 2


def test_stratlab_validate_and_export(run, tmp_path):
    assert run("stratlab", "validate", "--model", "interval").exit_code == 0
    exported = run("stratlab", "export", "--model", "interval").output
    path = tmp_path / "model.json"
    path.write_text(exported)
    res = run("stratlab", "boundary", "--model", path, "--arity", 3, "--format", "json")
    assert json.loads(res.output)["counts"] == {"0": 12, "1": 12}


def test_stratlab_extend_writes_model(run, tmp_path):
    out = tmp_path / "extended.json"
    res = run("stratlab", "extend", "--model", "trivial", "--output", out, "--format", "json")
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["valid"] is True
    assert data["operad_recognized"]["kind"] == "arcs"
    assert json.loads(out.read_text())["kind"] == "bimodule"


def test_examples_exit_codes(run):
    assert run("example", "hexagons").exit_code == 0
    assert run("stratlab", "example", "fm1", "--format", "json").exit_code == 0
    assert run("example", "bogus").exit_code == 2


def test_report_writes_files(run, tmp_path):
    res = run("report", "--out", tmp_path, "--labels-max", 2)
    assert res.exit_code == 0
    lines = res.output.splitlines()
    begin, end = lines.index("----- BEGIN REPORT -----"), lines.index("----- END REPORT -----")
    assert begin < end
    rows = [line.split("\t") for line in lines[begin + 1 : end]]
    assert {r[0] for r in rows} >= {"hexagons", "sweep"}
    figures = [line.split("\t")[1] for line in lines[end + 1 :] if line.startswith("figure\t")]
    assert len(figures) == 3
    for f in figures:
        with open(f, "rb") as fh:
            assert fh.read(8) == b"\x89PNG\r\n\x1a\n"
    assert (tmp_path / "summary.tsv").read_text().startswith("section\titem")
