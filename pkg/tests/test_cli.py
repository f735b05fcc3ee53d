"""End-to-end CLI behavior: commands, formats, exit codes, determinism."""

import json
import math

import pytest
from click.testing import CliRunner

from drgsplit.cache import CACHE_DIR_ENV
from drgsplit.cli import main
from drgsplit.graphs import read_graph


@pytest.fixture
def runner():
    return CliRunner()


def test_build_writes_graph_file(runner, tmp_path):
    out = tmp_path / "q3.json"
    result = runner.invoke(
        main, ["build", "--family", "hypercube", "--param", "3", "--out", str(out)]
    )
    assert result.exit_code == 0
    assert "wrote" in result.output
    g = read_graph(out)
    assert g.n == 8
    assert len(g.edges) == 12


def test_build_prints_graph_text_without_out(runner):
    result = runner.invoke(main, ["build", "--family", "cycle", "--param", "8"])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["n"] == 8
    assert len(doc["edges"]) == 8


def test_build_rejects_too_small_family_member(runner):
    result = runner.invoke(main, ["build", "--family", "hypercube", "--param", "2"])
    assert result.exit_code == 15
    assert "error:" in result.stderr


def test_verify_default_report_path(runner, tmp_path):
    with runner.isolated_filesystem(temp_dir=tmp_path) as fs:
        result = runner.invoke(
            main, ["verify", "--family", "hypercube", "--param", "3"]
        )
        assert result.exit_code == 0
        assert "**PASS**" in result.output
        assert "report written to hypercube-3.report.json" in result.output
        with open(f"{fs}/hypercube-3.report.json", encoding="utf-8") as fh:
            report = json.load(fh)
        assert report["ok"] is True
        assert report["exit_code"] == 0


def test_verify_csv_and_markdown_formats(runner, tmp_path):
    csv_out = tmp_path / "r.csv"
    md_out = tmp_path / "r.md"
    csv_run = runner.invoke(
        main,
        ["verify", "--family", "cycle", "--param", "8",
         "--format", "csv", "--out", str(csv_out)],
    )
    md_run = runner.invoke(
        main,
        ["verify", "--family", "cycle", "--param", "8",
         "--format", "markdown", "--out", str(md_out)],
    )
    assert csv_run.exit_code == 0 and md_run.exit_code == 0
    csv_text = csv_out.read_text()
    assert csv_text.startswith("key,value\n")
    md_text = md_out.read_text()
    assert md_text.startswith("# Verification report: C_8")
    # same numbers in both renderings: spot-check the duality field
    line = next(
        l for l in csv_text.splitlines()
        if l.startswith("duality.dd_uu.worst_offdiagonal,")
    )
    value = line.split(",", 1)[1]
    assert value in md_text


def test_verify_graph_file_positional(runner, tmp_path):
    graph_path = tmp_path / "mygraph.json"
    built = runner.invoke(
        main,
        ["build", "--family", "hypercube", "--param", "3", "--out", str(graph_path)],
    )
    assert built.exit_code == 0
    with runner.isolated_filesystem(temp_dir=tmp_path) as fs:
        result = runner.invoke(main, ["verify", str(graph_path)])
        assert result.exit_code == 0
        assert "report written to mygraph.report.json" in result.output


def test_verify_impossible_tolerance_reports_duality_violation(runner, tmp_path):
    out = tmp_path / "r.json"
    result = runner.invoke(
        main,
        ["verify", "--family", "hypercube", "--param", "3",
         "--tol-orth", "1e-20", "--out", str(out)],
    )
    assert result.exit_code == 13
    report = json.loads(out.read_text())
    assert report["ok"] is False
    assert any(
        c["name"].startswith("duality.orthogonality") and not c["ok"]
        for c in report["checks"]
    )


def test_verify_diameter_too_small_exit_code(runner):
    result = runner.invoke(main, ["verify", "--family", "cycle", "--param", "5"])
    assert result.exit_code == 15
    assert "error:" in result.stderr


def test_verify_not_distance_regular_exit_code(runner, tmp_path):
    # the 3-cube with one edge removed is connected but not distance-regular
    graph_path = tmp_path / "broken.json"
    built = runner.invoke(
        main,
        ["build", "--family", "hypercube", "--param", "3", "--out", str(graph_path)],
    )
    assert built.exit_code == 0
    doc = json.loads(graph_path.read_text())
    doc["edges"] = doc["edges"][:-1]
    graph_path.write_text(json.dumps(doc))
    result = runner.invoke(main, ["verify", str(graph_path)])
    assert result.exit_code == 10
    assert "error:" in result.stderr


def test_usage_errors(runner, tmp_path):
    graph_path = tmp_path / "g.json"
    runner.invoke(
        main, ["build", "--family", "cycle", "--param", "8", "--out", str(graph_path)]
    )
    both = runner.invoke(
        main, ["verify", str(graph_path), "--family", "cycle", "--param", "8"]
    )
    assert both.exit_code == 2
    neither = runner.invoke(main, ["verify"])
    assert neither.exit_code == 2


def test_ordering_selector_out_of_range(runner):
    result = runner.invoke(
        main, ["verify", "--family", "hypercube", "--param", "3", "--ordering", "5"]
    )
    assert result.exit_code == 16
    assert "error:" in result.stderr


def test_reports_are_byte_identical_across_runs(runner, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for path in paths:
        result = runner.invoke(
            main,
            ["verify", "--family", "johnson", "--param", "7", "--param", "3",
             "--seed", "5", "--out", str(path)],
        )
        assert result.exit_code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_dims_json_matches_closed_form(runner):
    result = runner.invoke(
        main, ["dims", "--family", "hypercube", "--param", "4"]
    )
    assert result.exit_code == 0
    doc = json.loads(result.output)
    expected = [
        [math.comb(4, min(i, j)) if i + j == 4 else 0 for j in range(5)]
        for i in range(5)
    ]
    for pair in ("dd", "du", "ud", "uu"):
        assert doc["dims"][pair] == expected


def test_dims_csv_and_markdown(runner, tmp_path):
    csv_run = runner.invoke(
        main, ["dims", "--family", "cycle", "--param", "8", "--format", "csv"]
    )
    assert csv_run.exit_code == 0
    lines = csv_run.output.splitlines()
    assert lines[0] == "pair,i,j,dim"
    assert "dd,0,4,1" in lines
    md_out = tmp_path / "dims.md"
    md_run = runner.invoke(
        main,
        ["dims", "--family", "cycle", "--param", "8",
         "--format", "markdown", "--out", str(md_out)],
    )
    assert md_run.exit_code == 0
    assert md_out.read_text() == md_run.output


def test_cache_dir_env_and_flag(runner, tmp_path, monkeypatch):
    env_cache = tmp_path / "envcache"
    monkeypatch.setenv(CACHE_DIR_ENV, str(env_cache))
    out = tmp_path / "r1.json"
    result = runner.invoke(
        main,
        ["verify", "--family", "hypercube", "--param", "3", "--out", str(out)],
    )
    assert result.exit_code == 0
    assert list(env_cache.glob("*.scheme.json"))

    flag_cache = tmp_path / "flagcache"
    out2 = tmp_path / "r2.json"
    result = runner.invoke(
        main,
        ["verify", "--family", "hypercube", "--param", "3",
         "--cache-dir", str(flag_cache), "--out", str(out2)],
    )
    assert result.exit_code == 0
    assert list(flag_cache.glob("*.scheme.json"))
