from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from spectra_cert.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def test_help_lists_commands(runner):
    result = runner.invoke(main, ["--help"])
    assert result.exit_code == 0
    for cmd in ("run", "spectra", "certify-bernstein", "certify-interval", "certify-domination", "enumerate"):
        assert cmd in result.output


def test_spectra_single_graph(runner):
    result = runner.invoke(main, ["spectra", "--graph6", "Bw", "--p", "3"])
    assert result.exit_code == 0
    row = json.loads(result.output)
    assert row["n"] == 3 and row["m"] == 3
    assert row["p_energy"] == pytest.approx(10.0)
    assert not row["bipartite"]


def test_spectra_bipartite_reports_stoploss(runner):
    result = runner.invoke(main, ["spectra", "--graph6", "Cr", "--t", "0"])
    row = json.loads(result.output)
    assert row["bipartite"] and row["stoploss"] == pytest.approx(16.0)


def test_spectra_file_input_and_bad_line(runner, tmp_path):
    good = tmp_path / "good.g6"
    good.write_text("Bw\nBg\n")
    result = runner.invoke(main, ["spectra", "--input", str(good)])
    assert result.exit_code == 0 and len(result.output.strip().splitlines()) == 2
    bad = tmp_path / "bad.g6"
    bad.write_text("Bw\n!!\n")
    result = runner.invoke(main, ["spectra", "--input", str(bad)])
    assert result.exit_code == 1
    assert "line 2" in result.output


def test_spectra_needs_exactly_one_source(runner):
    assert runner.invoke(main, ["spectra"]).exit_code == 2


@pytest.mark.parametrize("kind, count", [("all", 112), ("trees", 6), ("bipartite", 17)])
def test_enumerate_counts(runner, kind, count):
    result = runner.invoke(main, ["enumerate", "--n", "6", "--class", kind])
    assert result.exit_code == 0
    assert len(result.output.split()) == count


def test_enumerate_edge_list(runner):
    result = runner.invoke(main, ["enumerate", "--n", "3", "--class", "trees", "--format", "edgelist"])
    assert result.exit_code == 0
    assert result.output.splitlines()[:3] == ["3", "0 2", "1 2"]


def test_certify_bernstein(runner):
    result = runner.invoke(main, ["certify-bernstein"])
    assert result.exit_code == 0
    assert "PASS G0" in result.output and "FAIL" not in result.output
    as_json = runner.invoke(main, ["certify-bernstein", "--json"])
    assert json.loads(as_json.output)["passed"]


def test_certify_domination(runner):
    result = runner.invoke(main, ["certify-domination", "--dmax", "5"])
    assert result.exit_code == 0
    assert "exact zero: H(d=3,r=1) at t=3" in result.output
    assert runner.invoke(main, ["certify-domination", "--dmax", "41"]).exit_code == 2


def test_certify_interval_log_format(runner):
    result = runner.invoke(main, ["certify-interval", "--prec", "128"])
    assert result.exit_code == 0
    assert "p=2: boxes=" in result.output and "margin-after-target>=" in result.output
    assert "p=6, q=6: boxes=" in result.output


def test_run_empty_selection_exits_zero(runner, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"suites": {}}))
    result = runner.invoke(main, ["run", "--config", str(cfg), "--out", str(tmp_path / "out"), "--no-plots"])
    assert result.exit_code == 0
    assert json.loads((tmp_path / "out" / "report.json").read_text()) == []


def test_run_small_suite_writes_reports_and_figures(runner, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n_max": {"main": 5}, "p_grid": [2, 3], "threads": 1, "d_max": 5,
                               "suites": {"main": True, "domination": True}}))
    out = tmp_path / "out"
    result = runner.invoke(main, ["run", "--config", str(cfg), "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert "PASS main_theorem" in result.output
    for name in ("report.json", "report.csv", "report.md", "suite_summary.png", "runner_up_separation.png"):
        assert (out / name).stat().st_size > 0


def test_run_bad_config_is_usage_error(runner, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"p_grid": [2,\n 1]}')
    result = runner.invoke(main, ["run", "--config", str(cfg)])
    assert result.exit_code == 2
    assert "p_grid" in result.output
