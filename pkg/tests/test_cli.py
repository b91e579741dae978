from pathlib import Path

import pytest
from click.testing import CliRunner

from moralmap import synthgen
from moralmap.cli import main

from conftest import write_config


@pytest.fixture()
def runner():
    return CliRunner()


def test_validate_ok(runner, synth_workspace):
    result = runner.invoke(main, ["validate", "--config",
                                  str(synth_workspace["config_path"])])
    assert result.exit_code == 0
    assert "config ok" in result.output


def test_validate_missing_path_named(runner, tmp_path):
    cfg = tmp_path / "config.yaml"
    cfg.write_text(
        "paths:\n  corpus: missing.csv\n  boundaries: missing.geojson\n"
        "  census: missing.csv\n  elections: e.csv\n  mask: m.csv\n  output: out\n"
    )
    result = runner.invoke(main, ["validate", "--config", str(cfg)])
    assert result.exit_code == 1
    assert "paths.corpus" in result.output


def test_validate_reports_all_failures_at_once(runner, tmp_path):
    cfg = tmp_path / "config.yaml"
    cfg.write_text(
        "paths:\n  corpus: missing.csv\n  boundaries: missing.geojson\n"
        "  census: c.csv\n  elections: e.csv\n  mask: m.csv\n  output: out\n"
        "bin_width_days: 0\n"
    )
    result = runner.invoke(main, ["validate", "--config", str(cfg)])
    assert result.exit_code == 1
    assert "paths.corpus" in result.output
    assert "bin_width_days" in result.output


def test_synth_command(runner, tmp_path):
    spec = tmp_path / "spec.yaml"
    spec.write_text("seed: 4\nn_tweets: 60\nn_counties: 6\n")
    result = runner.invoke(main, ["synth", str(spec), "--out", str(tmp_path / "out")])
    assert result.exit_code == 0
    assert (tmp_path / "out" / "corpus.csv").exists()
    assert (tmp_path / "out" / "ground_truth.json").exists()


def test_synth_default_scenario_with_overrides(runner, tmp_path):
    spec = tmp_path / "spec.yaml"
    spec.write_text("scenario: default\nseed: 2\nn_tweets: 80\nn_counties: 10\n")
    result = runner.invoke(main, ["synth", str(spec), "--out", str(tmp_path / "out")])
    assert result.exit_code == 0
    assert "80 tweets" in result.output


def test_synth_unknown_field_fails(runner, tmp_path):
    spec = tmp_path / "spec.yaml"
    spec.write_text("bogus_field: 1\n")
    result = runner.invoke(main, ["synth", str(spec), "--out", str(tmp_path / "out")])
    assert result.exit_code == 2


def test_build_deterministic_manifest(runner, tmp_path):
    spec = synthgen.SynthSpec(seed=21, n_tweets=150, n_counties=12)
    synthgen.generate(spec, tmp_path / "inputs")
    cfg_a = write_config(tmp_path, output="ds_a")
    res = runner.invoke(main, ["build", "--config", str(cfg_a)])
    assert res.exit_code == 0, res.output
    cfg_b = write_config(tmp_path, output="ds_b")
    res = runner.invoke(main, ["build", "--config", str(cfg_b)])
    assert res.exit_code == 0
    for name in ["manifest.json", "tagged_corpus.csv", "county_features.csv",
                 "timeline.csv", "contexts.csv"]:
        assert (tmp_path / "ds_a" / name).read_bytes() == \
            (tmp_path / "ds_b" / name).read_bytes(), name


def test_build_corrupt_covid_fails_with_context(runner, tmp_path):
    spec = synthgen.SynthSpec(seed=22, n_tweets=50, n_counties=5)
    synthgen.generate(spec, tmp_path / "inputs")
    covid = tmp_path / "inputs" / "covid.csv"
    covid.write_text("fips,date,cases,deaths\n00101,2020-04-01,notanumber,0\n")
    cfg = write_config(tmp_path)
    result = runner.invoke(main, ["build", "--config", str(cfg)])
    assert result.exit_code == 2
    assert "covid.csv" in result.output
    assert "row 1" in result.output


def test_stats_summary_totals(runner, synth_workspace, synth_snapshot):
    result = runner.invoke(main, ["stats", str(synth_workspace["dataset"]),
                                  "--summary"])
    assert result.exit_code == 0
    assert f"total,{len(synth_snapshot.tagged)}" in result.output


def test_stats_pearson_planted_correlation(runner, synth_workspace):
    result = runner.invoke(main, ["stats", str(synth_workspace["dataset"]),
                                  "--pearson", "mask_use", "f9"])
    assert result.exit_code == 0
    header, row = [l for l in result.output.strip().splitlines()][-2:]
    parts = row.split(",")
    r, p = float(parts[2]), float(parts[5])
    assert r > 0
    assert p < 0.05


def test_stats_deterministic_bytes(runner, synth_workspace):
    args = ["stats", str(synth_workspace["dataset"]), "--summary", "--timeline"]
    out1 = runner.invoke(main, args).output
    out2 = runner.invoke(main, args).output
    assert out1 == out2


def test_stats_fit_matches_service_numbers(runner, synth_workspace, synth_snapshot):
    from moralmap.inference import ModelSpec
    from moralmap.service import inference_payload

    result = runner.invoke(main, ["stats", str(synth_workspace["dataset"]),
                                  "--fit", "mean_sentiment", "--fit", "vote_margin"])
    assert result.exit_code == 0
    payload = inference_payload(synth_snapshot,
                                ModelSpec("mean_sentiment", ("vote_margin",)))
    slope = payload["model"]["coefficients"][1]
    assert f"vote_margin,{slope}" in result.output


def test_stats_unknown_field(runner, synth_workspace):
    result = runner.invoke(main, ["stats", str(synth_workspace["dataset"]),
                                  "--pearson", "mask_use", "nosuch"])
    assert result.exit_code == 2


def test_export_features(runner, synth_workspace, tmp_path):
    out = tmp_path / "features.csv"
    result = runner.invoke(main, ["export", str(synth_workspace["dataset"]),
                                  "--what", "features", "--out", str(out)])
    assert result.exit_code == 0
    header = out.read_text().splitlines()[0]
    assert header.startswith("fips,n_tweets,f1,")
    built = (synth_workspace["dataset"] / "county_features.csv").read_text()
    assert out.read_text() == built


def test_serve_missing_dir_nonzero(runner, tmp_path):
    result = runner.invoke(main, ["serve", str(tmp_path / "nope")])
    assert result.exit_code == 2
