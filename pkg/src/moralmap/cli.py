"""Pipeline driver: validate, synth, build, serve, stats, export.

Exit codes are a stable scripting contract: 0 success, 1 validation failure,
2 data error, 3 runtime error.
"""

from __future__ import annotations

import json
import sys
from dataclasses import fields as dc_fields
from datetime import date
from pathlib import Path

import click
import yaml

from . import analytics, synthgen
from .config import ConfigError, PipelineConfig
from .context import ContextError
from .corpus import CorpusError
from .geo import GeoError
from .inference import InferenceError, ModelSpec, pearson
from .pipeline import BuildError, build as run_build
from .service import (
    FilterError,
    inference_payload,
    parse_filter,
    summary_payload,
    timeline_payload,
)
from .snapshot import SnapshotError, load_snapshot
from .taxonomy import TaxonomyError

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_DATA = 2
EXIT_RUNTIME = 3

_DATA_ERRORS = (
    CorpusError, GeoError, ContextError, TaxonomyError, BuildError,
    SnapshotError, InferenceError, FilterError,
)


def _die(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@click.group()
def main() -> None:
    """Moral-framing geospatial analytics pipeline."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path())
def validate(config_path: str) -> None:
    """Check the config: every path and schema, reporting all failures at once."""
    try:
        cfg = PipelineConfig.load(config_path)
    except ConfigError as exc:
        _die(EXIT_VALIDATION, str(exc))
    problems = cfg.validate()
    if problems:
        for p in problems:
            click.echo(f"invalid: {p}", err=True)
        sys.exit(EXIT_VALIDATION)
    click.echo("config ok")


@main.command()
@click.argument("spec_file", type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
def synth(spec_file: str, out_dir: str) -> None:
    """Generate a synthetic dataset (corpus + context files + ground truth)."""
    try:
        spec = load_synth_spec(spec_file)
        truth = synthgen.generate(spec, out_dir)
    except (ValueError, OSError) as exc:
        _die(EXIT_DATA, str(exc))
    click.echo(
        f"generated {len(truth.tweet_counties)} tweets over "
        f"{len(truth.county_context)} counties into {out_dir}"
    )


def load_synth_spec(path: str) -> synthgen.SynthSpec:
    with open(path, encoding="utf-8") as fh:
        raw = yaml.safe_load(fh) or {}
    if raw.get("scenario") == "default":
        overrides = {k: v for k, v in raw.items() if k != "scenario"}
        spec = synthgen.default_scenario()
        for key, value in overrides.items():
            if not hasattr(spec, key):
                raise ValueError(f"unknown synth spec field {key!r}")
            setattr(spec, key, _coerce_spec_value(key, value))
        return spec
    known = {f.name for f in dc_fields(synthgen.SynthSpec)}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown synth spec field(s): {sorted(unknown)}")
    kwargs = {k: _coerce_spec_value(k, v) for k, v in raw.items()}
    return synthgen.SynthSpec(**kwargs)


def _coerce_spec_value(key: str, value):
    if key in ("date_start", "date_end") and not isinstance(value, date):
        return date.fromisoformat(str(value))
    if key == "planted":
        return [synthgen.PlantedEffect(**e) for e in value]
    return value


@main.command(name="build")
@click.option("--config", "config_path", required=True, type=click.Path())
def build_cmd(config_path: str) -> None:
    """Run the full ingest/geotag/join/aggregate pipeline into the output dir."""
    try:
        cfg = PipelineConfig.load(config_path)
    except ConfigError as exc:
        _die(EXIT_VALIDATION, str(exc))
    problems = cfg.validate()
    if problems:
        for p in problems:
            click.echo(f"invalid: {p}", err=True)
        sys.exit(EXIT_VALIDATION)
    try:
        result = run_build(cfg)
    except _DATA_ERRORS as exc:
        _die(EXIT_DATA, str(exc))
    except Exception as exc:  # noqa: BLE001 - runtime contract
        _die(EXIT_RUNTIME, f"unexpected failure: {exc}")
    click.echo(
        f"built {result.dataset_dir}: {result.n_tweets} tweets, "
        f"{result.n_assigned} assigned, {result.n_vectors} county vectors"
    )


@main.command(name="serve")
@click.argument("dataset_dir", type=click.Path())
@click.option("--config", "config_path", default=None, type=click.Path())
@click.option("--host", default=None)
@click.option("--port", default=None, type=int)
@click.option("--static-dir", default=None, type=click.Path())
def serve_cmd(dataset_dir, config_path, host, port, static_dir) -> None:
    """Serve a built dataset over HTTP."""
    from .service import serve as run_serve

    cfg_host, cfg_port = "127.0.0.1", 8008
    if config_path:
        try:
            cfg = PipelineConfig.load(config_path)
            cfg_host, cfg_port = cfg.serve_host, cfg.serve_port
        except ConfigError as exc:
            _die(EXIT_VALIDATION, str(exc))
    if not Path(dataset_dir).is_dir():
        _die(EXIT_DATA, f"dataset directory not found: {dataset_dir}")
    try:
        run_serve(dataset_dir, host or cfg_host, port or cfg_port, static_dir)
    except _DATA_ERRORS as exc:
        _die(EXIT_DATA, str(exc))
    except OSError as exc:
        _die(EXIT_RUNTIME, str(exc))


@main.command()
@click.argument("dataset_dir", type=click.Path(exists=True))
@click.option("--summary", "show_summary", is_flag=True)
@click.option("--timeline", "show_timeline", is_flag=True)
@click.option("--width", default=None, type=int)
@click.option("--pearson", "pearson_vars", nargs=2, default=None,
              help="Two column names (features or context fields).")
@click.option("--fit", "fit_vars", multiple=True,
              help="dependent first, then predictors; repeat the flag.")
@click.option("--filter", "filter_str", default=None)
def stats(dataset_dir, show_summary, show_timeline, width, pearson_vars,
          fit_vars, filter_str) -> None:
    """Headless reports with numbers identical to the service responses."""
    try:
        snap = load_snapshot(dataset_dir)
        flt = parse_filter(filter_str)
        if show_summary:
            payload = summary_payload(snap, flt)
            click.echo("frame,count,pro_share,mean_sentiment,vivid_share,mean_virality")
            for row in payload["frames"]:
                click.echo(
                    f"{row['frame']},{row['count']},{row['pro_share']},"
                    f"{row['mean_sentiment']},{row['vivid_share']},{row['mean_virality']}"
                )
            click.echo(f"total,{payload['total']},,,,")
        if show_timeline:
            payload = timeline_payload(snap, width or snap.bin_width_days, flt)
            cols = "bin_start,total,pro_count,anti_count,mean_sentiment,total_virality"
            if snap.has_covid:
                cols += ",new_cases,new_deaths"
            click.echo(cols)
            for b in payload["bins"]:
                line = (
                    f"{b['bin_start']},{b['total']},{b['pro_count']},{b['anti_count']},"
                    f"{b['mean_sentiment']},{b['total_virality']}"
                )
                if snap.has_covid:
                    line += f",{b['new_cases']},{b['new_deaths']}"
                click.echo(line)
        if pearson_vars:
            x_name, y_name = pearson_vars
            rows = snap.inference_rows
            pairs = [
                (r.get(x_name), r.get(y_name))
                for r in rows
                if _finite(r.get(x_name)) and _finite(r.get(y_name))
            ]
            if rows and (x_name not in rows[0] or y_name not in rows[0]):
                raise InferenceError(f"unknown field in --pearson: {x_name}, {y_name}")
            result = pearson([p[0] for p in pairs], [p[1] for p in pairs])
            click.echo("x,y,r,n,t_stat,p_value")
            from .inference import _sig
            click.echo(
                f"{x_name},{y_name},{_sig(result.r, 6)},{result.n},"
                f"{_sig(result.t_stat, 6)},{_sig(result.p_value, 6)}"
            )
        if fit_vars:
            if len(fit_vars) < 2:
                raise InferenceError("--fit needs a dependent and at least one predictor")
            spec = ModelSpec(dependent=fit_vars[0], predictors=tuple(fit_vars[1:]))
            payload = inference_payload(snap, spec)
            model = payload["model"]
            click.echo("term,coefficient,std_error,t_stat,p_value")
            for i, term in enumerate(model["terms"]):
                click.echo(
                    f"{term},{model['coefficients'][i]},{model['std_errors'][i]},"
                    f"{model['t_stats'][i]},{model['p_values'][i]}"
                )
            click.echo(f"r_squared,{model['r_squared']},,,")
            click.echo(f"n,{model['n_observations']},,,")
    except _DATA_ERRORS as exc:
        _die(EXIT_DATA, str(exc))


def _finite(v) -> bool:
    import math
    return v is not None and isinstance(v, (int, float)) and math.isfinite(v)


@main.command()
@click.argument("dataset_dir", type=click.Path(exists=True))
@click.option("--what", type=click.Choice(["features", "timeline", "summary"]),
              required=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--filter", "filter_str", default=None)
@click.option("--width", default=None, type=int)
def export(dataset_dir, what, out_path, filter_str, width) -> None:
    """Export a dataset table as delimited text (or JSON for summary)."""
    try:
        snap = load_snapshot(dataset_dir)
        flt = parse_filter(filter_str)
        if what == "features":
            subset = analytics.filter_tweets(snap.tagged, flt, snap.state_of)
            vectors, _ = analytics.aggregate_counties(subset, snap.contexts, snap.taxonomy)
            analytics.export_feature_table(vectors, out_path)
        elif what == "timeline":
            bins = analytics.bin_timeline(
                snap.tagged, snap.covid, width or snap.bin_width_days, flt,
                snap.state_of, snap.taxonomy,
            )
            analytics.export_timeline(bins, out_path, snap.taxonomy)
        else:
            payload = summary_payload(snap, flt)
            with open(out_path, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, sort_keys=True, indent=1)
    except _DATA_ERRORS as exc:
        _die(EXIT_DATA, str(exc))
    click.echo(f"wrote {out_path}")


if __name__ == "__main__":
    main()
