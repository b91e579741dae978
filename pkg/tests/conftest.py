from __future__ import annotations

from datetime import datetime, timezone
from pathlib import Path

import pytest

from moralmap import synthgen
from moralmap.config import PipelineConfig
from moralmap.corpus import AnnotatedTweet, Stance
from moralmap.geo import CountyGeometry, _ring_bbox
from moralmap.pipeline import build
from moralmap.snapshot import load_snapshot
from moralmap.taxonomy import default_taxonomy

TAX = default_taxonomy()


def square_county(fips: str, x0: float, y0: float, size: float = 1.0,
                  state: str = "AA", name: str = "") -> CountyGeometry:
    ring = [(x0, y0), (x0 + size, y0), (x0 + size, y0 + size), (x0, y0 + size), (x0, y0)]
    return CountyGeometry(
        fips=fips, name=name or f"Square {fips}", state=state,
        polygons=((ring, ()),), bbox=_ring_bbox([ring]),
    )


def make_tweet(tid: str = "t1", ts: str = "2020-03-15T12:00:00+00:00",
               lat: float = 0.5, lon: float = 0.5, frame: str = "Care",
               stance: Stance = Stance.PRO, sentiment: float = 0.0,
               vivid: bool = False, virality: float = 0.0,
               hashtags: tuple[str, ...] = ()) -> AnnotatedTweet:
    return AnnotatedTweet(
        id=tid,
        timestamp=datetime.fromisoformat(ts).astimezone(timezone.utc),
        latitude=lat, longitude=lon,
        frame=TAX.resolve(frame), stance=stance,
        sentiment=sentiment, vivid=vivid, virality=virality,
        hashtags=hashtags,
    )


def write_config(root: Path, inputs: str = "inputs", output: str = "dataset",
                 extra: str = "") -> Path:
    covid_line = f"  covid: {inputs}/covid.csv\n" \
        if (root / inputs / "covid.csv").exists() else ""
    cfg = root / "config.yaml"
    cfg.write_text(
        "paths:\n"
        f"  corpus: {inputs}/corpus.csv\n"
        f"  boundaries: {inputs}/counties.geojson\n"
        f"  census: {inputs}/census.csv\n"
        f"  elections: {inputs}/elections.csv\n"
        f"  mask: {inputs}/mask.csv\n"
        + covid_line
        + f"  output: {output}\n"
        + extra
    )
    return cfg


@pytest.fixture(scope="session")
def synth_workspace(tmp_path_factory):
    """Small default-scenario dataset: inputs, built dataset dir, ground truth."""
    root = tmp_path_factory.mktemp("synth_ws")
    spec = synthgen.default_scenario(seed=11, n_tweets=2000, n_counties=120)
    truth = synthgen.generate(spec, root / "inputs")
    cfg_path = write_config(root)
    cfg = PipelineConfig.load(cfg_path)
    result = build(cfg)
    return {"root": root, "truth": truth, "spec": spec,
            "config_path": cfg_path, "dataset": result.dataset_dir}


@pytest.fixture(scope="session")
def synth_snapshot(synth_workspace):
    return load_snapshot(synth_workspace["dataset"])
