"""Dataset build: parse, geotag, join, aggregate, and write a dataset directory.

The output directory is self-contained and deterministic: building twice from
the same inputs produces byte-identical tables and manifest.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from . import analytics, context, corpus, geo
from .config import PipelineConfig
from .taxonomy import Taxonomy, load_taxonomy

MANIFEST_NAME = "manifest.json"

TAGGED_COLUMNS = (
    "id,timestamp,lat,lon,frame,stance,sentiment,vivid,virality,text,hashtags,fips"
)


class BuildError(ValueError):
    pass


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class BuildResult:
    dataset_dir: Path
    n_tweets: int
    n_assigned: int
    n_counties: int
    n_vectors: int


def build(cfg: PipelineConfig) -> BuildResult:
    taxonomy = load_taxonomy(str(cfg.taxonomy_path) if cfg.taxonomy_path else None)

    window = None
    if cfg.study_start and cfg.study_end:
        window = (
            datetime.combine(cfg.study_start, datetime.min.time(), timezone.utc),
            datetime.combine(cfg.study_end, datetime.max.time(), timezone.utc),
        )
    tweets, rejects = corpus.parse_corpus(
        cfg.corpus_path, cfg.corpus_schema, taxonomy, window
    )
    if cfg.lexicon_pro or cfg.lexicon_anti:
        lexicon = corpus.StanceLexicon.from_lists(cfg.lexicon_pro, cfg.lexicon_anti)
        tweets = corpus.enrich_stance(tweets, lexicon)

    counties = geo.load_counties(cfg.boundaries_path, cfg.exclusions)
    index = geo.build_index(counties)
    tagged, unassigned = geo.geotag_corpus(tweets, index)

    census, census_report = context.load_census(cfg.census_path)
    elections, elections_report = context.load_elections(cfg.elections_path)
    mask = context.load_mask_survey(cfg.mask_path, cfg.mask_weights, cfg.mask_categories)
    covid = None
    if cfg.covid_path is not None:
        if window is not None:
            covid_range = (cfg.study_start, cfg.study_end)
        else:
            dates = [t.timestamp.date() for t in tweets]
            if not dates:
                raise BuildError("empty corpus and no study window: cannot clip covid")
            covid_range = (min(dates), max(dates))
        covid = context.load_covid(cfg.covid_path, covid_range)

    universe = [c.fips for c in counties]
    contexts, coverage = context.join_context(census, elections, mask, covid, universe)

    vectors, uncovered = analytics.aggregate_counties(tagged, contexts, taxonomy)
    state_of = {c.fips: c.state for c in counties}
    bins = analytics.bin_timeline(
        tagged, covid, cfg.bin_width_days, None, state_of, taxonomy
    )

    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)

    _write_tagged(out / "tagged_corpus.csv", tagged)
    _write_simplified_geojson(out / "counties.geojson", counties, cfg.geometry_tolerance)
    _write_contexts(out / "contexts.csv", contexts)
    if covid is not None:
        _write_covid(out / "covid.csv", covid)
    analytics.export_feature_table(vectors, out / "county_features.csv")
    analytics.export_timeline(bins, out / "timeline.csv", taxonomy)
    rejects.write(out / "rejects.txt")
    coverage.write(out / "coverage.csv")
    geo.export_assignment_counts(tagged, out / "assignment_counts.csv")
    with open(out / "loader_rejects.txt", "w", encoding="utf-8") as fh:
        for name, rep in (("census", census_report), ("elections", elections_report)):
            for row_no, reason in rep.rejects:
                fh.write(f"{name}\t{row_no}\t{reason}\n")
    if cfg.taxonomy_path:
        (out / "taxonomy.yaml").write_bytes(Path(cfg.taxonomy_path).read_bytes())

    inputs = {
        "corpus": _sha256(cfg.corpus_path),
        "boundaries": _sha256(cfg.boundaries_path),
        "census": _sha256(cfg.census_path),
        "elections": _sha256(cfg.elections_path),
        "mask": _sha256(cfg.mask_path),
    }
    if cfg.covid_path is not None:
        inputs["covid"] = _sha256(cfg.covid_path)
    manifest = {
        "format_version": 1,
        "inputs": inputs,
        "has_covid": covid is not None,
        "bin_width_days": cfg.bin_width_days,
        "counts": {
            "tweets_parsed": len(tweets),
            "tweets_rejected": len(rejects),
            "tweets_assigned": len(tagged),
            "tweets_unassigned": unassigned,
            "counties": len(counties),
            "contexts": len(contexts),
            "feature_vectors": len(vectors),
            "uncovered_assignments": len(uncovered),
        },
    }
    with open(out / MANIFEST_NAME, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=1)
        fh.write("\n")
    return BuildResult(
        dataset_dir=out,
        n_tweets=len(tweets),
        n_assigned=len(tagged),
        n_counties=len(counties),
        n_vectors=len(vectors),
    )


def _fmt_tweet(t: corpus.AnnotatedTweet) -> list[str]:
    text = (t.text or "").replace(",", " ").replace("\n", " ")
    return [
        t.id,
        t.timestamp.strftime("%Y-%m-%dT%H:%M:%SZ"),
        f"{t.latitude:.6f}",
        f"{t.longitude:.6f}",
        t.frame.name,
        t.stance.value,
        repr(t.sentiment),
        "1" if t.vivid else "0",
        repr(t.virality),
        text,
        " ".join(t.hashtags),
    ]


def _write_tagged(path: Path, tagged) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(TAGGED_COLUMNS + "\n")
        for tweet, fips in tagged:
            fh.write(",".join(_fmt_tweet(tweet) + [fips]) + "\n")


def _write_simplified_geojson(path: Path, counties, tolerance: float) -> None:
    features = []
    for c in counties:
        coords = []
        for outer, holes in c.polygons:
            coords.append(
                [[list(p) for p in geo.simplify_ring(outer, tolerance)]]
                + [[list(p) for p in geo.simplify_ring(h, tolerance)] for h in holes]
            )
        geometry = (
            {"type": "Polygon", "coordinates": coords[0]}
            if len(coords) == 1
            else {"type": "MultiPolygon", "coordinates": coords}
        )
        features.append({
            "type": "Feature",
            "properties": {"fips": c.fips, "name": c.name, "state": c.state},
            "geometry": geometry,
        })
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump({"type": "FeatureCollection", "features": features}, fh,
                  sort_keys=True, separators=(",", ":"))


def _write_contexts(path: Path, contexts) -> None:
    demo_keys = sorted({k for c in contexts.values() for k in c.demographics})
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("fips,population,dem_share,rep_share,mask_use")
        for k in demo_keys:
            fh.write(f",{k}")
        fh.write("\n")
        for fips in sorted(contexts):
            c = contexts[fips]
            fh.write(f"{fips},{c.population},{c.dem_share!r},{c.rep_share!r},{c.mask_use!r}")
            for k in demo_keys:
                v = c.demographics.get(k)
                fh.write("," + (repr(v) if v is not None else ""))
            fh.write("\n")


def _write_covid(path: Path, covid) -> None:
    from datetime import timedelta

    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("fips,date,cases,deaths\n")
        for fips in sorted(covid):
            s = covid[fips]
            for i, (c, d) in enumerate(zip(s.cases, s.deaths)):
                day = s.start_date + timedelta(days=i)
                fh.write(f"{fips},{day.isoformat()},{c},{d}\n")
