"""Immutable dataset snapshot loaded from a built dataset directory.

A snapshot bundles everything the service reads: tagged tweets, transport
geometries, contexts, COVID series, and the precomputed feature vectors and
inference table. It never mutates after load; the service swaps whole
snapshots atomically.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Optional

from . import analytics, context, corpus, geo
from .analytics import FEATURE_KEYS, FEATURE_NAMES, CountyFeatureVector
from .taxonomy import Taxonomy, load_taxonomy


class SnapshotError(ValueError):
    """Inconsistent or unreadable dataset directory."""


@dataclass(frozen=True)
class Snapshot:
    version: int
    taxonomy: Taxonomy
    tagged: tuple[tuple[corpus.AnnotatedTweet, str], ...]
    counties: tuple[geo.CountyGeometry, ...]
    state_of: dict[str, str]
    contexts: dict[str, context.CountyContext]
    covid: Optional[dict[str, context.CovidSeries]]
    vectors: dict[str, CountyFeatureVector]
    inference_rows: tuple[dict, ...]
    date_start: Optional[date]
    date_end: Optional[date]
    bin_width_days: int
    geojson: dict

    @property
    def has_covid(self) -> bool:
        return self.covid is not None

    @property
    def demographics(self) -> list[str]:
        keys: set[str] = set()
        for c in self.contexts.values():
            keys.update(c.demographics)
        return sorted(keys)

    def context_fields(self) -> list[str]:
        return ["population", "dem_share", "rep_share", "vote_margin", "mask_use",
                *self.demographics]


def _inference_rows(
    vectors: dict[str, CountyFeatureVector],
    contexts: dict[str, context.CountyContext],
) -> tuple[dict, ...]:
    rows = []
    for fips in sorted(vectors):
        v = vectors[fips]
        c = contexts[fips]
        row: dict = {"fips": fips, "n_tweets": v.n_tweets}
        for key, name, value in zip(FEATURE_KEYS, FEATURE_NAMES, v.values):
            row[key] = value
            row[name] = value
        row.update(
            population=float(c.population),
            dem_share=c.dem_share,
            rep_share=c.rep_share,
            vote_margin=c.vote_margin,
            mask_use=c.mask_use,
        )
        row.update(c.demographics)
        rows.append(row)
    return tuple(rows)


def load_snapshot(dataset_dir: str | Path, version: int = 1) -> Snapshot:
    root = Path(dataset_dir)
    manifest_path = root / "manifest.json"
    if not manifest_path.exists():
        raise SnapshotError(f"not a dataset directory (no manifest): {root}")
    with open(manifest_path, encoding="utf-8") as fh:
        manifest = json.load(fh)

    taxonomy_file = root / "taxonomy.yaml"
    taxonomy = load_taxonomy(str(taxonomy_file) if taxonomy_file.exists() else None)

    corpus_path = root / "tagged_corpus.csv"
    if not corpus_path.exists():
        raise SnapshotError(f"missing tagged_corpus.csv in {root}")
    tweets, rejects = corpus.parse_corpus(corpus_path, taxonomy=taxonomy)
    if len(rejects):
        raise SnapshotError(f"tagged corpus has {len(rejects)} invalid rows")
    with open(corpus_path, encoding="utf-8", newline="") as fh:
        fips_col = [row["fips"] for row in csv.DictReader(fh)]
    if len(fips_col) != len(tweets):
        raise SnapshotError("tagged corpus fips column length mismatch")
    tagged = tuple(zip(tweets, fips_col))

    counties = geo.load_counties(root / "counties.geojson")
    state_of = {c.fips: c.state for c in counties}
    known_fips = set(state_of)
    with open(root / "counties.geojson", encoding="utf-8") as fh:
        geojson = json.load(fh)

    contexts = _load_contexts(root / "contexts.csv")
    covid = None
    if manifest.get("has_covid") and (root / "covid.csv").exists():
        dates = [t.timestamp.date() for t in tweets]
        covid_range = _covid_range(root / "covid.csv")
        covid = context.load_covid(root / "covid.csv", covid_range)

    for _, fips in tagged:
        if fips not in known_fips and fips not in contexts:
            raise SnapshotError(f"tweet assigned to unknown county {fips}")

    vectors, _ = analytics.aggregate_counties(tagged, contexts, taxonomy)
    dates = [t.timestamp.date() for t, _ in tagged]
    return Snapshot(
        version=version,
        taxonomy=taxonomy,
        tagged=tagged,
        counties=tuple(counties),
        state_of=state_of,
        contexts=contexts,
        covid=covid,
        vectors=vectors,
        inference_rows=_inference_rows(vectors, contexts),
        date_start=min(dates) if dates else None,
        date_end=max(dates) if dates else None,
        bin_width_days=int(manifest.get("bin_width_days", 1)),
        geojson=geojson,
    )


def _load_contexts(path: Path) -> dict[str, context.CountyContext]:
    if not path.exists():
        raise SnapshotError(f"missing contexts.csv: {path}")
    fixed = {"fips", "population", "dem_share", "rep_share", "mask_use"}
    out: dict[str, context.CountyContext] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        demo_cols = [c for c in (reader.fieldnames or []) if c not in fixed]
        for row in reader:
            demographics = {
                k: float(row[k]) for k in demo_cols if (row.get(k) or "") != ""
            }
            out[row["fips"]] = context.CountyContext(
                fips=row["fips"],
                population=int(float(row["population"])),
                demographics=demographics,
                dem_share=float(row["dem_share"]),
                rep_share=float(row["rep_share"]),
                mask_use=float(row["mask_use"]),
                covid=None,
            )
    if not out:
        raise SnapshotError(f"empty contexts table: {path}")
    return out


def _covid_range(path: Path) -> tuple[date, date]:
    lo = hi = None
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            d = date.fromisoformat(row["date"])
            lo = d if lo is None or d < lo else lo
            hi = d if hi is None or d > hi else hi
    if lo is None:
        raise SnapshotError(f"empty covid table: {path}")
    return lo, hi
