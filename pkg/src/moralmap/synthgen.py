"""Deterministic synthetic corpus + context generator with planted ground truth.

The original annotated corpus is not redistributable, so acceptance and demo
runs work from generated data: a grid of star-shaped synthetic counties, a
corpus placed strictly inside them, and contextual tables whose relationships
to tweet features are planted with known slopes. Same seed, same bytes.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta, timezone
from pathlib import Path
from typing import Optional, Sequence

from .geo import CountyGeometry, Ring, _ring_bbox
from .taxonomy import Foundation, Taxonomy, default_taxonomy

# two-letter synthetic state codes, assigned to county grid stripes
_STATE_CODES = [
    "AA", "AB", "AC", "AD", "AE", "AF", "AG", "AH", "AJ", "AK",
    "BA", "BB", "BC", "BD", "BE", "BF", "BG", "BH", "BJ", "BK",
]

PRO_HASHTAGS = ["stayhome", "staysafe", "flattenthecurve", "maskup"]
ANTI_HASHTAGS = ["reopen", "endthelockdown", "myfreedom", "openup"]


@dataclass(frozen=True)
class PlantedEffect:
    context_var: str  # e.g. vote_margin, mask_use
    feature: str      # mean_sentiment, pro_share, or a share_* foundation feature
    slope: float


@dataclass
class SynthSpec:
    seed: int = 1
    n_tweets: int = 2000
    n_counties: int = 100
    date_start: date = date(2020, 3, 1)
    date_end: date = date(2020, 5, 31)
    frame_weights: dict[str, float] = field(default_factory=dict)
    pro_prob: dict[str, float] = field(default_factory=dict)  # per-frame P(pro | stance known)
    default_pro_prob: float = 0.5
    unknown_stance_prob: float = 0.05
    sentiment_mean: dict[str, float] = field(default_factory=dict)
    sentiment_spread: float = 0.15
    vivid_prob: float = 0.3
    virality_mean: float = 8.0
    planted: list[PlantedEffect] = field(default_factory=list)
    include_covid: bool = True
    hashtag_prob: float = 0.6

    def __post_init__(self) -> None:
        if self.n_counties < 1:
            raise ValueError("county universe empty")
        if any(w < 0 for w in self.frame_weights.values()):
            raise ValueError("frame weights must be non-negative")
        if self.frame_weights and not any(self.frame_weights.values()):
            raise ValueError("frame weights all zero")


def default_scenario(seed: int = 1, n_tweets: int = 5000, n_counties: int = 500) -> SynthSpec:
    """Scenario echoing the stay-at-home case study shape: Care dominant, Harm
    second, libertarian frames leaning Republican, Care tracking mask use."""
    return SynthSpec(
        seed=seed,
        n_tweets=n_tweets,
        n_counties=n_counties,
        frame_weights={
            "Care": 0.26, "Harm": 0.18, "Fairness": 0.07, "Cheating": 0.06,
            "Loyalty": 0.08, "Betrayal": 0.07, "Authority": 0.06, "Subversion": 0.07,
            "Purity": 0.03, "Degradation": 0.03, "Liberty": 0.06, "Oppression": 0.03,
        },
        pro_prob={"Care": 0.9, "Harm": 0.55, "Liberty": 0.15, "Subversion": 0.2},
        sentiment_mean={"Care": 0.1, "Harm": -0.1, "Betrayal": -0.08, "Liberty": 0.05},
        planted=[
            PlantedEffect("vote_margin", "mean_sentiment", 0.8),
            PlantedEffect("mask_use", "share_care", 1.0),
            PlantedEffect("vote_margin", "share_liberty", -0.8),
        ],
    )


@dataclass
class GroundTruth:
    seed: int
    planted: list[PlantedEffect]
    tweet_counties: dict[str, str]       # tweet id -> generating fips
    county_context: dict[str, dict]      # fips -> intended context values

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "planted": [e.__dict__ for e in self.planted],
            "tweet_counties": self.tweet_counties,
            "county_context": self.county_context,
        }


def _synth_counties(n: int, rng: random.Random) -> list[CountyGeometry]:
    """Star-shaped polygons, one per cell of a lon/lat grid, disjoint by margin."""
    cols = math.ceil(math.sqrt(n))
    rows = math.ceil(n / cols)
    lon0, lon1 = -120.0, -80.0
    lat0, lat1 = 30.0, 45.0
    dx = (lon1 - lon0) / cols
    dy = (lat1 - lat0) / rows
    counties = []
    for i in range(n):
        r, c = divmod(i, cols)
        cx = lon0 + (c + 0.5) * dx
        cy = lat0 + (r + 0.5) * dy
        m = rng.randint(6, 10)  # vertex count
        ring: Ring = []
        for k in range(m):
            ang = 2 * math.pi * k / m + rng.uniform(-0.15, 0.15)
            rad = rng.uniform(0.55, 0.92)
            ring.append(
                (round(cx + 0.5 * dx * rad * math.cos(ang), 6),
                 round(cy + 0.5 * dy * rad * math.sin(ang), 6))
            )
        ring.append(ring[0])
        state = _STATE_CODES[r % len(_STATE_CODES)]
        fips = f"{(r % len(_STATE_CODES)) + 1:02d}{(i + 1) % 1000:03d}"
        counties.append(
            CountyGeometry(
                fips=fips,
                name=f"Synth County {i + 1}",
                state=state,
                polygons=((ring, ()),),
                bbox=_ring_bbox([ring]),
            )
        )
    return counties


def _interior_point(county: CountyGeometry, rng: random.Random) -> tuple[float, float]:
    x0, y0, x1, y1 = county.bbox
    for _ in range(10000):
        lon = rng.uniform(x0, x1)
        lat = rng.uniform(y0, y1)
        if county.contains(lon, lat):
            return lon, lat
    raise RuntimeError(f"could not sample interior point for {county.fips}")


def _zscores(values: dict[str, float]) -> dict[str, float]:
    vals = list(values.values())
    mean = sum(vals) / len(vals)
    var = sum((v - mean) ** 2 for v in vals) / len(vals)
    sd = math.sqrt(var) or 1.0
    return {k: (v - mean) / sd for k, v in values.items()}


_SHARE_FOUNDATION = {
    "share_care": Foundation.CARE,
    "share_fairness": Foundation.FAIRNESS,
    "share_loyalty": Foundation.LOYALTY,
    "share_authority": Foundation.AUTHORITY,
    "share_purity": Foundation.PURITY,
    "share_liberty": Foundation.LIBERTY,
}


def generate(spec: SynthSpec, out_dir: str | Path) -> GroundTruth:
    """Write corpus + context files in the formats the loaders consume.

    Files: corpus.csv, counties.geojson, census.csv, elections.csv, mask.csv,
    covid.csv (when enabled), ground_truth.json.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(spec.seed)
    taxonomy = default_taxonomy()
    frame_names = taxonomy.frame_names()
    base_weights = [spec.frame_weights.get(n, 1.0) for n in frame_names] \
        if spec.frame_weights else [1.0] * len(frame_names)

    counties = _synth_counties(spec.n_counties, rng)

    # intended context values per county
    ctx: dict[str, dict] = {}
    for county in counties:
        margin = rng.uniform(-0.8, 0.8)
        ctx[county.fips] = {
            "population": rng.randint(5000, 900000),
            "vote_margin": margin,
            "dem_share": 0.48 + margin / 2,
            "rep_share": 0.48 - margin / 2,
            "mask_use": rng.uniform(0.2, 0.9),
            "median_age": round(rng.uniform(28.0, 52.0), 1),
        }

    # planted-effect machinery
    z_by_var = {
        var: _zscores({f: ctx[f][var] for f in ctx})
        for var in {e.context_var for e in spec.planted}
    }
    sentiment_offset: dict[str, float] = {f: 0.0 for f in ctx}
    pro_offset: dict[str, float] = {f: 0.0 for f in ctx}
    weight_mult: dict[str, list[float]] = {f: [1.0] * len(frame_names) for f in ctx}
    for eff in spec.planted:
        for fips in ctx:
            raw = ctx[fips][eff.context_var]
            z = z_by_var[eff.context_var][fips]
            if eff.feature == "mean_sentiment":
                # direct linear plant in the variable's own units
                sentiment_offset[fips] += eff.slope * raw
            elif eff.feature == "pro_share":
                pro_offset[fips] += eff.slope * z * 0.15
            elif eff.feature in _SHARE_FOUNDATION:
                foundation = _SHARE_FOUNDATION[eff.feature]
                mult = max(0.05, 1.0 + 0.6 * eff.slope * z)
                for i, name in enumerate(frame_names):
                    if taxonomy.resolve(name).foundation is foundation:
                        weight_mult[fips][i] *= mult
            else:
                raise ValueError(f"unsupported planted feature: {eff.feature}")

    # corpus
    start_dt = datetime.combine(spec.date_start, datetime.min.time(), timezone.utc)
    span_seconds = int(
        (datetime.combine(spec.date_end, datetime.max.time(), timezone.utc)
         - start_dt).total_seconds()
    )
    tweet_rows = []
    tweet_counties: dict[str, str] = {}
    for i in range(spec.n_tweets):
        county = counties[rng.randrange(len(counties))]
        fips = county.fips
        lon, lat = _interior_point(county, rng)
        ts = start_dt + timedelta(seconds=rng.randrange(span_seconds))
        weights = [w * m for w, m in zip(base_weights, weight_mult[fips])]
        frame = rng.choices(frame_names, weights=weights)[0]
        if rng.random() < spec.unknown_stance_prob:
            stance = "Unknown"
        else:
            p_pro = spec.pro_prob.get(frame, spec.default_pro_prob) + pro_offset[fips]
            stance = "Pro" if rng.random() < min(0.98, max(0.02, p_pro)) else "Anti"
        mean_s = spec.sentiment_mean.get(frame, 0.0) + sentiment_offset[fips]
        sentiment = max(-1.0, min(1.0, rng.gauss(mean_s, spec.sentiment_spread)))
        vivid = rng.random() < spec.vivid_prob
        virality = int(rng.expovariate(1.0 / spec.virality_mean))
        tags = []
        if rng.random() < spec.hashtag_prob:
            pool = PRO_HASHTAGS if stance == "Pro" else ANTI_HASHTAGS if stance == "Anti" \
                else PRO_HASHTAGS + ANTI_HASHTAGS
            tags = rng.sample(pool, k=rng.randint(1, 2))
        tweet_id = f"t{i + 1:07d}"
        tweet_counties[tweet_id] = fips
        tweet_rows.append(
            (tweet_id, ts.strftime("%Y-%m-%dT%H:%M:%SZ"), f"{lat:.6f}", f"{lon:.6f}",
             frame, stance, f"{sentiment:.4f}", "1" if vivid else "0", str(virality),
             f"synthetic post {i + 1}", " ".join(tags))
        )
    with open(out / "corpus.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("id,timestamp,lat,lon,frame,stance,sentiment,vivid,virality,text,hashtags\n")
        for row in tweet_rows:
            fh.write(",".join(row) + "\n")

    # boundaries
    features = []
    for county in counties:
        features.append({
            "type": "Feature",
            "properties": {"fips": county.fips, "name": county.name, "state": county.state},
            "geometry": {
                "type": "Polygon",
                "coordinates": [[list(pt) for pt in county.polygons[0][0]]],
            },
        })
    with open(out / "counties.geojson", "w", encoding="utf-8", newline="\n") as fh:
        json.dump({"type": "FeatureCollection", "features": features}, fh,
                  sort_keys=True, separators=(",", ":"))

    # census
    with open(out / "census.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("fips,population,median_age\n")
        for county in counties:
            c = ctx[county.fips]
            fh.write(f"{county.fips},{c['population']},{c['median_age']}\n")

    # elections (raw counts; turnout 60%)
    with open(out / "elections.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("fips,dem_votes,rep_votes,total_votes\n")
        for county in counties:
            c = ctx[county.fips]
            total = round(c["population"] * 0.6)
            dem = round(c["dem_share"] * total)
            rep = round(c["rep_share"] * total)
            fh.write(f"{county.fips},{dem},{rep},{total}\n")

    # mask survey: mass split between extreme categories hits the target exactly
    with open(out / "mask.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("fips,never,rarely,sometimes,frequently,always\n")
        for county in counties:
            m = ctx[county.fips]["mask_use"]
            fh.write(f"{county.fips},{1 - m:.6f},0,0,0,{m:.6f}\n")

    # covid cumulative series
    if spec.include_covid:
        n_days = (spec.date_end - spec.date_start).days + 1
        with open(out / "covid.csv", "w", encoding="utf-8", newline="\n") as fh:
            fh.write("fips,date,cases,deaths\n")
            for county in counties:
                scale = ctx[county.fips]["population"] / 50000.0
                cases = deaths = 0
                for d in range(n_days):
                    growth = 1.0 + 8.0 * d / n_days
                    cases += rng.randint(0, max(1, int(scale * growth)))
                    if cases > 20 and rng.random() < 0.3:
                        deaths += rng.randint(0, max(1, cases // 50 - deaths))
                    day = spec.date_start + timedelta(days=d)
                    fh.write(f"{county.fips},{day.isoformat()},{cases},{deaths}\n")

    truth = GroundTruth(
        seed=spec.seed,
        planted=list(spec.planted),
        tweet_counties=tweet_counties,
        county_context={f: dict(sorted(v.items())) for f, v in sorted(ctx.items())},
    )
    with open(out / "ground_truth.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(truth.to_dict(), fh, sort_keys=True, indent=1)
    return truth
