"""Aggregation layer: per-county feature vectors, timeline bins, frame summaries.

The 14 per-county features (keys f1..f14) are:

    f1  log_count          ln(1 + n)
    f2  per_capita         n / population * 100000
    f3  pro_share          Pro / (Pro + Anti); NaN when no stance-labeled tweets
    f4  mean_sentiment
    f5  vivid_share
    f6  log_mean_virality  ln(1 + mean virality)
    f7  virtue_share
    f8  frame_entropy      Shannon entropy over the 12 frames / ln 12
    f9-f14                 foundation shares (Care, Fairness, Loyalty,
                           Authority, Purity, Liberty)

Counties with zero tweets get no vector at all (null, not zero) so that empty
rural counties do not drag inference toward zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import date, datetime, time, timedelta, timezone
from typing import Mapping, Optional, Sequence

from .context import CountyContext, CovidSeries
from .corpus import AnnotatedTweet, Stance
from .taxonomy import FOUNDATION_ORDER, Polarity, Taxonomy, default_taxonomy

Tagged = tuple[AnnotatedTweet, str]  # (tweet, fips)

FEATURE_KEYS = [f"f{i}" for i in range(1, 15)]
FEATURE_NAMES = [
    "log_count",
    "per_capita",
    "pro_share",
    "mean_sentiment",
    "vivid_share",
    "log_mean_virality",
    "virtue_share",
    "frame_entropy",
    "share_care",
    "share_fairness",
    "share_loyalty",
    "share_authority",
    "share_purity",
    "share_liberty",
]
FEATURE_BY_KEY = dict(zip(FEATURE_KEYS, FEATURE_NAMES))
KEY_BY_FEATURE = dict(zip(FEATURE_NAMES, FEATURE_KEYS))


class AnalyticsError(ValueError):
    pass


@dataclass(frozen=True)
class TweetFilter:
    """Conjunctive tweet filter; every None clause is a no-op."""

    frames: Optional[frozenset[str]] = None
    stances: Optional[frozenset[Stance]] = None
    date_from: Optional[date] = None
    date_to: Optional[date] = None
    states: Optional[frozenset[str]] = None
    fips: Optional[frozenset[str]] = None

    def is_empty(self) -> bool:
        return all(
            v is None
            for v in (self.frames, self.stances, self.date_from, self.date_to,
                      self.states, self.fips)
        )

    def matches(self, tweet: AnnotatedTweet, fips: str, state: str) -> bool:
        if self.frames is not None and tweet.frame.name not in self.frames:
            return False
        if self.stances is not None and tweet.stance not in self.stances:
            return False
        d = tweet.timestamp.date()
        if self.date_from is not None and d < self.date_from:
            return False
        if self.date_to is not None and d > self.date_to:
            return False
        if self.states is not None and state not in self.states:
            return False
        if self.fips is not None and fips not in self.fips:
            return False
        return True


def filter_tweets(
    tagged: Sequence[Tagged],
    flt: TweetFilter,
    state_of: Optional[Mapping[str, str]] = None,
) -> list[Tagged]:
    """Apply all filter clauses conjunctively, preserving order."""
    state_of = state_of or {}
    return [
        (t, fips)
        for t, fips in tagged
        if flt.matches(t, fips, state_of.get(fips, ""))
    ]


@dataclass(frozen=True)
class CountyFeatureVector:
    fips: str
    n_tweets: int
    values: tuple[float, ...]  # f1..f14 in order

    def as_dict(self) -> dict[str, float]:
        return dict(zip(FEATURE_KEYS, self.values))

    def get(self, key: str) -> float:
        """Value by f-key or by feature name."""
        if key in FEATURE_BY_KEY:
            key = FEATURE_BY_KEY[key]
        return self.values[FEATURE_NAMES.index(key)]


def frame_entropy(counts: Sequence[int], n_frames: int) -> float:
    """Shannon entropy of the frame distribution, normalized to [0, 1]."""
    total = sum(counts)
    if total == 0:
        return 0.0
    h = 0.0
    for c in counts:
        if c > 0:
            p = c / total
            h -= p * math.log(p)
    return h / math.log(n_frames)


def _feature_vector(
    fips: str,
    tweets: Sequence[AnnotatedTweet],
    population: int,
    taxonomy: Taxonomy,
) -> CountyFeatureVector:
    n = len(tweets)
    frame_names = taxonomy.frame_names()
    counts = {name: 0 for name in frame_names}
    pro = anti = vivid = virtue = 0
    for t in tweets:
        counts[t.frame.name] += 1
        if t.stance is Stance.PRO:
            pro += 1
        elif t.stance is Stance.ANTI:
            anti += 1
        if t.vivid:
            vivid += 1
        if t.frame.polarity is Polarity.VIRTUE:
            virtue += 1
    # fsum keeps the result independent of tweet order
    sent_sum = math.fsum(t.sentiment for t in tweets)
    vir_sum = math.fsum(t.virality for t in tweets)
    stance_n = pro + anti
    pro_share = pro / stance_n if stance_n else math.nan
    foundation_counts = {f: 0 for f in FOUNDATION_ORDER}
    for frame in taxonomy.frames:
        foundation_counts[frame.foundation] += counts[frame.name]
    values = (
        math.log1p(n),
        n / population * 100000.0,
        pro_share,
        sent_sum / n,
        vivid / n,
        math.log1p(vir_sum / n),
        virtue / n,
        frame_entropy(list(counts.values()), len(frame_names)),
        *(foundation_counts[f] / n for f in FOUNDATION_ORDER),
    )
    return CountyFeatureVector(fips=fips, n_tweets=n, values=values)


def aggregate_counties(
    tagged: Sequence[Tagged],
    contexts: Mapping[str, CountyContext],
    taxonomy: Optional[Taxonomy] = None,
) -> tuple[dict[str, CountyFeatureVector], list[str]]:
    """Per-county feature vectors plus the fips of tweets lacking context.

    Counties with zero tweets are absent from the result (null vector).
    """
    taxonomy = taxonomy or default_taxonomy()
    by_fips: dict[str, list[AnnotatedTweet]] = {}
    uncovered: list[str] = []
    for tweet, fips in tagged:
        if fips not in contexts:
            uncovered.append(fips)
            continue
        by_fips.setdefault(fips, []).append(tweet)
    vectors = {
        fips: _feature_vector(fips, tweets, contexts[fips].population, taxonomy)
        for fips, tweets in by_fips.items()
    }
    return vectors, uncovered


@dataclass(frozen=True)
class TimelineBin:
    bin_start: date
    width_days: int
    frame_counts: tuple[int, ...]  # taxonomy frame order
    pro_count: int
    anti_count: int
    mean_sentiment: float
    total_virality: float
    new_cases: int
    new_deaths: int

    @property
    def total(self) -> int:
        return sum(self.frame_counts)


def bin_timeline(
    tagged: Sequence[Tagged],
    covid: Optional[Mapping[str, CovidSeries]],
    width_days: int = 1,
    flt: Optional[TweetFilter] = None,
    state_of: Optional[Mapping[str, str]] = None,
    taxonomy: Optional[Taxonomy] = None,
) -> list[TimelineBin]:
    """Tile the filtered date range with fixed-width bins of frame/stance counts.

    COVID deltas are summed over the counties admitted by the filter; when no
    series is available the epidemic fields stay zero.
    """
    if width_days < 1:
        raise AnalyticsError("bin width must be >= 1 day")
    taxonomy = taxonomy or default_taxonomy()
    flt = flt or TweetFilter()
    subset = filter_tweets(tagged, flt, state_of)

    # date range: explicit filter bounds win; otherwise span of the subset
    if flt.date_from is not None and flt.date_to is not None:
        d0, d1 = flt.date_from, flt.date_to
    elif subset:
        dates = [t.timestamp.date() for t, _ in subset]
        d0 = flt.date_from or min(dates)
        d1 = flt.date_to or max(dates)
    else:
        return []
    if d1 < d0:
        raise AnalyticsError("inverted date range")

    n_bins = ((d1 - d0).days // width_days) + 1
    frame_names = taxonomy.frame_names()
    frame_idx = {name: i for i, name in enumerate(frame_names)}
    counts = [[0] * len(frame_names) for _ in range(n_bins)]
    pro = [0] * n_bins
    anti = [0] * n_bins
    sent = [0.0] * n_bins
    vir = [0.0] * n_bins
    nums = [0] * n_bins
    for tweet, _ in subset:
        b = (tweet.timestamp.date() - d0).days // width_days
        counts[b][frame_idx[tweet.frame.name]] += 1
        if tweet.stance is Stance.PRO:
            pro[b] += 1
        elif tweet.stance is Stance.ANTI:
            anti[b] += 1
        sent[b] += tweet.sentiment
        vir[b] += tweet.virality
        nums[b] += 1

    cases = [0] * n_bins
    deaths = [0] * n_bins
    if covid:
        region = _covid_region(covid, flt, state_of)
        for series in region:
            dc, dd = series.daily_deltas()
            for i, (c, dth) in enumerate(zip(dc, dd)):
                day = series.start_date + timedelta(days=i + 1)
                if d0 <= day <= d1:
                    b = (day - d0).days // width_days
                    cases[b] += c
                    deaths[b] += dth

    bins = []
    for b in range(n_bins):
        bins.append(
            TimelineBin(
                bin_start=d0 + timedelta(days=b * width_days),
                width_days=width_days,
                frame_counts=tuple(counts[b]),
                pro_count=pro[b],
                anti_count=anti[b],
                mean_sentiment=sent[b] / nums[b] if nums[b] else 0.0,
                total_virality=vir[b],
                new_cases=cases[b],
                new_deaths=deaths[b],
            )
        )
    return bins


def _covid_region(
    covid: Mapping[str, CovidSeries],
    flt: TweetFilter,
    state_of: Optional[Mapping[str, str]],
) -> list[CovidSeries]:
    state_of = state_of or {}
    out = []
    for fips, series in covid.items():
        if flt.fips is not None and fips not in flt.fips:
            continue
        if flt.states is not None and state_of.get(fips, "") not in flt.states:
            continue
        out.append(series)
    return out


@dataclass(frozen=True)
class FrameSummary:
    frame: str
    count: int
    pro_share: float
    mean_sentiment: float
    vivid_share: float
    mean_virality: float


def summarize_frames(
    tagged: Sequence[Tagged],
    flt: Optional[TweetFilter] = None,
    state_of: Optional[Mapping[str, str]] = None,
    taxonomy: Optional[Taxonomy] = None,
) -> list[FrameSummary]:
    """One row per taxonomy frame (zero-count frames included), in frame order."""
    taxonomy = taxonomy or default_taxonomy()
    subset = filter_tweets(tagged, flt or TweetFilter(), state_of)
    by_frame: dict[str, list[AnnotatedTweet]] = {n: [] for n in taxonomy.frame_names()}
    for tweet, _ in subset:
        by_frame[tweet.frame.name].append(tweet)
    out = []
    for name in taxonomy.frame_names():
        tweets = by_frame[name]
        n = len(tweets)
        pro = sum(1 for t in tweets if t.stance is Stance.PRO)
        anti = sum(1 for t in tweets if t.stance is Stance.ANTI)
        out.append(
            FrameSummary(
                frame=name,
                count=n,
                pro_share=pro / (pro + anti) if pro + anti else math.nan,
                mean_sentiment=sum(t.sentiment for t in tweets) / n if n else 0.0,
                vivid_share=sum(t.vivid for t in tweets) / n if n else 0.0,
                mean_virality=sum(t.virality for t in tweets) / n if n else 0.0,
            )
        )
    return out


def export_feature_table(
    vectors: Mapping[str, CountyFeatureVector], path
) -> None:
    """Delimited export with fixed f1..f14 column order for reproducible diffs."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("fips,n_tweets," + ",".join(FEATURE_KEYS) + "\n")
        for fips in sorted(vectors):
            v = vectors[fips]
            vals = ",".join(repr(x) for x in v.values)
            fh.write(f"{fips},{v.n_tweets},{vals}\n")


def export_timeline(bins: Sequence[TimelineBin], path, taxonomy=None) -> None:
    taxonomy = taxonomy or default_taxonomy()
    cols = [f"count_{n}" for n in taxonomy.frame_names()]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(
            "bin_start,width_days," + ",".join(cols)
            + ",pro_count,anti_count,mean_sentiment,total_virality,new_cases,new_deaths\n"
        )
        for b in bins:
            fh.write(
                f"{b.bin_start.isoformat()},{b.width_days},"
                + ",".join(str(c) for c in b.frame_counts)
                + f",{b.pro_count},{b.anti_count},{b.mean_sentiment!r},"
                f"{b.total_virality!r},{b.new_cases},{b.new_deaths}\n"
            )
