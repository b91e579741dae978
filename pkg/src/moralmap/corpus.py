"""Annotated-tweet corpus model, delimited-file parser, and hashtag stance heuristic."""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Optional

from .taxonomy import MoralFrame, Taxonomy, default_taxonomy


class Stance(enum.Enum):
    PRO = "Pro"
    ANTI = "Anti"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class AnnotatedTweet:
    id: str
    timestamp: datetime
    latitude: float
    longitude: float
    frame: MoralFrame
    stance: Stance = Stance.UNKNOWN
    sentiment: float = 0.0
    vivid: bool = False
    virality: float = 0.0
    text: Optional[str] = None
    hashtags: tuple[str, ...] = ()


@dataclass(frozen=True)
class StanceLexicon:
    pro: frozenset[str]
    anti: frozenset[str]

    def __post_init__(self) -> None:
        overlap = self.pro & self.anti
        if overlap:
            raise ValueError(f"hashtags in both pro and anti sets: {sorted(overlap)}")

    @classmethod
    def from_lists(cls, pro: Iterable[str], anti: Iterable[str]) -> "StanceLexicon":
        norm = lambda tags: frozenset(t.lower().lstrip("#") for t in tags)
        return cls(norm(pro), norm(anti))


@dataclass
class RejectReport:
    """Per-line rejection audit. Line numbers are 1-based over data lines."""

    rejects: list[tuple[int, str]] = field(default_factory=list)

    def add(self, line_no: int, reason: str) -> None:
        self.rejects.append((line_no, reason))

    def __len__(self) -> int:
        return len(self.rejects)

    def write(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for line_no, reason in self.rejects:
                fh.write(f"{line_no}\t{reason}\n")


@dataclass
class CorpusSchema:
    """Maps tweet fields to source column names.

    ``sentiment_range`` is either ``"signed"`` (already in [-1, 1]) or
    ``"unit"`` ([0, 1], remapped affinely to [-1, 1] at parse time).
    """

    id: str = "id"
    timestamp: str = "timestamp"
    lat: str = "lat"
    lon: str = "lon"
    frame: str = "frame"
    stance: Optional[str] = "stance"
    sentiment: Optional[str] = "sentiment"
    vivid: Optional[str] = "vivid"
    virality: Optional[str] = "virality"
    text: Optional[str] = "text"
    hashtags: Optional[str] = "hashtags"
    sentiment_range: str = "signed"

    REQUIRED = ("id", "timestamp", "lat", "lon", "frame")

    @classmethod
    def from_dict(cls, raw: dict) -> "CorpusSchema":
        return cls(**raw)


class CorpusError(ValueError):
    """Unrecoverable corpus problem (unreadable source, incomplete schema)."""


_STANCE_LABELS = {
    "pro": Stance.PRO,
    "anti": Stance.ANTI,
    "unknown": Stance.UNKNOWN,
    "": Stance.UNKNOWN,
}

_TRUE_LABELS = {"1", "true", "yes", "y", "t"}
_FALSE_LABELS = {"0", "false", "no", "n", "f", ""}


def _parse_timestamp(raw: str) -> datetime:
    ts = datetime.fromisoformat(raw.replace("Z", "+00:00"))
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def parse_corpus(
    source: str | Path,
    schema: CorpusSchema | None = None,
    taxonomy: Taxonomy | None = None,
    study_window: tuple[datetime, datetime] | None = None,
    delimiter: str = ",",
) -> tuple[list[AnnotatedTweet], RejectReport]:
    """Parse a delimited corpus file into validated tweets plus a reject audit.

    Every data line lands in exactly one of the two outputs. Duplicate ids keep
    the first occurrence; later ones are rejected.
    """
    schema = schema or CorpusSchema()
    taxonomy = taxonomy or default_taxonomy()
    path = Path(source)
    if not path.exists():
        raise CorpusError(f"corpus file not readable: {path}")

    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh, delimiter=delimiter)
        header = reader.fieldnames or []
        for fld in CorpusSchema.REQUIRED:
            col = getattr(schema, fld)
            if col not in header:
                raise CorpusError(f"schema field {fld!r} maps to missing column {col!r}")
        tweets: list[AnnotatedTweet] = []
        report = RejectReport()
        seen_ids: set[str] = set()
        for line_no, row in enumerate(reader, start=1):
            try:
                tweet = _parse_row(row, schema, taxonomy, study_window)
            except _RowReject as exc:
                report.add(line_no, exc.reason)
                continue
            if tweet.id in seen_ids:
                report.add(line_no, "duplicate-id")
                continue
            seen_ids.add(tweet.id)
            tweets.append(tweet)
    return tweets, report


class _RowReject(Exception):
    def __init__(self, reason: str):
        self.reason = reason


def _get(row: dict, col: Optional[str]) -> str:
    if col is None:
        return ""
    return (row.get(col) or "").strip()


def _parse_row(
    row: dict,
    schema: CorpusSchema,
    taxonomy: Taxonomy,
    study_window: tuple[datetime, datetime] | None,
) -> AnnotatedTweet:
    tweet_id = _get(row, schema.id)
    if not tweet_id:
        raise _RowReject("missing-id")

    try:
        ts = _parse_timestamp(_get(row, schema.timestamp))
    except ValueError:
        raise _RowReject("bad-timestamp")
    if study_window is not None and not (study_window[0] <= ts <= study_window[1]):
        raise _RowReject("outside-study-window")

    try:
        lat = float(_get(row, schema.lat))
        lon = float(_get(row, schema.lon))
    except ValueError:
        raise _RowReject("bad-coordinate")
    if not (-90.0 <= lat <= 90.0 and -180.0 <= lon <= 180.0):
        raise _RowReject("out-of-range")

    try:
        frame = taxonomy.resolve(_get(row, schema.frame))
    except KeyError:
        raise _RowReject("unknown-frame")

    stance_raw = _get(row, schema.stance).lower()
    stance = _STANCE_LABELS.get(stance_raw)
    if stance is None:
        raise _RowReject("unknown-stance")

    sentiment = 0.0
    raw_sent = _get(row, schema.sentiment)
    if raw_sent:
        try:
            sentiment = float(raw_sent)
        except ValueError:
            raise _RowReject("bad-sentiment")
        if schema.sentiment_range == "unit":
            if not 0.0 <= sentiment <= 1.0:
                raise _RowReject("out-of-range")
            sentiment = 2.0 * sentiment - 1.0
        elif not -1.0 <= sentiment <= 1.0:
            raise _RowReject("out-of-range")

    vivid_raw = _get(row, schema.vivid).lower()
    if vivid_raw in _TRUE_LABELS:
        vivid = True
    elif vivid_raw in _FALSE_LABELS:
        vivid = False
    else:
        raise _RowReject("bad-vivid")

    virality = 0.0
    raw_vir = _get(row, schema.virality)
    if raw_vir:
        try:
            virality = float(raw_vir)
        except ValueError:
            raise _RowReject("bad-virality")
        if virality < 0:
            raise _RowReject("out-of-range")

    text = _get(row, schema.text) or None
    hashtags = tuple(
        t.lower().lstrip("#") for t in _get(row, schema.hashtags).split() if t.strip("#")
    )
    return AnnotatedTweet(
        id=tweet_id,
        timestamp=ts,
        latitude=lat,
        longitude=lon,
        frame=frame,
        stance=stance,
        sentiment=sentiment,
        vivid=vivid,
        virality=virality,
        text=text,
        hashtags=hashtags,
    )


def estimate_stance(tweet: AnnotatedTweet, lexicon: StanceLexicon) -> Stance:
    """Hashtag-majority stance estimate; ties (including no evidence) are Unknown."""
    tags = set(tweet.hashtags)
    pro_hits = len(tags & lexicon.pro)
    anti_hits = len(tags & lexicon.anti)
    if pro_hits > anti_hits:
        return Stance.PRO
    if anti_hits > pro_hits:
        return Stance.ANTI
    return Stance.UNKNOWN


def enrich_stance(
    tweets: Iterable[AnnotatedTweet], lexicon: StanceLexicon
) -> list[AnnotatedTweet]:
    """Fill in Unknown stances from hashtags; labeled stances are left alone."""
    out = []
    for t in tweets:
        if t.stance is Stance.UNKNOWN:
            est = estimate_stance(t, lexicon)
            if est is not Stance.UNKNOWN:
                t = replace(t, stance=est)
        out.append(t)
    return out
