"""Read-only HTTP API over an immutable dataset snapshot.

Endpoints serialize the exact output of the analytics/inference library calls
on the current snapshot; the CLI reuses the same payload builders so numbers
agree across all three surfaces. Snapshot replacement is an atomic reference
swap: in-flight requests keep the snapshot they started with.

Filter grammar (query parameter ``filter``): semicolon-separated conjunctive
``key=value`` pairs, set values comma-separated. Keys: ``frame``, ``stance``,
``from``, ``to`` (ISO dates), ``state``, ``fips``. Example:
``frame=Care,Harm;stance=Pro;from=2020-03-01;to=2020-04-30``.
"""

from __future__ import annotations

import math
import threading
from datetime import date
from pathlib import Path
from typing import Optional

from fastapi import Body, FastAPI, HTTPException, Query

from . import analytics
from .analytics import FEATURE_BY_KEY, FEATURE_KEYS, FEATURE_NAMES, TweetFilter
from .corpus import Stance
from .inference import InferenceError, ModelSpec, _sig, run_inference
from .snapshot import Snapshot, SnapshotError, load_snapshot

MAX_PAGE = 1000


class FilterError(ValueError):
    pass


def parse_filter(raw: Optional[str]) -> TweetFilter:
    if not raw:
        return TweetFilter()
    kwargs: dict = {}
    for pair in raw.split(";"):
        pair = pair.strip()
        if not pair:
            continue
        if "=" not in pair:
            raise FilterError(f"bad filter clause {pair!r}: expected key=value")
        key, value = pair.split("=", 1)
        key, value = key.strip(), value.strip()
        if key == "frame":
            kwargs["frames"] = frozenset(v.strip() for v in value.split(","))
        elif key == "stance":
            try:
                kwargs["stances"] = frozenset(Stance(v.strip()) for v in value.split(","))
            except ValueError:
                raise FilterError(f"unknown stance in {value!r}")
        elif key == "from":
            kwargs["date_from"] = _parse_date(value)
        elif key == "to":
            kwargs["date_to"] = _parse_date(value)
        elif key == "state":
            kwargs["states"] = frozenset(v.strip() for v in value.split(","))
        elif key == "fips":
            kwargs["fips"] = frozenset(v.strip() for v in value.split(","))
        else:
            raise FilterError(f"unknown filter key {key!r}")
    return TweetFilter(**kwargs)


def _parse_date(value: str) -> date:
    try:
        return date.fromisoformat(value)
    except ValueError:
        raise FilterError(f"bad date {value!r}")


def jnum(v: float):
    """JSON-safe number: 6 significant digits, NaN/inf become null."""
    if v is None or not math.isfinite(v):
        return None
    return _sig(float(v), 6)


# ---------------------------------------------------------------------------
# payload builders (shared by HTTP endpoints and CLI stats)


def meta_payload(snap: Snapshot) -> dict:
    return {
        "version": snap.version,
        "n_tweets": len(snap.tagged),
        "n_counties": len(snap.counties),
        "n_contexts": len(snap.contexts),
        "n_feature_vectors": len(snap.vectors),
        "date_range": {
            "start": snap.date_start.isoformat() if snap.date_start else None,
            "end": snap.date_end.isoformat() if snap.date_end else None,
        },
        "has_covid": snap.has_covid,
        "bin_width_days": snap.bin_width_days,
        "frames": [
            {"name": f.name, "foundation": f.foundation.value, "polarity": f.polarity.value}
            for f in snap.taxonomy.frames
        ],
        "features": {k: FEATURE_BY_KEY[k] for k in FEATURE_KEYS},
        "context_fields": snap.context_fields(),
        "demographics": snap.demographics,
        "states": sorted(set(snap.state_of.values())),
    }


def summary_payload(snap: Snapshot, flt: TweetFilter) -> dict:
    rows = analytics.summarize_frames(snap.tagged, flt, snap.state_of, snap.taxonomy)
    return {
        "version": snap.version,
        "total": sum(r.count for r in rows),
        "frames": [
            {
                "frame": r.frame,
                "count": r.count,
                "pro_share": jnum(r.pro_share),
                "mean_sentiment": jnum(r.mean_sentiment),
                "vivid_share": jnum(r.vivid_share),
                "mean_virality": jnum(r.mean_virality),
            }
            for r in rows
        ],
    }


def timeline_payload(snap: Snapshot, width_days: int, flt: TweetFilter) -> dict:
    bins = analytics.bin_timeline(
        snap.tagged, snap.covid, width_days, flt, snap.state_of, snap.taxonomy
    )
    frame_names = snap.taxonomy.frame_names()
    out_bins = []
    for b in bins:
        rec = {
            "bin_start": b.bin_start.isoformat(),
            "width_days": b.width_days,
            "total": b.total,
            "frame_counts": dict(zip(frame_names, b.frame_counts)),
            "pro_count": b.pro_count,
            "anti_count": b.anti_count,
            "mean_sentiment": jnum(b.mean_sentiment),
            "total_virality": jnum(b.total_virality),
        }
        if snap.has_covid:
            rec["new_cases"] = b.new_cases
            rec["new_deaths"] = b.new_deaths
        out_bins.append(rec)
    return {"version": snap.version, "width_days": width_days, "bins": out_bins}


def map_payload(snap: Snapshot, feature: str, demographic: str, flt: TweetFilter) -> dict:
    if feature not in FEATURE_KEYS and feature not in FEATURE_NAMES:
        raise FilterError(f"unknown feature {feature!r}")
    if demographic not in snap.context_fields():
        raise FilterError(f"unknown demographic {demographic!r}")
    subset = analytics.filter_tweets(snap.tagged, flt, snap.state_of)
    vectors, _ = analytics.aggregate_counties(subset, snap.contexts, snap.taxonomy)
    counties = []
    for fips in sorted(vectors):
        v = vectors[fips]
        ctx = snap.contexts[fips]
        if demographic == "population":
            demo_value = float(ctx.population)
        elif demographic == "vote_margin":
            demo_value = ctx.vote_margin
        elif demographic in ("dem_share", "rep_share", "mask_use"):
            demo_value = getattr(ctx, demographic)
        else:
            demo_value = ctx.demographics.get(demographic)
        counties.append({
            "fips": fips,
            "state": snap.state_of.get(fips, ""),
            "n_tweets": v.n_tweets,
            "feature_value": jnum(v.get(feature)),
            "demographic_value": jnum(demo_value) if demo_value is not None else None,
        })
    return {
        "version": snap.version,
        "feature": feature,
        "demographic": demographic,
        "counties": counties,
    }


def tweets_payload(snap: Snapshot, flt: TweetFilter, limit: int, offset: int) -> dict:
    if limit < 0 or limit > MAX_PAGE or offset < 0:
        raise FilterError(f"bad paging: limit={limit} offset={offset}")
    subset = analytics.filter_tweets(snap.tagged, flt, snap.state_of)
    subset = sorted(subset, key=lambda pair: (pair[0].timestamp, pair[0].id))
    page = subset[offset:offset + limit]
    return {
        "version": snap.version,
        "total": len(subset),
        "limit": limit,
        "offset": offset,
        "tweets": [
            {
                "id": t.id,
                "timestamp": t.timestamp.strftime("%Y-%m-%dT%H:%M:%SZ"),
                "lat": t.latitude,
                "lon": t.longitude,
                "frame": t.frame.name,
                "stance": t.stance.value,
                "sentiment": jnum(t.sentiment),
                "vivid": t.vivid,
                "virality": jnum(t.virality),
                "text": t.text,
                "hashtags": list(t.hashtags),
                "fips": fips,
            }
            for t, fips in page
        ],
    }


def inference_payload(snap: Snapshot, spec: ModelSpec, full_precision: bool = False) -> dict:
    fit = run_inference(spec, snap.inference_rows)
    return {
        "version": snap.version,
        "spec": spec.to_dict(),
        "model": fit.to_dict(None if full_precision else 6),
    }


def geometry_payload(snap: Snapshot) -> dict:
    return {"version": snap.version, "geojson": snap.geojson}


# ---------------------------------------------------------------------------
# snapshot holder + app


class SnapshotHolder:
    """Atomic published-snapshot reference; readers never see a half swap."""

    def __init__(self) -> None:
        self._snap: Optional[Snapshot] = None
        self._load_lock = threading.Lock()

    @property
    def current(self) -> Optional[Snapshot]:
        return self._snap

    def load(self, dataset_dir: str | Path) -> int:
        """Load and publish; on failure the previous snapshot stays published."""
        with self._load_lock:
            version = (self._snap.version + 1) if self._snap else 1
            snap = load_snapshot(dataset_dir, version)
            self._snap = snap  # single atomic reference assignment
            return version


def create_app(
    holder: Optional[SnapshotHolder] = None, static_dir: Optional[str] = None
) -> FastAPI:
    holder = holder or SnapshotHolder()
    app = FastAPI(title="moralmap service")
    app.state.holder = holder
    # dashboard may be served from another origin; API is read-only
    from fastapi.middleware.cors import CORSMiddleware

    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/app", StaticFiles(directory=static_dir, html=True), name="app")

    def snap_or_503() -> Snapshot:
        snap = holder.current
        if snap is None:
            raise HTTPException(status_code=503, detail="no snapshot loaded")
        return snap

    def _filter(raw: Optional[str]) -> TweetFilter:
        try:
            return parse_filter(raw)
        except FilterError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.get("/api/meta")
    def meta():
        return meta_payload(snap_or_503())

    @app.get("/api/summary")
    def summary(filter: Optional[str] = Query(default=None)):
        return summary_payload(snap_or_503(), _filter(filter))

    @app.get("/api/timeline")
    def timeline(
        width: Optional[int] = Query(default=None, ge=1),
        filter: Optional[str] = Query(default=None),
    ):
        snap = snap_or_503()
        try:
            return timeline_payload(snap, width or snap.bin_width_days, _filter(filter))
        except analytics.AnalyticsError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.get("/api/map")
    def county_map(
        feature: str = Query(default="f1"),
        demographic: str = Query(default="vote_margin"),
        filter: Optional[str] = Query(default=None),
    ):
        try:
            return map_payload(snap_or_503(), feature, demographic, _filter(filter))
        except FilterError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.get("/api/tweets")
    def tweets(
        filter: Optional[str] = Query(default=None),
        limit: int = Query(default=100),
        offset: int = Query(default=0),
    ):
        try:
            return tweets_payload(snap_or_503(), _filter(filter), limit, offset)
        except FilterError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.get("/api/geometry")
    def geometry():
        return geometry_payload(snap_or_503())

    @app.post("/api/inference")
    def inference(body: dict = Body(...), full_precision: bool = Query(default=False)):
        snap = snap_or_503()
        try:
            spec = ModelSpec.from_dict(body)
        except (KeyError, TypeError, InferenceError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        try:
            return inference_payload(snap, spec, full_precision)
        except InferenceError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.post("/api/admin/load")
    def admin_load(body: dict = Body(...)):
        path = body.get("path")
        if not path:
            raise HTTPException(status_code=400, detail="missing dataset path")
        try:
            version = holder.load(path)
        except (SnapshotError, OSError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=f"dataset rejected: {exc}")
        return {"version": version}

    return app


def serve(
    dataset_dir: str | Path,
    host: str = "127.0.0.1",
    port: int = 8008,
    static_dir: Optional[str] = None,
) -> None:
    """Blocking server start used by the CLI ``serve`` subcommand."""
    import uvicorn

    holder = SnapshotHolder()
    holder.load(dataset_dir)
    app = create_app(holder, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
