"""County boundary loading, bbox-tree spatial index, and point-to-county assignment.

Point-in-polygon uses even-odd ray casting on raw lon/lat coordinates; at
county scale the planar approximation is adequate. Points falling exactly on a
shared boundary resolve to the lowest FIPS code for determinism.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .corpus import AnnotatedTweet

Ring = list[tuple[float, float]]
BBox = tuple[float, float, float, float]  # min-lon, min-lat, max-lon, max-lat


class GeoError(ValueError):
    """Raised on malformed boundary input."""


def _ring_bbox(rings: Iterable[Ring]) -> BBox:
    xs = [x for ring in rings for x, _ in ring]
    ys = [y for ring in rings for _, y in ring]
    return (min(xs), min(ys), max(xs), max(ys))


@dataclass(frozen=True)
class CountyGeometry:
    fips: str
    name: str
    state: str
    # each polygon is (outer ring, list of hole rings); rings are closed
    polygons: tuple[tuple[Ring, tuple[Ring, ...]], ...]
    bbox: BBox

    def contains(self, lon: float, lat: float) -> bool:
        """Even-odd containment over all polygons; points inside holes are outside."""
        if not _bbox_contains(self.bbox, lon, lat):
            return False
        for outer, holes in self.polygons:
            if _ray_cast(outer, lon, lat):
                if not any(_ray_cast(h, lon, lat) for h in holes):
                    return True
        return False


def _bbox_contains(bbox: BBox, lon: float, lat: float) -> bool:
    return bbox[0] <= lon <= bbox[2] and bbox[1] <= lat <= bbox[3]


def _ray_cast(ring: Ring, x: float, y: float) -> bool:
    """Even-odd rule: count crossings of the horizontal ray towards +x."""
    inside = False
    n = len(ring)
    j = n - 1
    for i in range(n):
        xi, yi = ring[i]
        xj, yj = ring[j]
        if (yi > y) != (yj > y):
            x_cross = (xj - xi) * (y - yi) / (yj - yi) + xi
            if x < x_cross:
                inside = not inside
        j = i
    return inside


def _close_ring(ring: Sequence[Sequence[float]], feature_idx: int) -> Ring:
    pts = [(float(x), float(y)) for x, y in ring]
    if len(pts) < 4:
        raise GeoError(f"feature {feature_idx}: ring with fewer than 4 vertices")
    if pts[0] != pts[-1]:
        raise GeoError(f"feature {feature_idx}: unclosed ring")
    return pts


def load_counties(
    path: str | Path, exclusions: frozenset[str] | set[str] = frozenset()
) -> list[CountyGeometry]:
    """Load a GeoJSON FeatureCollection of counties, skipping excluded states.

    Each feature must carry ``fips``, ``name``, and ``state`` properties and a
    Polygon or MultiPolygon geometry with closed rings.
    """
    with open(path, encoding="utf-8") as fh:
        collection = json.load(fh)
    counties: list[CountyGeometry] = []
    seen_fips: set[str] = set()
    for idx, feature in enumerate(collection.get("features", [])):
        props = feature.get("properties", {})
        fips = props.get("fips")
        if not fips:
            raise GeoError(f"feature {idx}: missing fips property")
        state = props.get("state", "")
        if state in exclusions:
            continue
        if fips in seen_fips:
            raise GeoError(f"feature {idx}: duplicate fips {fips}")
        seen_fips.add(fips)
        geom = feature.get("geometry", {})
        gtype = geom.get("type")
        if gtype == "Polygon":
            raw_polys = [geom["coordinates"]]
        elif gtype == "MultiPolygon":
            raw_polys = geom["coordinates"]
        else:
            raise GeoError(f"feature {idx}: unsupported geometry type {gtype!r}")
        polygons = []
        for poly in raw_polys:
            outer = _close_ring(poly[0], idx)
            holes = tuple(_close_ring(h, idx) for h in poly[1:])
            polygons.append((outer, holes))
        all_rings = [p[0] for p in polygons] + [h for p in polygons for h in p[1]]
        counties.append(
            CountyGeometry(
                fips=str(fips),
                name=props.get("name", ""),
                state=state,
                polygons=tuple(polygons),
                bbox=_ring_bbox(all_rings),
            )
        )
    if not counties:
        raise GeoError("no counties loaded")
    return counties


class _Node:
    __slots__ = ("bbox", "left", "right", "items")

    def __init__(self, bbox: BBox, left=None, right=None, items=None):
        self.bbox = bbox
        self.left = left
        self.right = right
        self.items = items  # leaf payload: list of counties


LEAF_SIZE = 16


class SpatialIndex:
    """Static axis-aligned bbox tree over county bounding boxes.

    Read-only after construction; safe for concurrent queries.
    """

    def __init__(self, counties: Sequence[CountyGeometry]):
        if not counties:
            raise GeoError("cannot index an empty county set")
        self._root = self._build(list(counties))
        self.size = len(counties)

    @staticmethod
    def _merge(bboxes: list[BBox]) -> BBox:
        return (
            min(b[0] for b in bboxes),
            min(b[1] for b in bboxes),
            max(b[2] for b in bboxes),
            max(b[3] for b in bboxes),
        )

    def _build(self, items: list[CountyGeometry]) -> _Node:
        bbox = self._merge([c.bbox for c in items])
        if len(items) <= LEAF_SIZE:
            return _Node(bbox, items=items)
        # split on the wider axis at the median bbox center
        width, height = bbox[2] - bbox[0], bbox[3] - bbox[1]
        axis = 0 if width >= height else 1
        items.sort(key=lambda c: c.bbox[axis] + c.bbox[axis + 2])
        mid = len(items) // 2
        return _Node(bbox, left=self._build(items[:mid]), right=self._build(items[mid:]))

    def query(self, lon: float, lat: float) -> list[CountyGeometry]:
        """All counties whose bounding box contains the point."""
        out: list[CountyGeometry] = []
        stack = [self._root]
        while stack:
            node = stack.pop()
            if not _bbox_contains(node.bbox, lon, lat):
                continue
            if node.items is not None:
                out.extend(c for c in node.items if _bbox_contains(c.bbox, lon, lat))
            else:
                stack.append(node.left)
                stack.append(node.right)
        return out


def build_index(counties: Sequence[CountyGeometry]) -> SpatialIndex:
    return SpatialIndex(counties)


def assign_county(
    index: SpatialIndex, lat: float, lon: float
) -> Optional[str]:
    """FIPS of the county containing the point, or None. Lowest FIPS wins ties."""
    candidates = index.query(lon, lat)
    best: Optional[str] = None
    for county in candidates:
        if county.contains(lon, lat):
            if best is None or county.fips < best:
                best = county.fips
    return best


def assign_county_brute(
    counties: Sequence[CountyGeometry], lat: float, lon: float
) -> Optional[str]:
    """Index-free reference: exhaustive scan with the same containment test."""
    best: Optional[str] = None
    for county in counties:
        if county.contains(lon, lat):
            if best is None or county.fips < best:
                best = county.fips
    return best


def geotag_corpus(
    tweets: Sequence[AnnotatedTweet], index: SpatialIndex
) -> tuple[list[tuple[AnnotatedTweet, str]], int]:
    """Assign each tweet to its county; returns (assigned pairs, unassigned count)."""
    tagged: list[tuple[AnnotatedTweet, str]] = []
    unassigned = 0
    for tweet in tweets:
        fips = assign_county(index, tweet.latitude, tweet.longitude)
        if fips is None:
            unassigned += 1
        else:
            tagged.append((tweet, fips))
    return tagged, unassigned


def simplify_ring(ring: Ring, tolerance: float) -> Ring:
    """Douglas-Peucker decimation keeping ring closure; tolerance in degrees."""
    if tolerance <= 0 or len(ring) <= 5:
        return list(ring)
    pts = ring[:-1]

    def _dp(points: list[tuple[float, float]]) -> list[tuple[float, float]]:
        if len(points) < 3:
            return points
        (x0, y0), (x1, y1) = points[0], points[-1]
        dx, dy = x1 - x0, y1 - y0
        norm = (dx * dx + dy * dy) ** 0.5 or 1e-30
        best_d, best_i = -1.0, -1
        for i in range(1, len(points) - 1):
            px, py = points[i]
            d = abs(dy * (px - x0) - dx * (py - y0)) / norm
            if d > best_d:
                best_d, best_i = d, i
        if best_d <= tolerance:
            return [points[0], points[-1]]
        left = _dp(points[: best_i + 1])
        right = _dp(points[best_i:])
        return left[:-1] + right

    # anchor on the two extreme points to avoid degenerate closure
    out = _dp(pts + [pts[0]])
    if len(out) < 4:
        return list(ring)
    if out[0] != out[-1]:
        out.append(out[0])
    return out


def export_assignment_counts(
    tagged: Sequence[tuple[AnnotatedTweet, str]], path: str | Path
) -> None:
    """Diagnostic export: per-county assignment counts as `fips,count`."""
    counts: dict[str, int] = {}
    for _, fips in tagged:
        counts[fips] = counts.get(fips, 0) + 1
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("fips,count\n")
        for fips in sorted(counts):
            fh.write(f"{fips},{counts[fips]}\n")
