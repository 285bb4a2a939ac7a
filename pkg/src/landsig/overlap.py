"""Polygon geometry for validation against official zoning maps.

Predicted clusters are rectangles, so the only boolean operation needed is
clipping a polygon against an axis-aligned rectangle (Sutherland-Hodgman).
Areas come from the shoelace formula after a local equirectangular
projection anchored at the ring's centroid latitude; at city extents
(<= 0.05 degrees) the projection error is far below reporting tolerances.

Zone files are GeoJSON feature collections of Polygons/MultiPolygons whose
``landuse`` property maps to a land-use label, optionally through a
user-supplied label map.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DegenerateRingError,
    NoZonesForLabelError,
    StoreIoError,
    ZoneGeometryError,
)
from .model import BoundingBox, LandUseLabel, Zone, ZonePolygon, parse_label, validate_bbox

EARTH_RADIUS_M = 6371008.8
_DEG = np.pi / 180.0
_MIN_RING_AREA_M2 = 1e-9

HEADLINE_DEFINITIONS = ("pct_of_zone", "pct_of_cluster", "iou")


# ---------------------------------------------------------------------------
# rings


def canonical_ring(vertices: Iterable[Sequence[float]]) -> np.ndarray:
    """Validate and canonicalize a ring given as (lat, lon) vertices.

    Accepts rings with or without an explicit closing vertex and returns the
    open form (closure implicit). Raises :class:`DegenerateRingError` for
    fewer than 3 distinct vertices and :class:`ZoneGeometryError` for
    self-intersecting rings.
    """
    arr = np.asarray(list(vertices), dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise DegenerateRingError("ring must be a sequence of (lat, lon) pairs")
    # drop consecutive duplicates, then the explicit closing vertex
    if len(arr) >= 2:
        keep = np.ones(len(arr), dtype=bool)
        keep[1:] = (arr[1:] != arr[:-1]).any(axis=1)
        arr = arr[keep]
    if len(arr) >= 2 and np.array_equal(arr[0], arr[-1]):
        arr = arr[:-1]
    if len(np.unique(arr, axis=0)) < 3:
        raise DegenerateRingError("ring needs at least 3 distinct vertices")
    if _ring_self_intersects(arr):
        raise ZoneGeometryError("ring is self-intersecting")
    arr.flags.writeable = False
    return arr


def _ring_self_intersects(ring: np.ndarray) -> bool:
    """O(n^2) proper-crossing test between non-adjacent edges."""
    n = len(ring)
    edges = [(ring[i], ring[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue  # shared vertex with neighbour edge
            if _segments_cross(*edges[i], *edges[j]):
                return True
    return False


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _segments_cross(p1, p2, q1, q2) -> bool:
    """Proper crossing only; touching endpoints do not count."""
    d1 = _cross(q1, q2, p1)
    d2 = _cross(q1, q2, p2)
    d3 = _cross(p1, p2, q1)
    d4 = _cross(p1, p2, q2)
    straddles_q = (d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)
    straddles_p = (d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)
    return straddles_q and straddles_p


def _project(ring: np.ndarray, lat0_deg: float | None = None) -> np.ndarray:
    """Local equirectangular projection to meters: x = R*lon*cos(lat0), y = R*lat.

    Coordinates are taken relative to the ring centroid (translation does not
    change areas) so the shoelace sum is well conditioned.
    """
    if lat0_deg is None:
        lat0_deg = float(ring[:, 0].mean())
    lon0_deg = float(ring[:, 1].mean())
    x = EARTH_RADIUS_M * (ring[:, 1] - lon0_deg) * _DEG * np.cos(lat0_deg * _DEG)
    y = EARTH_RADIUS_M * (ring[:, 0] - lat0_deg) * _DEG
    return np.column_stack([x, y])


def _shoelace(xy: np.ndarray) -> float:
    x = xy[:, 0]
    y = xy[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def signed_ring_area_m2(ring: np.ndarray, lat0_deg: float | None = None) -> float:
    """Shoelace area in m^2; positive for counterclockwise rings (lon-lat plane)."""
    return _shoelace(_project(np.asarray(ring, dtype=np.float64), lat0_deg))


def ring_area_m2(vertices: Iterable[Sequence[float]]) -> float:
    """Absolute area of a closed ring in square meters.

    The ring is validated first; collinear or near-zero-area rings raise
    :class:`DegenerateRingError`.
    """
    ring = canonical_ring(vertices)
    area = abs(signed_ring_area_m2(ring))
    if area < _MIN_RING_AREA_M2:
        raise DegenerateRingError("ring has zero area")
    return area


def _oriented(ring: np.ndarray, counterclockwise: bool) -> np.ndarray:
    area = _shoelace(np.column_stack([ring[:, 1], ring[:, 0]]))  # degree-plane sign
    if (area > 0) != counterclockwise and area != 0:
        return ring[::-1]
    return ring


def bbox_ring(b: BoundingBox) -> np.ndarray:
    """Rectangle as a counterclockwise 4-vertex ring of (lat, lon) rows."""
    return np.array(
        [
            [b.lat_min, b.lon_min],
            [b.lat_min, b.lon_max],
            [b.lat_max, b.lon_max],
            [b.lat_max, b.lon_min],
        ],
        dtype=np.float64,
    )


def rect_area_m2(b: BoundingBox) -> float:
    validate_bbox(b)
    return ring_area_m2(bbox_ring(b))


# ---------------------------------------------------------------------------
# clipping


def _clip_halfplane(points: list[tuple[float, float]], axis: int, bound: float, keep_ge: bool):
    """One Sutherland-Hodgman pass against lat/lon >= or <= bound."""
    if not points:
        return []
    out: list[tuple[float, float]] = []

    def inside(p):
        return p[axis] >= bound if keep_ge else p[axis] <= bound

    def intersect(a, b):
        t = (bound - a[axis]) / (b[axis] - a[axis])
        if axis == 0:
            return (bound, a[1] + t * (b[1] - a[1]))
        return (a[0] + t * (b[0] - a[0]), bound)

    prev = points[-1]
    prev_in = inside(prev)
    for cur in points:
        cur_in = inside(cur)
        if cur_in:
            if not prev_in:
                out.append(intersect(prev, cur))
            out.append(cur)
        elif prev_in:
            out.append(intersect(prev, cur))
        prev, prev_in = cur, cur_in
    return out


def clip_ring_to_rect(ring: np.ndarray, rect: BoundingBox) -> np.ndarray | None:
    """Clip one ring against the rectangle; None when nothing remains.

    Orientation of the input ring is preserved. The output may contain the
    zero-width bridges Sutherland-Hodgman produces for non-convex subjects;
    they do not affect signed areas.
    """
    points = [(float(lat), float(lon)) for lat, lon in ring]
    for axis, bound, keep_ge in (
        (0, rect.lat_min, True),
        (0, rect.lat_max, False),
        (1, rect.lon_min, True),
        (1, rect.lon_max, False),
    ):
        points = _clip_halfplane(points, axis, bound, keep_ge)
        if not points:
            return None
    out = np.array(points, dtype=np.float64)
    keep = np.ones(len(out), dtype=bool)
    keep[1:] = (out[1:] != out[:-1]).any(axis=1)
    if np.array_equal(out[0], out[-1]) and len(out) > 1:
        keep[-1] = False
    out = out[keep]
    if len(out) < 3:
        return None
    return out


def clip_rect_polygon(rect: BoundingBox, polygons: Sequence[ZonePolygon]) -> list[np.ndarray]:
    """Intersection of a rectangle with a polygon set, as oriented rings.

    Outer-ring pieces come back counterclockwise (positive signed area) and
    hole pieces clockwise, so the net intersection area is the plain sum of
    signed areas. Empty intersection is an empty list.
    """
    validate_bbox(rect)
    pieces: list[np.ndarray] = []
    for poly in polygons:
        outer = clip_ring_to_rect(_oriented(poly.outer, counterclockwise=True), rect)
        if outer is None:
            continue
        pieces.append(outer)
        for hole in poly.holes:
            piece = clip_ring_to_rect(_oriented(hole, counterclockwise=False), rect)
            if piece is not None:
                pieces.append(piece)
    return pieces


def intersection_area_m2(rect: BoundingBox, polygons: Sequence[ZonePolygon]) -> float:
    total = 0.0
    for piece in clip_rect_polygon(rect, polygons):
        total += signed_ring_area_m2(piece)
    return max(0.0, total)


def polygon_area_m2(polygons: Sequence[ZonePolygon]) -> float:
    """Area of a polygon set: outer rings minus holes."""
    total = 0.0
    for poly in polygons:
        total += abs(signed_ring_area_m2(poly.outer))
        for hole in poly.holes:
            total -= abs(signed_ring_area_m2(hole))
    return max(0.0, total)


# ---------------------------------------------------------------------------
# point-in-polygon (even-odd), used by the synthetic generator and tests


def points_in_polygon(lats: np.ndarray, lons: np.ndarray, poly: ZonePolygon) -> np.ndarray:
    """Vectorized even-odd test; holes flip containment back off."""
    inside = np.zeros(len(lats), dtype=bool)
    for ring in (poly.outer, *poly.holes):
        inside ^= _crossings_odd(lats, lons, ring)
    return inside


def _crossings_odd(lats: np.ndarray, lons: np.ndarray, ring: np.ndarray) -> np.ndarray:
    x = np.asarray(lons, dtype=np.float64)
    y = np.asarray(lats, dtype=np.float64)
    odd = np.zeros(len(x), dtype=bool)
    rx = ring[:, 1]
    ry = ring[:, 0]
    n = len(ring)
    for i in range(n):
        x1, y1 = rx[i], ry[i]
        x2, y2 = rx[(i + 1) % n], ry[(i + 1) % n]
        straddles = (y1 > y) != (y2 > y)
        if not straddles.any():
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            x_at = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
        odd ^= straddles & (x < x_at)
    return odd


# ---------------------------------------------------------------------------
# zone files


def _on_ring_boundary(lats: np.ndarray, lons: np.ndarray, ring: np.ndarray) -> np.ndarray:
    """Exact test for points sitting on a ring edge (no tolerance)."""
    x = np.asarray(lons, dtype=np.float64)
    y = np.asarray(lats, dtype=np.float64)
    on = np.zeros(len(x), dtype=bool)
    n = len(ring)
    for i in range(n):
        y1, x1 = ring[i]
        y2, x2 = ring[(i + 1) % n]
        cross = (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1)
        within = (
            (np.minimum(x1, x2) <= x)
            & (x <= np.maximum(x1, x2))
            & (np.minimum(y1, y2) <= y)
            & (y <= np.maximum(y1, y2))
        )
        on |= (cross == 0) & within
    return on


def _any_vertex_strictly_inside(ring: np.ndarray, poly: ZonePolygon) -> bool:
    lats, lons = ring[:, 0], ring[:, 1]
    inside = points_in_polygon(lats, lons, poly)
    for boundary in (poly.outer, *poly.holes):
        inside &= ~_on_ring_boundary(lats, lons, boundary)
    return bool(inside.any())


def _zone_overlaps(a: Zone, b: Zone) -> bool:
    """Conservative interior-overlap test: proper edge crossing or a vertex
    of one strictly inside the other. Shared boundaries do not count."""
    for pa in a.polygons:
        for pb in b.polygons:
            for ring_a in (pa.outer, *pa.holes):
                for ring_b in (pb.outer, *pb.holes):
                    if _rings_cross(ring_a, ring_b):
                        return True
            if _any_vertex_strictly_inside(pa.outer, pb):
                return True
            if _any_vertex_strictly_inside(pb.outer, pa):
                return True
    return False


def _rings_cross(ring_a: np.ndarray, ring_b: np.ndarray) -> bool:
    na, nb = len(ring_a), len(ring_b)
    for i in range(na):
        p1, p2 = ring_a[i], ring_a[(i + 1) % na]
        for j in range(nb):
            if _segments_cross(p1, p2, ring_b[j], ring_b[(j + 1) % nb]):
                return True
    return False


def _swap_to_latlon(positions) -> np.ndarray:
    arr = np.asarray(positions, dtype=np.float64)
    return arr[:, [1, 0]]  # GeoJSON stores [lon, lat]


def _polygon_from_geojson(coords) -> ZonePolygon:
    rings = [canonical_ring(_swap_to_latlon(ring)) for ring in coords]
    return ZonePolygon(outer=rings[0], holes=tuple(rings[1:]))


def load_label_map(path: str | Path) -> dict[str, LandUseLabel]:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise StoreIoError(f"cannot read label map {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise StoreIoError(f"label map {path} is not valid JSON: {exc}") from exc
    return {str(k).lower(): parse_label(str(v)) for k, v in raw.items()}


def load_zones(
    path: str | Path, label_map: Mapping[str, LandUseLabel] | None = None
) -> list[Zone]:
    """Load and validate zones from a GeoJSON feature collection.

    Each feature needs Polygon/MultiPolygon geometry and a ``landuse``
    property. Without a label map, property values must match the canonical
    labels case-insensitively. Zones sharing a label must not overlap.
    """
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise StoreIoError(f"cannot read zone file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise StoreIoError(f"zone file {path} is not valid JSON: {exc}") from exc

    if raw.get("type") != "FeatureCollection" or "features" not in raw:
        raise ZoneGeometryError("zone file must be a GeoJSON FeatureCollection")

    zones: list[Zone] = []
    for i, feature in enumerate(raw["features"]):
        properties = feature.get("properties") or {}
        landuse = properties.get("landuse")
        if landuse is None:
            raise ZoneGeometryError(f"feature {i} has no landuse property")
        if label_map is not None and str(landuse).lower() in label_map:
            label = label_map[str(landuse).lower()]
        else:
            label = parse_label(str(landuse))
        geometry = feature.get("geometry") or {}
        gtype = geometry.get("type")
        coords = geometry.get("coordinates")
        if gtype == "Polygon":
            polygons = (_polygon_from_geojson(coords),)
        elif gtype == "MultiPolygon":
            polygons = tuple(_polygon_from_geojson(c) for c in coords)
        else:
            raise ZoneGeometryError(f"feature {i} has unsupported geometry {gtype!r}")
        source_id = str(properties.get("id", feature.get("id", f"feature-{i}")))
        zones.append(Zone(label=label, polygons=polygons, source_id=source_id))

    for i, a in enumerate(zones):
        for b in zones[i + 1 :]:
            if a.label == b.label and _zone_overlaps(a, b):
                raise ZoneGeometryError(
                    f"zones {a.source_id!r} and {b.source_id!r} share label "
                    f"{a.label} and overlap"
                )
    return zones


def zones_to_feature_collection(zones: Sequence[Zone]) -> dict:
    """Inverse of :func:`load_zones` (canonical closed GeoJSON rings)."""

    def close(ring: np.ndarray) -> list[list[float]]:
        closed = np.vstack([ring, ring[:1]])
        return [[float(lon), float(lat)] for lat, lon in closed]

    features = []
    for zone in zones:
        coords = [[close(p.outer), *[close(h) for h in p.holes]] for p in zone.polygons]
        if len(coords) == 1:
            geometry = {"type": "Polygon", "coordinates": coords[0]}
        else:
            geometry = {"type": "MultiPolygon", "coordinates": coords}
        features.append(
            {
                "type": "Feature",
                "properties": {"landuse": zone.label.value, "id": zone.source_id},
                "geometry": geometry,
            }
        )
    return {"type": "FeatureCollection", "features": features}


# ---------------------------------------------------------------------------
# overlap report


@dataclass(frozen=True)
class ZoneOverlapRow:
    """Intersection of one predicted cluster with one official zone."""

    source_id: str
    zone_label: LandUseLabel
    intersection_area_m2: float
    pct_of_cluster: float
    pct_of_zone: float
    iou: float

    def as_dict(self) -> dict:
        return {
            "source_id": self.source_id,
            "zone_label": self.zone_label.value,
            "intersection_area_m2": self.intersection_area_m2,
            "pct_of_cluster": self.pct_of_cluster,
            "pct_of_zone": self.pct_of_zone,
            "iou": self.iou,
        }


@dataclass(frozen=True)
class OverlapReport:
    """Overlap of one predicted cluster against all zones of its label.

    Three denominator conventions are reported side by side (cluster area,
    zone area, union); ``headline_pct`` is the aggregate under the configured
    default definition.
    """

    cluster_id: str
    predicted_label: LandUseLabel
    rows: tuple[ZoneOverlapRow, ...]
    cluster_area_m2: float
    zone_area_m2: float
    intersection_area_m2: float
    headline_definition: str
    headline_pct: float

    def as_dict(self) -> dict:
        return {
            "cluster_id": self.cluster_id,
            "predicted_label": self.predicted_label.value,
            "rows": [row.as_dict() for row in self.rows],
            "cluster_area_m2": self.cluster_area_m2,
            "zone_area_m2": self.zone_area_m2,
            "intersection_area_m2": self.intersection_area_m2,
            "headline_definition": self.headline_definition,
            "headline_pct": self.headline_pct,
        }


def _pct(numerator: float, denominator: float) -> float:
    if denominator <= 0:
        return 0.0
    return min(100.0, 100.0 * numerator / denominator)


def overlap_report(
    rect: BoundingBox,
    predicted_label: LandUseLabel,
    zones: Sequence[Zone],
    cluster_id: str = "cluster",
    headline_definition: str = "pct_of_zone",
) -> OverlapReport:
    """Clip the cluster rectangle against every zone of the predicted label.

    Raises :class:`NoZonesForLabelError` when the label has no zones at all.
    Same-label zones are disjoint (enforced at load), so summed intersection
    areas equal the union intersection.
    """
    if headline_definition not in HEADLINE_DEFINITIONS:
        raise ValueError(f"headline_definition must be one of {HEADLINE_DEFINITIONS}")
    relevant = [z for z in zones if z.label == predicted_label]
    if not relevant:
        raise NoZonesForLabelError(f"no zones labelled {predicted_label}")

    cluster_area = rect_area_m2(rect)
    rows = []
    total_intersection = 0.0
    total_zone_area = 0.0
    for zone in relevant:
        zone_area = polygon_area_m2(zone.polygons)
        intersection = intersection_area_m2(rect, zone.polygons)
        union = cluster_area + zone_area - intersection
        rows.append(
            ZoneOverlapRow(
                source_id=zone.source_id,
                zone_label=zone.label,
                intersection_area_m2=intersection,
                pct_of_cluster=_pct(intersection, cluster_area),
                pct_of_zone=_pct(intersection, zone_area),
                iou=_pct(intersection, union),
            )
        )
        total_intersection += intersection
        total_zone_area += zone_area

    headline = {
        "pct_of_cluster": _pct(total_intersection, cluster_area),
        "pct_of_zone": _pct(total_intersection, total_zone_area),
        "iou": _pct(total_intersection, cluster_area + total_zone_area - total_intersection),
    }[headline_definition]

    return OverlapReport(
        cluster_id=cluster_id,
        predicted_label=predicted_label,
        rows=tuple(rows),
        cluster_area_m2=cluster_area,
        zone_area_m2=total_zone_area,
        intersection_area_m2=total_intersection,
        headline_definition=headline_definition,
        headline_pct=headline,
    )
