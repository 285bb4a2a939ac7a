"""Geometry: areas, clipping vs Monte Carlo, zone files, overlap reports."""

import json

import numpy as np
import pytest

from landsig.errors import (
    DegenerateRingError,
    NoZonesForLabelError,
    StoreIoError,
    ZoneGeometryError,
)
from landsig.model import BoundingBox, LandUseLabel, Zone, ZonePolygon
from landsig.overlap import (
    bbox_ring,
    canonical_ring,
    clip_rect_polygon,
    intersection_area_m2,
    load_label_map,
    load_zones,
    overlap_report,
    points_in_polygon,
    polygon_area_m2,
    rect_area_m2,
    ring_area_m2,
    zones_to_feature_collection,
)

METERS_PER_DEG = 111194.92664455873  # earth radius * pi / 180


def square_ring(lat0, lon0, size):
    return [(lat0, lon0), (lat0, lon0 + size), (lat0 + size, lon0 + size), (lat0 + size, lon0)]


def convex_polygon(rng, clat, clon, r_lat, r_lon, k=None):
    """Random convex polygon: sorted angles on an axis-aligned ellipse."""
    k = k or int(rng.integers(5, 11))
    angles = np.sort(rng.uniform(0, 2 * np.pi, k))
    lat = clat + r_lat * np.sin(angles)
    lon = clon + r_lon * np.cos(angles)
    return ZonePolygon(outer=canonical_ring(np.column_stack([lat, lon])))


def mc_fraction(rng, rect, poly, samples=3 * 10**5):
    lats = rng.uniform(rect.lat_min, rect.lat_max, samples)
    lons = rng.uniform(rect.lon_min, rect.lon_max, samples)
    return points_in_polygon(lats, lons, poly).mean()


# --- ring areas ---------------------------------------------------------------


def test_equatorial_square_area():
    area = ring_area_m2(square_ring(0.0, 0.0, 0.001))
    expected = (METERS_PER_DEG * 0.001) ** 2
    assert area == pytest.approx(expected, rel=0.005)
    assert area == pytest.approx(12364.0, rel=0.005)


def test_square_at_lat60_has_half_width():
    area = ring_area_m2(square_ring(59.9995, 0.0, 0.001))
    assert area == pytest.approx(6182.0, rel=0.005)


def test_collinear_ring_is_degenerate():
    with pytest.raises(DegenerateRingError):
        ring_area_m2([(0.0, 0.0), (0.0, 0.001), (0.0, 0.002)])


def test_too_few_vertices_is_degenerate():
    with pytest.raises(DegenerateRingError):
        ring_area_m2([(0.0, 0.0), (1.0, 1.0)])
    with pytest.raises(DegenerateRingError):
        ring_area_m2([(0.0, 0.0), (1.0, 1.0), (0.0, 0.0), (1.0, 1.0)])


def test_closed_and_open_rings_agree():
    open_ring = square_ring(10.0, 20.0, 0.01)
    closed_ring = open_ring + [open_ring[0]]
    assert ring_area_m2(open_ring) == ring_area_m2(closed_ring)


def test_area_independent_of_rotation_and_orientation():
    ring = square_ring(-27.5, 153.0, 0.004)
    base = ring_area_m2(ring)
    for shift in range(1, 4):
        rotated = ring[shift:] + ring[:shift]
        assert ring_area_m2(rotated) == pytest.approx(base, rel=1e-12)
    assert ring_area_m2(ring[::-1]) == pytest.approx(base, rel=1e-12)


def test_self_intersecting_ring_rejected():
    bowtie = [(0.0, 0.0), (0.01, 0.01), (0.0, 0.01), (0.01, 0.0)]
    with pytest.raises(ZoneGeometryError):
        canonical_ring(bowtie)


# --- clipping -----------------------------------------------------------------


def test_polygon_inside_rect_is_returned_whole():
    poly = ZonePolygon(outer=canonical_ring(square_ring(-27.47, 153.02, 0.004)))
    rect = BoundingBox(-27.5, -27.4, 153.0, 153.1)
    pieces = clip_rect_polygon(rect, [poly])
    assert len(pieces) == 1
    assert intersection_area_m2(rect, [poly]) == pytest.approx(
        polygon_area_m2([poly]), rel=1e-9
    )


def test_disjoint_rect_clips_to_nothing():
    poly = ZonePolygon(outer=canonical_ring(square_ring(-27.47, 153.02, 0.004)))
    rect = BoundingBox(-27.3, -27.2, 153.0, 153.1)
    assert clip_rect_polygon(rect, [poly]) == []
    assert intersection_area_m2(rect, [poly]) == 0.0


def test_clip_result_independent_of_ring_rotation_and_orientation():
    rng = np.random.default_rng(7)
    poly_ring = square_ring(-27.472, 153.018, 0.006)
    rect = BoundingBox(-27.470, -27.465, 153.016, 153.021)
    base = intersection_area_m2(rect, [ZonePolygon(outer=canonical_ring(poly_ring))])
    for shift in range(1, 4):
        rotated = poly_ring[shift:] + poly_ring[:shift]
        for ring in (rotated, rotated[::-1]):
            area = intersection_area_m2(rect, [ZonePolygon(outer=canonical_ring(ring))])
            assert area == pytest.approx(base, rel=1e-12)


def test_clip_half_overlap_exact():
    # rect takes exactly the west half of the square
    poly = ZonePolygon(outer=canonical_ring(square_ring(0.0, 0.0, 0.01)))
    rect = BoundingBox(-1.0, 1.0, 0.0, 0.005)
    assert intersection_area_m2(rect, [poly]) == pytest.approx(
        polygon_area_m2([poly]) / 2, rel=1e-9
    )


def test_clip_against_polygon_with_hole():
    outer = canonical_ring(square_ring(0.0, 0.0, 0.01))
    hole = canonical_ring(square_ring(0.0025, 0.0025, 0.005))
    poly = ZonePolygon(outer=outer, holes=(hole,))
    covering = BoundingBox(-0.01, 0.02, -0.01, 0.02)
    assert intersection_area_m2(covering, [poly]) == pytest.approx(
        polygon_area_m2([poly]), rel=1e-9
    )
    # a rect fully inside the hole intersects nothing
    inside_hole = BoundingBox(0.004, 0.006, 0.004, 0.006)
    assert intersection_area_m2(inside_hole, [poly]) == 0.0


def test_clip_nonconvex_polygon_area_against_mc():
    # L-shape: Sutherland-Hodgman bridges must not distort the area
    l_shape = ZonePolygon(
        outer=canonical_ring(
            [
                (-27.480, 153.010),
                (-27.480, 153.030),
                (-27.470, 153.030),
                (-27.470, 153.020),
                (-27.460, 153.020),
                (-27.460, 153.010),
            ]
        )
    )
    rect = BoundingBox(-27.4775, -27.4625, 153.0125, 153.0275)
    rng = np.random.default_rng(21)
    mc = mc_fraction(rng, rect, l_shape, samples=4 * 10**5) * rect_area_m2(rect)
    clipped = intersection_area_m2(rect, [l_shape])
    assert clipped == pytest.approx(mc, abs=0.005 * rect_area_m2(rect))


def test_random_convex_clips_match_mc_oracle():
    rng = np.random.default_rng(99)
    for _ in range(40):
        clat = -27.47 + rng.uniform(-0.02, 0.02)
        clon = 153.02 + rng.uniform(-0.02, 0.02)
        poly = convex_polygon(rng, clat, clon, rng.uniform(0.002, 0.01), rng.uniform(0.002, 0.01))
        rect = BoundingBox(
            clat - rng.uniform(0.001, 0.008),
            clat + rng.uniform(0.001, 0.008),
            clon - rng.uniform(0.001, 0.008),
            clon + rng.uniform(0.001, 0.008),
        )
        rect_area = rect_area_m2(rect)
        mc = mc_fraction(rng, rect, poly) * rect_area
        assert intersection_area_m2(rect, [poly]) == pytest.approx(mc, abs=0.005 * rect_area)


def test_intersection_bounded_by_both_areas():
    rng = np.random.default_rng(3)
    for _ in range(60):
        clat = rng.uniform(-35.0, -27.0)
        clon = rng.uniform(150.0, 154.0)
        poly = convex_polygon(rng, clat, clon, rng.uniform(0.002, 0.01), rng.uniform(0.002, 0.01))
        rect = BoundingBox(
            clat - rng.uniform(0.001, 0.01),
            clat + rng.uniform(0.001, 0.01),
            clon - rng.uniform(0.001, 0.01),
            clon + rng.uniform(0.001, 0.01),
        )
        inter = intersection_area_m2(rect, [poly])
        bound = min(rect_area_m2(rect), polygon_area_m2([poly]))
        assert inter <= bound * (1 + 1e-6)


def test_translation_changes_little_at_city_latitudes():
    poly_ring = square_ring(-27.47, 153.02, 0.006)
    rect = BoundingBox(-27.468, -27.462, 153.021, 153.027)
    cases = [(0.1, -27.47), (0.05, -37.81)]  # (shift, base latitude)
    for dlat, base_lat in cases:
        offset = base_lat - (-27.47)
        moved_ring = [(lat + offset, lon) for lat, lon in poly_ring]
        moved_rect = BoundingBox(
            rect.lat_min + offset, rect.lat_max + offset, rect.lon_min, rect.lon_max
        )
        area0 = intersection_area_m2(moved_rect, [ZonePolygon(outer=canonical_ring(moved_ring))])
        shifted_ring = [(lat + offset + dlat, lon + 0.05) for lat, lon in poly_ring]
        shifted_rect = BoundingBox(
            rect.lat_min + offset + dlat,
            rect.lat_max + offset + dlat,
            rect.lon_min + 0.05,
            rect.lon_max + 0.05,
        )
        area1 = intersection_area_m2(
            shifted_rect, [ZonePolygon(outer=canonical_ring(shifted_ring))]
        )
        assert abs(area1 - area0) / area0 < 0.001


# --- zone files ----------------------------------------------------------------


def feature(landuse, ring_lonlat, fid="z1"):
    return {
        "type": "Feature",
        "properties": {"landuse": landuse, "id": fid},
        "geometry": {"type": "Polygon", "coordinates": [ring_lonlat]},
    }


def lonlat_square(lat0, lon0, size):
    return [
        [lon0, lat0],
        [lon0 + size, lat0],
        [lon0 + size, lat0 + size],
        [lon0, lat0 + size],
        [lon0, lat0],
    ]


def test_load_zones_geojson(tmp_path):
    fc = {
        "type": "FeatureCollection",
        "features": [
            feature("Business", lonlat_square(-27.47, 153.02, 0.01), "b1"),
            feature("residential", lonlat_square(-27.45, 153.02, 0.01), "r1"),
        ],
    }
    path = tmp_path / "zones.json"
    path.write_text(json.dumps(fc))
    zones = load_zones(path)
    assert [z.label for z in zones] == [LandUseLabel.BUSINESS, LandUseLabel.RESIDENTIAL]
    assert zones[0].source_id == "b1"
    # GeoJSON [lon, lat] swapped into [lat, lon]
    assert zones[0].polygons[0].outer[0].tolist() == [-27.47, 153.02]


def test_load_zones_with_label_map(tmp_path):
    fc = {
        "type": "FeatureCollection",
        "features": [feature("commercial", lonlat_square(-27.47, 153.02, 0.01))],
    }
    zone_path = tmp_path / "zones.json"
    zone_path.write_text(json.dumps(fc))
    map_path = tmp_path / "labels.json"
    map_path.write_text(json.dumps({"commercial": "Business"}))
    zones = load_zones(zone_path, load_label_map(map_path))
    assert zones[0].label is LandUseLabel.BUSINESS


def test_load_zones_rejects_unknown_label(tmp_path):
    from landsig.errors import OutOfRangeError

    fc = {
        "type": "FeatureCollection",
        "features": [feature("industrial", lonlat_square(0, 0, 0.01))],
    }
    path = tmp_path / "zones.json"
    path.write_text(json.dumps(fc))
    with pytest.raises(OutOfRangeError):
        load_zones(path)


def test_load_zones_rejects_same_label_overlap(tmp_path):
    fc = {
        "type": "FeatureCollection",
        "features": [
            feature("Business", lonlat_square(-27.47, 153.02, 0.01), "a"),
            feature("Business", lonlat_square(-27.465, 153.025, 0.01), "b"),
        ],
    }
    path = tmp_path / "zones.json"
    path.write_text(json.dumps(fc))
    with pytest.raises(ZoneGeometryError):
        load_zones(path)


def test_load_zones_allows_cross_label_overlap_and_shared_edges(tmp_path):
    # dyadic coordinates so the shared edge is exactly representable
    size = 0.015625
    fc = {
        "type": "FeatureCollection",
        "features": [
            feature("Business", lonlat_square(-27.5, 153.0, size), "a"),
            feature("Residential", lonlat_square(-27.4921875, 153.0078125, size), "b"),
            # same label, sharing an edge only
            feature("Business", lonlat_square(-27.5, 153.0 + size, size), "c"),
        ],
    }
    path = tmp_path / "zones.json"
    path.write_text(json.dumps(fc))
    assert len(load_zones(path)) == 3


def test_load_zones_rejects_missing_landuse(tmp_path):
    fc = {
        "type": "FeatureCollection",
        "features": [
            {
                "type": "Feature",
                "properties": {},
                "geometry": {"type": "Polygon", "coordinates": [lonlat_square(0, 0, 0.01)]},
            }
        ],
    }
    path = tmp_path / "zones.json"
    path.write_text(json.dumps(fc))
    with pytest.raises(ZoneGeometryError):
        load_zones(path)


def test_load_zones_rejects_self_intersection(tmp_path):
    bowtie = [[0.0, 0.0], [0.01, 0.01], [0.01, 0.0], [0.0, 0.01], [0.0, 0.0]]
    fc = {"type": "FeatureCollection", "features": [feature("Business", bowtie)]}
    path = tmp_path / "zones.json"
    path.write_text(json.dumps(fc))
    with pytest.raises(ZoneGeometryError):
        load_zones(path)


def test_zone_round_trip_through_feature_collection(tmp_path):
    fc = {
        "type": "FeatureCollection",
        "features": [
            feature("Business", lonlat_square(-27.47, 153.02, 0.01), "b1"),
            {
                "type": "Feature",
                "properties": {"landuse": "Recreation", "id": "m1"},
                "geometry": {
                    "type": "MultiPolygon",
                    "coordinates": [
                        [lonlat_square(-27.44, 153.0, 0.008)],
                        [lonlat_square(-27.43, 153.0, 0.005)],
                    ],
                },
            },
        ],
    }
    path = tmp_path / "zones.json"
    path.write_text(json.dumps(fc))
    zones = load_zones(path)
    rebuilt = zones_to_feature_collection(zones)
    path2 = tmp_path / "zones2.json"
    path2.write_text(json.dumps(rebuilt))
    again = load_zones(path2)
    assert len(again) == len(zones)
    for a, b in zip(zones, again):
        assert a.label is b.label
        assert a.source_id == b.source_id
        for pa, pb in zip(a.polygons, b.polygons):
            assert np.array_equal(pa.outer, pb.outer)


def test_load_label_map_missing_file(tmp_path):
    with pytest.raises(StoreIoError):
        load_label_map(tmp_path / "nope.json")


# --- overlap report -------------------------------------------------------------


def zone_square(label, lat0, lon0, size, source_id="z"):
    return Zone(
        label=label,
        polygons=(ZonePolygon(outer=canonical_ring(square_ring(lat0, lon0, size))),),
        source_id=source_id,
    )


def test_contained_cluster_quarter_zone():
    # cluster rectangle sits inside a zone of 4x its area
    zone = zone_square(LandUseLabel.BUSINESS, -27.48, 153.01, 0.02)
    rect = BoundingBox(-27.475, -27.465, 153.0125, 153.0225)
    report = overlap_report(rect, LandUseLabel.BUSINESS, [zone])
    row = report.rows[0]
    assert row.pct_of_cluster == pytest.approx(100.0, abs=0.1)
    assert row.pct_of_zone == pytest.approx(25.0, abs=0.1)
    assert row.iou == pytest.approx(25.0, abs=0.1)
    assert report.headline_pct == pytest.approx(25.0, abs=0.1)


def test_disjoint_cluster_scores_zero():
    zone = zone_square(LandUseLabel.EDUCATION, -27.48, 153.01, 0.01)
    rect = BoundingBox(-27.2, -27.19, 153.01, 153.02)
    report = overlap_report(rect, LandUseLabel.EDUCATION, [zone])
    assert report.rows[0].pct_of_cluster == 0.0
    assert report.rows[0].pct_of_zone == 0.0
    assert report.rows[0].iou == 0.0
    assert report.headline_pct == 0.0


def test_exact_match_scores_100_everywhere():
    zone = zone_square(LandUseLabel.RECREATION, -27.48, 153.01, 0.012)
    rect = BoundingBox(-27.48, -27.468, 153.01, 153.022)
    report = overlap_report(rect, LandUseLabel.RECREATION, [zone])
    row = report.rows[0]
    assert row.pct_of_cluster == pytest.approx(100.0, abs=0.1)
    assert row.pct_of_zone == pytest.approx(100.0, abs=0.1)
    assert row.iou == pytest.approx(100.0, abs=0.1)


def test_missing_label_raises():
    zone = zone_square(LandUseLabel.BUSINESS, -27.48, 153.01, 0.01)
    with pytest.raises(NoZonesForLabelError):
        overlap_report(BoundingBox(-27.48, -27.47, 153.01, 153.02), LandUseLabel.EDUCATION, [zone])


def test_report_covers_only_predicted_label_zones():
    zones = [
        zone_square(LandUseLabel.BUSINESS, -27.48, 153.01, 0.01, "b1"),
        zone_square(LandUseLabel.RESIDENTIAL, -27.46, 153.01, 0.01, "r1"),
        zone_square(LandUseLabel.BUSINESS, -27.48, 153.03, 0.01, "b2"),
    ]
    rect = BoundingBox(-27.48, -27.47, 153.012, 153.035)
    report = overlap_report(rect, LandUseLabel.BUSINESS, zones)
    assert [row.source_id for row in report.rows] == ["b1", "b2"]
    assert report.intersection_area_m2 == pytest.approx(
        sum(row.intersection_area_m2 for row in report.rows)
    )


def test_iou_never_exceeds_either_percentage():
    rng = np.random.default_rng(31)
    for _ in range(50):
        clat = rng.uniform(-38.0, -27.0)
        clon = rng.uniform(144.0, 154.0)
        zone = zone_square(
            LandUseLabel.BUSINESS, clat, clon, float(rng.uniform(0.004, 0.02)), "z"
        )
        rect = BoundingBox(
            clat - rng.uniform(0.0, 0.01),
            clat + rng.uniform(0.002, 0.02),
            clon - rng.uniform(0.0, 0.01),
            clon + rng.uniform(0.002, 0.02),
        )
        row = overlap_report(rect, LandUseLabel.BUSINESS, [zone]).rows[0]
        assert row.iou <= min(row.pct_of_cluster, row.pct_of_zone) + 1e-9
        assert 0.0 <= row.pct_of_cluster <= 100.0
        assert 0.0 <= row.pct_of_zone <= 100.0


def test_headline_definitions():
    zone = zone_square(LandUseLabel.BUSINESS, -27.48, 153.01, 0.02)
    rect = BoundingBox(-27.475, -27.465, 153.0125, 153.0225)
    by_def = {
        d: overlap_report(rect, LandUseLabel.BUSINESS, [zone], headline_definition=d).headline_pct
        for d in ("pct_of_zone", "pct_of_cluster", "iou")
    }
    assert by_def["pct_of_cluster"] == pytest.approx(100.0, abs=0.1)
    assert by_def["pct_of_zone"] == pytest.approx(25.0, abs=0.1)
    assert by_def["iou"] == pytest.approx(25.0, abs=0.1)
    with pytest.raises(ValueError):
        overlap_report(rect, LandUseLabel.BUSINESS, [zone], headline_definition="nope")
