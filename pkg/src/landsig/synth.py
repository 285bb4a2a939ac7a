"""Synthetic city generator: ground-truth zones plus event streams.

Each zone draws a Poisson number of daily events, assigns them hours from a
fixed 24-bin categorical distribution, and scatters positions uniformly
inside the zone polygon by rejection sampling in its bounding box. Output is
deterministic for a given seed, with per-zone derived RNG streams so zones
can be generated independently.

Default profiles follow the qualitative peak structure of the four land-use
classes: business peaking at 13 with a secondary peak at 17, residential
rising through the evening to 22, education peaking at 10 and again at 12
before a gradual decline, and recreation spiking at 19 with a sharp
drop-off. Every default-profile hour keeps at least 0.2% of the weight so
completeness is reachable; the separate daytime-only profile has true
overnight zeros for exercising the discard path.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidProfileError, StoreIoError
from .ingest import CSV_HEADER
from .model import GeoEvent, HourlyCounts, LandUseLabel, Zone, ZonePolygon
from .overlap import canonical_ring, points_in_polygon, zones_to_feature_collection

DEFAULT_TZ_OFFSET_MINUTES = 600  # UTC+10, east-coast Australia
DEFAULT_DAILY_RATE = 200.0
_EPOCH_DAY0 = 1420070400  # 2015-01-01T00:00:00Z, a whole number of days

# Relative hourly intensity per land-use class, hours 0..23. Normalized to
# weights at profile construction.
_BUSINESS_SHAPE = [
    0.30, 0.25, 0.22, 0.20, 0.22, 0.35, 0.80, 1.50, 2.50, 3.20, 3.60, 4.00,
    4.60, 5.20, 4.40, 4.20, 4.50, 5.00, 3.40, 2.60, 2.00, 1.60, 1.20, 0.70,
]
_RESIDENTIAL_SHAPE = [
    1.20, 0.80, 0.50, 0.35, 0.30, 0.40, 0.80, 1.40, 1.70, 1.50, 1.40, 1.45,
    1.50, 1.55, 1.60, 1.75, 2.00, 2.40, 2.90, 3.30, 3.70, 4.10, 4.50, 2.80,
]
_EDUCATION_SHAPE = [
    0.25, 0.20, 0.16, 0.14, 0.14, 0.20, 0.60, 1.60, 3.00, 4.10, 4.80, 4.00,
    4.50, 3.90, 3.50, 3.10, 2.60, 2.10, 1.60, 1.20, 0.90, 0.65, 0.50, 0.35,
]
_RECREATION_SHAPE = [
    0.50, 0.40, 0.30, 0.25, 0.25, 0.30, 0.50, 0.80, 1.10, 1.40, 1.70, 2.00,
    2.30, 2.40, 2.50, 2.70, 3.00, 3.50, 4.30, 5.60, 2.60, 1.70, 1.20, 0.80,
]
_DAYTIME_ONLY_SHAPE = [
    0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 2.0, 3.0, 3.5, 3.5, 3.5,
    3.5, 3.5, 3.5, 3.0, 2.5, 2.0, 1.5, 1.0, 0.5, 0.0, 0.0, 0.0,
]


@dataclass(frozen=True)
class ZoneProfile:
    """Ground-truth generator parameters for one zone."""

    label: LandUseLabel
    polygon: ZonePolygon
    daily_rate: float
    hourly_weights: np.ndarray

    def __post_init__(self):
        if self.daily_rate <= 0:
            raise InvalidProfileError("daily_rate must be positive")
        weights = np.asarray(self.hourly_weights, dtype=np.float64)
        if weights.shape != (24,) or (weights < 0).any():
            raise InvalidProfileError("hourly_weights must be 24 non-negative reals")
        if abs(float(weights.sum()) - 1.0) > 1e-9:
            raise InvalidProfileError("hourly_weights must sum to 1")
        weights = weights.copy()
        weights.flags.writeable = False
        object.__setattr__(self, "hourly_weights", weights)

    def mean_one_signature(self) -> np.ndarray:
        """Analytic normalized curve this profile converges to: 24 * weights."""
        return 24.0 * self.hourly_weights

    def as_zone(self, source_id: str) -> Zone:
        return Zone(label=self.label, polygons=(self.polygon,), source_id=source_id)


def _weights(shape: list[float]) -> np.ndarray:
    arr = np.asarray(shape, dtype=np.float64)
    return arr / arr.sum()


def rect_polygon(lat_min: float, lat_max: float, lon_min: float, lon_max: float) -> ZonePolygon:
    ring = canonical_ring(
        [(lat_min, lon_min), (lat_min, lon_max), (lat_max, lon_max), (lat_max, lon_min)]
    )
    return ZonePolygon(outer=ring)


def default_profiles(
    center_lat: float = -27.47,
    center_lon: float = 153.02,
    zone_size_deg: float = 0.012,
    spacing_deg: float = 0.03,
    daily_rate: float = DEFAULT_DAILY_RATE,
) -> tuple[ZoneProfile, ZoneProfile, ZoneProfile, ZoneProfile]:
    """Four separable zones laid out on a 2x2 grid around the given center."""
    half = zone_size_deg / 2.0
    offsets = {
        LandUseLabel.BUSINESS: (0.0, 0.0),
        LandUseLabel.RESIDENTIAL: (0.0, spacing_deg),
        LandUseLabel.EDUCATION: (spacing_deg, 0.0),
        LandUseLabel.RECREATION: (spacing_deg, spacing_deg),
    }
    shapes = {
        LandUseLabel.BUSINESS: _BUSINESS_SHAPE,
        LandUseLabel.RESIDENTIAL: _RESIDENTIAL_SHAPE,
        LandUseLabel.EDUCATION: _EDUCATION_SHAPE,
        LandUseLabel.RECREATION: _RECREATION_SHAPE,
    }
    profiles = []
    for label, (dlat, dlon) in offsets.items():
        lat_c = center_lat + dlat
        lon_c = center_lon + dlon
        profiles.append(
            ZoneProfile(
                label=label,
                polygon=rect_polygon(lat_c - half, lat_c + half, lon_c - half, lon_c + half),
                daily_rate=daily_rate,
                hourly_weights=_weights(shapes[label]),
            )
        )
    return tuple(profiles)


def daytime_only_profile(
    center_lat: float = -27.47,
    center_lon: float = 153.02,
    zone_size_deg: float = 0.012,
    daily_rate: float = DEFAULT_DAILY_RATE,
) -> ZoneProfile:
    """Fixture zone with true overnight zeros; can never complete."""
    half = zone_size_deg / 2.0
    return ZoneProfile(
        label=LandUseLabel.BUSINESS,
        polygon=rect_polygon(
            center_lat - half, center_lat + half, center_lon - half, center_lon + half
        ),
        daily_rate=daily_rate,
        hourly_weights=_weights(_DAYTIME_ONLY_SHAPE),
    )


def _sample_positions(rng: np.random.Generator, polygon: ZonePolygon, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Uniform points inside the polygon via rejection sampling in its bbox."""
    lat_min = float(polygon.outer[:, 0].min())
    lat_max = float(polygon.outer[:, 0].max())
    lon_min = float(polygon.outer[:, 1].min())
    lon_max = float(polygon.outer[:, 1].max())
    lats = np.empty(n)
    lons = np.empty(n)
    filled = 0
    while filled < n:
        batch = max(64, 2 * (n - filled))
        cand_lat = rng.uniform(lat_min, lat_max, batch)
        cand_lon = rng.uniform(lon_min, lon_max, batch)
        good = points_in_polygon(cand_lat, cand_lon, polygon)
        take = min(int(good.sum()), n - filled)
        lats[filled : filled + take] = cand_lat[good][:take]
        lons[filled : filled + take] = cand_lon[good][:take]
        filled += take
    return lats, lons


def generate_city(
    profiles: list[ZoneProfile] | tuple[ZoneProfile, ...],
    days: int,
    seed: int,
    tz_offset_minutes: int = DEFAULT_TZ_OFFSET_MINUTES,
    users_per_zone: int = 50,
) -> tuple[list[GeoEvent], list[HourlyCounts]]:
    """Draw the full event stream plus per-zone ground-truth hourly counts.

    Timestamps are placed so that the local wall-clock hour under
    ``tz_offset_minutes`` equals the drawn hour. Identical inputs produce
    identical output lists.
    """
    if days < 1:
        raise InvalidProfileError("days must be >= 1")
    if not profiles:
        raise InvalidProfileError("at least one zone profile is required")

    events: list[GeoEvent] = []
    truth: list[HourlyCounts] = []
    for zone_index, profile in enumerate(profiles):
        rng = np.random.default_rng([seed, zone_index])
        daily = rng.poisson(profile.daily_rate, size=days)
        total = int(daily.sum())
        hours = rng.choice(24, size=total, p=profile.hourly_weights)
        seconds = rng.integers(0, 3600, size=total)
        day_of = np.repeat(np.arange(days), daily)
        lats, lons = _sample_positions(rng, profile.polygon, total)
        user_pool = [f"z{zone_index}-u{k:03d}" for k in range(users_per_zone)]
        user_pick = rng.integers(0, users_per_zone, size=total)

        ts = (
            _EPOCH_DAY0
            + day_of * 86400
            + hours * 3600
            + seconds
            - tz_offset_minutes * 60
        )
        for i in range(total):
            events.append(
                GeoEvent(
                    lat=float(lats[i]),
                    lon=float(lons[i]),
                    timestamp_utc=int(ts[i]),
                    user_id=user_pool[int(user_pick[i])],
                )
            )
        truth.append(HourlyCounts(np.bincount(hours, minlength=24)))
    return events, truth


def write_events_csv(events: list[GeoEvent], path: str | Path) -> None:
    """Emit the ingest module's CSV shape (header ``lat,lon,ts,user``)."""
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER.split(","))
            for ev in events:
                writer.writerow([repr(ev.lat), repr(ev.lon), ev.timestamp_utc, ev.user_id])
    except OSError as exc:
        raise StoreIoError(f"cannot write events {path}: {exc}") from exc


def write_city(
    out_dir: str | Path,
    profiles: list[ZoneProfile] | tuple[ZoneProfile, ...],
    events: list[GeoEvent],
    truth: list[HourlyCounts],
    seed: int,
    days: int,
    tz_offset_minutes: int,
) -> dict[str, Path]:
    """Write events.csv, zones.json, and truth.json for one generated city."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "events": out_dir / "events.csv",
        "zones": out_dir / "zones.json",
        "truth": out_dir / "truth.json",
    }
    write_events_csv(events, paths["events"])
    zones = [p.as_zone(f"zone-{i}-{p.label.value.lower()}") for i, p in enumerate(profiles)]
    try:
        paths["zones"].write_text(
            json.dumps(zones_to_feature_collection(zones), indent=2, sort_keys=True) + "\n"
        )
        paths["truth"].write_text(
            json.dumps(
                {
                    "seed": seed,
                    "days": days,
                    "tz_offset_minutes": tz_offset_minutes,
                    "zones": [
                        {
                            "source_id": zones[i].source_id,
                            "label": profiles[i].label.value,
                            "hourly_counts": truth[i].tolist(),
                        }
                        for i in range(len(profiles))
                    ],
                },
                indent=2,
                sort_keys=True,
            )
            + "\n"
        )
    except OSError as exc:
        raise StoreIoError(f"cannot write city files under {out_dir}: {exc}") from exc
    return paths
