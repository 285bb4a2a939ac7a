"""Core domain types: events, boxes, hourly counts, signatures, labels, zones.

All types are immutable after construction (array fields are made read-only),
so values can be shared freely between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateBoxError, OutOfRangeError

HOURS = 24


class LandUseLabel(str, Enum):
    """The four land-use classes covered in v1."""

    BUSINESS = "Business"
    RESIDENTIAL = "Residential"
    EDUCATION = "Education"
    RECREATION = "Recreation"

    def __str__(self) -> str:  # "Business", not "LandUseLabel.BUSINESS"
        return self.value


def parse_label(text: str) -> LandUseLabel:
    for label in LandUseLabel:
        if label.value.lower() == text.strip().lower():
            return label
    raise OutOfRangeError(f"unknown land-use label {text!r}")


@dataclass(frozen=True)
class GeoEvent:
    """One geo-tagged record: position, UTC timestamp, opaque user id."""

    lat: float
    lon: float
    timestamp_utc: int
    user_id: str

    def __post_init__(self):
        if not (math.isfinite(self.lat) and -90.0 <= self.lat <= 90.0):
            raise OutOfRangeError(f"latitude {self.lat!r} outside [-90, 90]")
        if not (math.isfinite(self.lon) and -180.0 <= self.lon <= 180.0):
            raise OutOfRangeError(f"longitude {self.lon!r} outside [-180, 180]")
        if not (math.isfinite(self.timestamp_utc) and self.timestamp_utc >= 0):
            raise OutOfRangeError(f"timestamp {self.timestamp_utc!r} must be finite and >= 0")


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned lat/lon rectangle. Containment is half-open: [min, max).

    The half-open rule makes adjacent boxes tile without double counting.
    Construction does not validate; pass through :func:`validate_bbox` first
    when the values come from the outside.
    """

    lat_min: float
    lat_max: float
    lon_min: float
    lon_max: float

    @property
    def lat_span(self) -> float:
        return self.lat_max - self.lat_min

    @property
    def lon_span(self) -> float:
        return self.lon_max - self.lon_min

    def contains(self, lat: float, lon: float) -> bool:
        return (self.lat_min <= lat < self.lat_max) and (self.lon_min <= lon < self.lon_max)

    def expand(self, delta_deg: float) -> "BoundingBox":
        """Grow every edge outward by ``delta_deg``, clamped to world bounds."""
        return BoundingBox(
            lat_min=max(-90.0, self.lat_min - delta_deg),
            lat_max=min(90.0, self.lat_max + delta_deg),
            lon_min=max(-180.0, self.lon_min - delta_deg),
            lon_max=min(180.0, self.lon_max + delta_deg),
        )

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.lat_min, self.lat_max, self.lon_min, self.lon_max)

    def as_dict(self) -> dict[str, float]:
        return {
            "lat_min": self.lat_min,
            "lat_max": self.lat_max,
            "lon_min": self.lon_min,
            "lon_max": self.lon_max,
        }


def validate_bbox(b: BoundingBox) -> None:
    """Raise unless ``b`` is a usable query rectangle.

    Out-of-range coordinates are reported before degeneracy. Boxes crossing
    the antimeridian cannot be expressed (lon_min < lon_max is required);
    they are rejected rather than split.
    """
    for name, value, bound in (
        ("lat_min", b.lat_min, 90.0),
        ("lat_max", b.lat_max, 90.0),
    ):
        if not (math.isfinite(value) and -bound <= value <= bound):
            raise OutOfRangeError(f"{name}={value!r} outside [-90, 90]")
    for name, value in (("lon_min", b.lon_min), ("lon_max", b.lon_max)):
        if not (math.isfinite(value) and -180.0 <= value <= 180.0):
            raise OutOfRangeError(f"{name}={value!r} outside [-180, 180]")
    if b.lat_min >= b.lat_max:
        raise DegenerateBoxError(f"lat_min {b.lat_min!r} must be < lat_max {b.lat_max!r}")
    if b.lon_min >= b.lon_max:
        raise DegenerateBoxError(f"lon_min {b.lon_min!r} must be < lon_max {b.lon_max!r}")


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    if arr.shape != (HOURS,):
        raise ValueError(f"expected {HOURS} hourly values, got shape {arr.shape}")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class HourlyCounts:
    """Raw event counts per local hour of day (24 non-negative integers)."""

    counts: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.counts, np.int64)
        if (arr < 0).any():
            raise ValueError("hourly counts must be non-negative")
        object.__setattr__(self, "counts", arr)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def __getitem__(self, hour: int) -> int:
        return int(self.counts[hour])

    def __eq__(self, other) -> bool:
        return isinstance(other, HourlyCounts) and np.array_equal(self.counts, other.counts)

    def tolist(self) -> list[int]:
        return [int(c) for c in self.counts]

    @classmethod
    def zeros(cls) -> "HourlyCounts":
        return cls(np.zeros(HOURS, dtype=np.int64))


@dataclass(frozen=True, eq=False)
class TemporalSignature:
    """Normalized 24-hour activity curve (non-negative reals, one per hour)."""

    values: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.values, np.float64)
        if not np.isfinite(arr).all() or (arr < 0).any():
            raise ValueError("signature values must be finite and non-negative")
        object.__setattr__(self, "values", arr)

    def __getitem__(self, hour: int) -> float:
        return float(self.values[hour])

    def __eq__(self, other) -> bool:
        return isinstance(other, TemporalSignature) and np.array_equal(self.values, other.values)

    def tolist(self) -> list[float]:
        return [float(v) for v in self.values]


@dataclass(frozen=True)
class ZonePolygon:
    """One simple polygon: an outer ring plus optional holes.

    Rings are float arrays of shape (N, 2) with columns [lat, lon], stored
    open (the closing vertex is implicit). Use :func:`landsig.overlap.canonical_ring`
    to build validated rings from raw vertex lists.
    """

    outer: np.ndarray
    holes: tuple[np.ndarray, ...] = ()

    def __post_init__(self):
        outer = np.asarray(self.outer, dtype=np.float64)
        outer.flags.writeable = False
        holes = []
        for hole in self.holes:
            h = np.asarray(hole, dtype=np.float64)
            h.flags.writeable = False
            holes.append(h)
        object.__setattr__(self, "outer", outer)
        object.__setattr__(self, "holes", tuple(holes))


@dataclass(frozen=True)
class Zone:
    """Official zoning polygon(s) carrying a land-use label."""

    label: LandUseLabel
    polygons: tuple[ZonePolygon, ...]
    source_id: str

    def bbox(self) -> BoundingBox:
        """Envelope over all outer rings."""
        lats = np.concatenate([p.outer[:, 0] for p in self.polygons])
        lons = np.concatenate([p.outer[:, 1] for p in self.polygons])
        return BoundingBox(
            lat_min=float(lats.min()),
            lat_max=float(lats.max()),
            lon_min=float(lons.min()),
            lon_max=float(lons.max()),
        )


@dataclass(frozen=True)
class DatasetManifest:
    """Counters describing one ingested event store."""

    name: str
    tz_offset_minutes: int
    record_count: int
    unique_users: int
    time_span: tuple[int, int]
    source_format: str
    skipped: int = 0
    malformed: int = 0

    def __post_init__(self):
        if self.record_count < 0:
            raise ValueError("record_count must be >= 0")
        if self.time_span[0] > self.time_span[1]:
            raise ValueError("time_span must be ordered (min_ts <= max_ts)")
        if abs(self.tz_offset_minutes) > 14 * 60:
            raise OutOfRangeError(f"tz offset {self.tz_offset_minutes} outside +-14h")
        if self.source_format not in ("tweet-json-ndjson", "csv"):
            raise ValueError(f"unknown source format {self.source_format!r}")

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "tz_offset_minutes": self.tz_offset_minutes,
            "record_count": self.record_count,
            "unique_users": self.unique_users,
            "time_span": list(self.time_span),
            "source_format": self.source_format,
            "skipped": self.skipped,
            "malformed": self.malformed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DatasetManifest":
        return cls(
            name=data["name"],
            tz_offset_minutes=int(data["tz_offset_minutes"]),
            record_count=int(data["record_count"]),
            unique_users=int(data["unique_users"]),
            time_span=(int(data["time_span"][0]), int(data["time_span"][1])),
            source_format=data["source_format"],
            skipped=int(data.get("skipped", 0)),
            malformed=int(data.get("malformed", 0)),
        )
