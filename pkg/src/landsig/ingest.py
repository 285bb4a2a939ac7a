"""Archived event-file ingestion and the columnar event store.

Two input shapes are supported:

* ``tweet-json-ndjson`` — one archived tweet object per line. The point
  geolocation sits under ``coordinates.coordinates`` as ``[longitude,
  latitude]`` (GeoJSON axis order) and is swapped into lat/lon here. Records
  without a point geolocation are skipped, not errors.
* ``csv`` — header ``lat,lon,ts,user`` with ``ts`` in epoch seconds.

The store keeps four columns (lat f64, lon f64, ts i64, dictionary-encoded
user id) in a ``.npz`` container plus a JSON manifest sidecar at
``<store>.manifest.json``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Iterator

import numpy as np

from .errors import (
    EmptyDatasetError,
    MalformedRecordError,
    OutOfRangeError,
    StoreIoError,
)
from .model import DatasetManifest, GeoEvent

CSV_HEADER = "lat,lon,ts,user"
SECONDS_PER_DAY = 86400
_TWEET_TIME_FORMAT = "%a %b %d %H:%M:%S %z %Y"


def local_hour(timestamp_utc: int, tz_offset_minutes: int) -> int:
    """Hour of the local wall clock under a fixed UTC offset."""
    return int(((timestamp_utc + tz_offset_minutes * 60) % SECONDS_PER_DAY) // 3600)


def local_hours(timestamps_utc: np.ndarray, tz_offset_minutes: int) -> np.ndarray:
    """Vectorized :func:`local_hour` over an int64 timestamp array."""
    shifted = np.asarray(timestamps_utc, dtype=np.int64) + tz_offset_minutes * 60
    return (shifted % SECONDS_PER_DAY) // 3600


def _parse_tweet_json(line: str) -> GeoEvent | None:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedRecordError(f"invalid JSON record: {exc}") from exc
    if not isinstance(record, dict):
        raise MalformedRecordError("JSON record is not an object")

    geo = record.get("coordinates")
    if not geo:
        return None  # no point geolocation
    try:
        lon, lat = geo["coordinates"][0], geo["coordinates"][1]
        lon = float(lon)
        lat = float(lat)
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise MalformedRecordError(f"unreadable coordinate pair: {exc}") from exc

    if "timestamp_ms" in record:
        try:
            ts = int(record["timestamp_ms"]) // 1000
        except (TypeError, ValueError) as exc:
            raise MalformedRecordError(f"bad timestamp_ms: {exc}") from exc
    elif "created_at" in record:
        try:
            ts = int(datetime.strptime(record["created_at"], _TWEET_TIME_FORMAT).timestamp())
        except (TypeError, ValueError) as exc:
            raise MalformedRecordError(f"bad created_at: {exc}") from exc
    else:
        raise MalformedRecordError("record has no timestamp field")

    user = record.get("user")
    if isinstance(user, dict):
        user_id = user.get("id_str") or user.get("id")
    else:
        user_id = record.get("user_id")
    if user_id is None:
        raise MalformedRecordError("record has no user id")

    return GeoEvent(lat=lat, lon=lon, timestamp_utc=ts, user_id=str(user_id))


def _parse_csv_row(line: str) -> GeoEvent | None:
    if line.strip() == CSV_HEADER:
        return None  # header row, not data
    parts = line.rstrip("\n").split(",")
    if len(parts) != 4:
        raise MalformedRecordError(f"expected 4 CSV fields, got {len(parts)}")
    try:
        lat = float(parts[0])
        lon = float(parts[1])
        ts = int(parts[2])
    except ValueError as exc:
        raise MalformedRecordError(f"unparseable CSV row: {exc}") from exc
    return GeoEvent(lat=lat, lon=lon, timestamp_utc=ts, user_id=parts[3])


def parse_event_record(line: str, source_format: str) -> GeoEvent | None:
    """Parse one record; ``None`` means skip (no geotag / header row).

    Raises :class:`MalformedRecordError` for unparseable records and
    :class:`OutOfRangeError` for out-of-bounds coordinates or timestamps.
    """
    if source_format == "tweet-json-ndjson":
        return _parse_tweet_json(line)
    if source_format == "csv":
        return _parse_csv_row(line)
    raise MalformedRecordError(f"unknown source format {source_format!r}")


@dataclass(frozen=True)
class EventStore:
    """Immutable columnar view over the accepted events of one dataset."""

    lat: np.ndarray
    lon: np.ndarray
    ts: np.ndarray
    user_codes: np.ndarray
    users: tuple[str, ...]

    def __post_init__(self):
        for name, arr in (("lat", self.lat), ("lon", self.lon), ("ts", self.ts), ("user_codes", self.user_codes)):
            a = np.asarray(arr)
            a.flags.writeable = False
            object.__setattr__(self, name, a)

    @property
    def record_count(self) -> int:
        return int(self.lat.shape[0])

    def event(self, i: int) -> GeoEvent:
        return GeoEvent(
            lat=float(self.lat[i]),
            lon=float(self.lon[i]),
            timestamp_utc=int(self.ts[i]),
            user_id=self.users[int(self.user_codes[i])],
        )

    def events(self) -> Iterator[GeoEvent]:
        for i in range(self.record_count):
            yield self.event(i)

    def content_hash(self) -> str:
        """Stable digest of the stored columns, used to key index caches."""
        digest = hashlib.sha256()
        for arr in (self.lat, self.lon, self.ts, self.user_codes):
            digest.update(np.ascontiguousarray(arr).tobytes())
        digest.update("\x00".join(self.users).encode("utf-8"))
        return digest.hexdigest()


def _manifest_path(store_path: Path) -> Path:
    return store_path.with_name(store_path.name + ".manifest.json")


def save_store(store: EventStore, manifest: DatasetManifest, path: str | Path) -> None:
    """Write the columnar store and its manifest sidecar."""
    path = Path(path)
    try:
        with open(path, "wb") as fh:
            np.savez(
                fh,
                lat=store.lat,
                lon=store.lon,
                ts=store.ts,
                user_codes=store.user_codes,
                users=np.array(store.users, dtype=np.str_),
            )
        _manifest_path(path).write_text(
            json.dumps(manifest.as_dict(), indent=2, sort_keys=True) + "\n"
        )
    except OSError as exc:
        raise StoreIoError(f"cannot write store {path}: {exc}") from exc


def load_store(path: str | Path) -> tuple[EventStore, DatasetManifest]:
    """Read a store written by :func:`save_store`."""
    path = Path(path)
    try:
        with np.load(path) as data:
            store = EventStore(
                lat=data["lat"],
                lon=data["lon"],
                ts=data["ts"],
                user_codes=data["user_codes"],
                users=tuple(str(u) for u in data["users"]),
            )
        manifest = DatasetManifest.from_dict(json.loads(_manifest_path(path).read_text()))
    except OSError as exc:
        raise StoreIoError(f"cannot read store {path}: {exc}") from exc
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        raise StoreIoError(f"store {path} is corrupt: {exc}") from exc
    return store, manifest


def store_from_events(events: list[GeoEvent]) -> EventStore:
    """Pack parsed events into columns, dictionary-encoding user ids."""
    codes = {}
    user_codes = np.empty(len(events), dtype=np.uint32)
    for i, ev in enumerate(events):
        code = codes.get(ev.user_id)
        if code is None:
            code = len(codes)
            codes[ev.user_id] = code
        user_codes[i] = code
    return EventStore(
        lat=np.array([ev.lat for ev in events], dtype=np.float64),
        lon=np.array([ev.lon for ev in events], dtype=np.float64),
        ts=np.array([ev.timestamp_utc for ev in events], dtype=np.int64),
        user_codes=user_codes,
        users=tuple(codes),
    )


def load_dataset(
    path: str | Path,
    source_format: str,
    tz_offset_minutes: int,
    name: str | None = None,
) -> tuple[EventStore, DatasetManifest]:
    """Parse an archived event file into an in-memory store plus manifest.

    Every line is exactly one of accepted / skipped / malformed, and the
    manifest keeps all three tallies. Raises :class:`EmptyDatasetError` when
    no line yields an accepted event.
    """
    path = Path(path)
    if name is None:
        name = path.stem
    events: list[GeoEvent] = []
    skipped = 0
    malformed = 0
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip() == "":
                    skipped += 1
                    continue
                try:
                    event = parse_event_record(line, source_format)
                except (MalformedRecordError, OutOfRangeError):
                    malformed += 1
                    continue
                if event is None:
                    skipped += 1
                else:
                    events.append(event)
    except OSError as exc:
        raise StoreIoError(f"cannot read {path}: {exc}") from exc

    if not events:
        raise EmptyDatasetError(f"no geo-located records accepted from {path}")

    store = store_from_events(events)
    manifest = DatasetManifest(
        name=name,
        tz_offset_minutes=tz_offset_minutes,
        record_count=store.record_count,
        unique_users=len(store.users),
        time_span=(int(store.ts.min()), int(store.ts.max())),
        source_format=source_format,
        skipped=skipped,
        malformed=malformed,
    )
    return store, manifest
