"""Uniform-grid spatial index over an event store.

Queries are axis-aligned rectangles only, so a flat grid beats a tree: each
event lands in exactly one cell via ``(floor(lat/cell), floor(lon/cell))``
and a box query touches a contiguous block of cells. Cell contents are
indices into the store's columnar arrays; event payloads are never copied.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import EmptyDatasetError, StoreIoError
from .ingest import EventStore, local_hours
from .model import BoundingBox, HourlyCounts, validate_bbox

DEFAULT_CELL_SIZE_DEG = 0.005  # ~500 m north-south


@dataclass(frozen=True)
class SpatialIndex:
    """Immutable grid over one store; safe for concurrent queries."""

    store: EventStore
    cell_size_deg: float
    cells: dict[tuple[int, int], np.ndarray] = field(repr=False)
    bounds: BoundingBox

    @property
    def indexed_count(self) -> int:
        return sum(len(idx) for idx in self.cells.values())


def cell_of(lat: float, lon: float, cell_size_deg: float) -> tuple[int, int]:
    return (int(np.floor(lat / cell_size_deg)), int(np.floor(lon / cell_size_deg)))


def build_index(store: EventStore, cell_size_deg: float = DEFAULT_CELL_SIZE_DEG) -> SpatialIndex:
    """Group every event of ``store`` into its grid cell."""
    if cell_size_deg <= 0:
        raise ValueError("cell_size_deg must be positive")
    if store.record_count == 0:
        raise EmptyDatasetError("cannot index an empty store")

    rows = np.floor(store.lat / cell_size_deg).astype(np.int64)
    cols = np.floor(store.lon / cell_size_deg).astype(np.int64)
    order = np.lexsort((cols, rows))
    sorted_rows = rows[order]
    sorted_cols = cols[order]
    boundaries = np.flatnonzero(
        (sorted_rows[1:] != sorted_rows[:-1]) | (sorted_cols[1:] != sorted_cols[:-1])
    ) + 1
    starts = np.concatenate(([0], boundaries))
    ends = np.concatenate((boundaries, [len(order)]))

    cells: dict[tuple[int, int], np.ndarray] = {}
    for start, end in zip(starts, ends):
        members = np.sort(order[start:end])
        members.flags.writeable = False
        cells[(int(sorted_rows[start]), int(sorted_cols[start]))] = members

    bounds = BoundingBox(
        lat_min=float(store.lat.min()),
        lat_max=float(store.lat.max()),
        lon_min=float(store.lon.min()),
        lon_max=float(store.lon.max()),
    )
    return SpatialIndex(store=store, cell_size_deg=cell_size_deg, cells=cells, bounds=bounds)


def query_bbox(index: SpatialIndex, b: BoundingBox) -> np.ndarray:
    """Indices of events with lat in [lat_min, lat_max) and lon in [lon_min, lon_max).

    Result is sorted ascending; an empty result is valid.
    """
    validate_bbox(b)
    cell = index.cell_size_deg
    store = index.store

    # Clamp the scanned cell block to the data envelope so a world-sized box
    # does not enumerate millions of empty cells.
    row_lo = int(np.floor(max(b.lat_min, index.bounds.lat_min) / cell))
    row_hi = int(np.floor(min(b.lat_max, index.bounds.lat_max) / cell))
    col_lo = int(np.floor(max(b.lon_min, index.bounds.lon_min) / cell))
    col_hi = int(np.floor(min(b.lon_max, index.bounds.lon_max) / cell))
    if row_hi < row_lo or col_hi < col_lo:
        return np.empty(0, dtype=np.int64)

    block = (row_hi - row_lo + 1) * (col_hi - col_lo + 1)
    if block <= len(index.cells):
        parts = []
        for r in range(row_lo, row_hi + 1):
            for c in range(col_lo, col_hi + 1):
                members = index.cells.get((r, c))
                if members is not None:
                    parts.append(members)
    else:
        # Huge boxes: walking the occupied cells is cheaper than the block.
        parts = [
            members
            for (r, c), members in index.cells.items()
            if row_lo <= r <= row_hi and col_lo <= c <= col_hi
        ]
    if not parts:
        return np.empty(0, dtype=np.int64)

    candidates = np.concatenate(parts)
    lat = store.lat[candidates]
    lon = store.lon[candidates]
    mask = (
        (lat >= b.lat_min)
        & (lat < b.lat_max)
        & (lon >= b.lon_min)
        & (lon < b.lon_max)
    )
    return np.sort(candidates[mask])


def hourly_histogram(index: SpatialIndex, b: BoundingBox, tz_offset_minutes: int) -> HourlyCounts:
    """Per-local-hour event counts inside ``b``; sums to the query count."""
    selected = query_bbox(index, b)
    if len(selected) == 0:
        return HourlyCounts.zeros()
    hours = local_hours(index.store.ts[selected], tz_offset_minutes)
    return HourlyCounts(np.bincount(hours, minlength=24))


def save_index_cache(index: SpatialIndex, path: str | Path) -> None:
    """Persist the grid keyed by (store hash, cell size) for fast reloads."""
    path = Path(path)
    keys = np.array(sorted(index.cells), dtype=np.int64).reshape(-1, 2)
    lengths = np.array([len(index.cells[tuple(k)]) for k in keys], dtype=np.int64)
    flat = (
        np.concatenate([index.cells[tuple(k)] for k in keys])
        if len(keys)
        else np.empty(0, dtype=np.int64)
    )
    meta = {
        "store_hash": index.store.content_hash(),
        "cell_size_deg": index.cell_size_deg,
        "bounds": index.bounds.as_dict(),
    }
    try:
        with open(path, "wb") as fh:
            np.savez(
                fh,
                keys=keys,
                lengths=lengths,
                members=flat,
                meta=np.array([json.dumps(meta, sort_keys=True)]),
            )
    except OSError as exc:
        raise StoreIoError(f"cannot write index cache {path}: {exc}") from exc


def load_index_cache(path: str | Path, store: EventStore, cell_size_deg: float) -> SpatialIndex:
    """Reload a cached grid; rejects caches built for other data or cell sizes."""
    path = Path(path)
    try:
        with np.load(path) as data:
            meta = json.loads(str(data["meta"][0]))
            if meta["store_hash"] != store.content_hash():
                raise StoreIoError(f"index cache {path} was built for a different store")
            if meta["cell_size_deg"] != cell_size_deg:
                raise StoreIoError(f"index cache {path} uses cell size {meta['cell_size_deg']}")
            keys = data["keys"]
            lengths = data["lengths"]
            members = data["members"]
    except OSError as exc:
        raise StoreIoError(f"cannot read index cache {path}: {exc}") from exc

    cells: dict[tuple[int, int], np.ndarray] = {}
    offset = 0
    for (row, col), length in zip(keys, lengths):
        chunk = members[offset : offset + int(length)]
        chunk.flags.writeable = False
        cells[(int(row), int(col))] = chunk
        offset += int(length)
    bounds = BoundingBox(**meta["bounds"])
    return SpatialIndex(store=store, cell_size_deg=cell_size_deg, cells=cells, bounds=bounds)
