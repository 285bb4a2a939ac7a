"""Reference template construction and minimum-MSE label assignment.

A template is an ordered list of (label, signature) pairs extracted from the
baseline city's known zones. Unknown signatures take the label of the entry
with the smallest mean-squared error; the full error row and the runner-up
margin are kept so near-misses stay visible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import IncompleteZoneError, StoreIoError
from .grid import SpatialIndex, hourly_histogram
from .model import BoundingBox, HourlyCounts, LandUseLabel, TemporalSignature, parse_label
from .signature import is_complete, missing_hours, normalize

TEMPLATE_FORMAT_VERSION = 1
DEFAULT_NEAR_MISS_MARGIN = 0.05


def mse(x: TemporalSignature, y: TemporalSignature) -> float:
    """Mean of squared per-hour differences; 0 iff the curves are identical."""
    diff = x.values - y.values
    return float(np.mean(diff * diff))


@dataclass(frozen=True)
class ReferenceTemplate:
    """Ordered labelled signatures from the baseline city."""

    entries: tuple[tuple[LandUseLabel, TemporalSignature], ...]
    source: str = ""
    zones_used: tuple[tuple[LandUseLabel, tuple[BoundingBox, ...]], ...] = ()

    def __post_init__(self):
        if len(self.entries) < 2:
            raise ValueError("template needs at least 2 entries")
        labels = [label for label, _ in self.entries]
        if len(set(labels)) != len(labels):
            raise ValueError("template labels must be distinct")

    @property
    def labels(self) -> tuple[LandUseLabel, ...]:
        return tuple(label for label, _ in self.entries)

    def as_dict(self) -> dict:
        return {
            "format_version": TEMPLATE_FORMAT_VERSION,
            "source": self.source,
            "entries": [
                {"label": label.value, "values": sig.tolist()} for label, sig in self.entries
            ],
            "zones_used": {
                label.value: [list(b.as_tuple()) for b in boxes]
                for label, boxes in self.zones_used
            },
        }


@dataclass(frozen=True)
class ClassificationResult:
    """Argmin outcome plus the full error row and runner-up margin."""

    label: LandUseLabel
    mse_row: dict[LandUseLabel, float]
    margin: float
    near_miss: bool

    def as_dict(self) -> dict:
        return {
            "label": self.label.value,
            "mse_row": {label.value: err for label, err in self.mse_row.items()},
            "margin": self.margin,
            "near_miss": self.near_miss,
        }


def label_from_errors(
    mse_row: Mapping[LandUseLabel, float],
    near_miss_margin: float = DEFAULT_NEAR_MISS_MARGIN,
) -> ClassificationResult:
    """Pick the smallest-error label from a precomputed row.

    Iteration order of ``mse_row`` is the tie-break order: on exact ties the
    earlier entry wins and the margin reports 0.
    """
    if not mse_row:
        raise ValueError("empty error row")
    labels = list(mse_row)
    errors = [float(mse_row[label]) for label in labels]
    best_pos = min(range(len(errors)), key=lambda i: (errors[i], i))
    rest = [e for i, e in enumerate(errors) if i != best_pos]
    margin = (min(rest) - errors[best_pos]) if rest else 0.0
    return ClassificationResult(
        label=labels[best_pos],
        mse_row={label: float(mse_row[label]) for label in labels},
        margin=margin,
        near_miss=margin < near_miss_margin,
    )


def assign_label(
    sig: TemporalSignature,
    template: ReferenceTemplate,
    near_miss_margin: float = DEFAULT_NEAR_MISS_MARGIN,
) -> ClassificationResult:
    """Label an unknown signature by minimum MSE against the template."""
    row = {label: mse(sig, entry) for label, entry in template.entries}
    return label_from_errors(row, near_miss_margin=near_miss_margin)


def build_template(
    zones: Sequence[tuple[LandUseLabel, Sequence[BoundingBox]]],
    index: SpatialIndex,
    tz_offset_minutes: int,
    source: str = "",
) -> ReferenceTemplate:
    """Aggregate each label's boxes into one normalized signature.

    Boxes for the same label pool their counts before normalization. A label
    whose pooled curve has any zero hour raises :class:`IncompleteZoneError`
    naming the offender.
    """
    pooled: dict[LandUseLabel, np.ndarray] = {}
    boxes_used: dict[LandUseLabel, list[BoundingBox]] = {}
    for label, boxes in zones:
        for box in boxes:
            counts = hourly_histogram(index, box, tz_offset_minutes)
            pooled[label] = pooled.get(label, np.zeros(24, dtype=np.int64)) + counts.counts
            boxes_used.setdefault(label, []).append(box)

    entries = []
    for label, counts in pooled.items():
        hourly = HourlyCounts(counts)
        if not is_complete(hourly):
            raise IncompleteZoneError(str(label), missing_hours(hourly))
        entries.append((label, normalize(hourly)))
    return ReferenceTemplate(
        entries=tuple(entries),
        source=source,
        zones_used=tuple((label, tuple(boxes)) for label, boxes in boxes_used.items()),
    )


def save_template(template: ReferenceTemplate, path: str | Path) -> None:
    try:
        Path(path).write_text(json.dumps(template.as_dict(), indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise StoreIoError(f"cannot write template {path}: {exc}") from exc


def load_template(path: str | Path) -> ReferenceTemplate:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise StoreIoError(f"cannot read template {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise StoreIoError(f"template {path} is not valid JSON: {exc}") from exc
    if raw.get("format_version") != TEMPLATE_FORMAT_VERSION:
        raise StoreIoError(
            f"template {path} has unsupported format version {raw.get('format_version')!r}"
        )
    entries = tuple(
        (parse_label(entry["label"]), TemporalSignature(np.array(entry["values"])))
        for entry in raw["entries"]
    )
    zones_used = tuple(
        (parse_label(label), tuple(BoundingBox(*box) for box in boxes))
        for label, boxes in raw.get("zones_used", {}).items()
    )
    return ReferenceTemplate(entries=entries, source=raw.get("source", ""), zones_used=zones_used)
