"""Exception hierarchy shared across the package.

Every exception carries a ``code`` drawn from the documented wire set
(BadRequest, NotFound, SessionClosed, IncompleteCluster, EmptySignature,
NoZonesForLabel, IoError) so the HTTP service and the CLI can map failures
without inspecting concrete types.
"""

from __future__ import annotations


class LandsigError(Exception):
    """Base class for all domain errors."""

    code = "BadRequest"

    def __init__(self, message: str, detail: dict | None = None):
        super().__init__(message)
        self.message = message
        self.detail = detail or {}


class OutOfRangeError(LandsigError):
    """Coordinate or timestamp outside its legal range."""


class DegenerateBoxError(LandsigError):
    """Bounding box with zero or negative extent on some axis."""


class MalformedRecordError(LandsigError):
    """Input record that cannot be parsed at all."""


class EmptyDatasetError(LandsigError):
    """A load or index build yielded zero accepted events."""


class EmptySignatureError(LandsigError):
    """All 24 hourly counts are zero; no signature can be normalized."""

    code = "EmptySignature"


class IncompleteZoneError(LandsigError):
    """A reference zone has at least one hour with zero events."""

    def __init__(self, label: str, missing_hours: list[int]):
        super().__init__(
            f"zone {label!r} has no events for hour(s) {missing_hours}",
            detail={"label": label, "missing_hours": missing_hours},
        )
        self.label = label
        self.missing_hours = missing_hours


class SessionClosedError(LandsigError):
    """Operation on a session that was already accepted or discarded."""

    code = "SessionClosed"


class IncompleteClusterError(LandsigError):
    """Accept attempted on a session whose temporal curve has gaps."""

    code = "IncompleteCluster"


class NoZonesForLabelError(LandsigError):
    """No official zone carries the predicted land-use label."""

    code = "NoZonesForLabel"


class InvalidProfileError(LandsigError):
    """Synthetic zone profile violates its invariants."""


class DegenerateRingError(LandsigError):
    """Polygon ring with fewer than 3 distinct vertices or zero area."""


class ZoneGeometryError(LandsigError):
    """Zone file contains invalid or mutually overlapping geometry."""


class NotFoundError(LandsigError):
    """Named dataset, session, template, or zone set does not exist."""

    code = "NotFound"


class StoreIoError(LandsigError):
    """File-level failure reading or writing an artifact."""

    code = "IoError"
