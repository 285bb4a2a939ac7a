"""Urban land-use detection from geo-tagged event streams.

The pipeline: ingest archived geo-tagged events into a columnar store,
index them on a uniform grid, extract normalized 24-hour activity
signatures for rectangles, classify unknown signatures against a labelled
reference template by minimum mean-squared error, and validate predictions
by polygon overlap against official zoning maps.
"""

__version__ = "0.1.0"

from .classify import (
    ClassificationResult,
    ReferenceTemplate,
    assign_label,
    build_template,
    label_from_errors,
    load_template,
    mse,
    save_template,
)
from .clusters import (
    Cluster,
    ClusterSession,
    GrowthOutcome,
    GrowthPolicy,
    SessionStatus,
    auto_grow,
    finalize_session,
    open_session,
    revise_session,
)
from .grid import SpatialIndex, build_index, hourly_histogram, query_bbox
from .ingest import (
    EventStore,
    load_dataset,
    load_store,
    local_hour,
    parse_event_record,
    save_store,
)
from .model import (
    BoundingBox,
    DatasetManifest,
    GeoEvent,
    HourlyCounts,
    LandUseLabel,
    TemporalSignature,
    Zone,
    ZonePolygon,
    validate_bbox,
)
from .overlap import (
    OverlapReport,
    clip_rect_polygon,
    load_zones,
    overlap_report,
    ring_area_m2,
)
from .signature import is_complete, normalize
from .synth import ZoneProfile, default_profiles, generate_city

__all__ = [
    "BoundingBox",
    "ClassificationResult",
    "Cluster",
    "ClusterSession",
    "DatasetManifest",
    "EventStore",
    "GeoEvent",
    "GrowthOutcome",
    "GrowthPolicy",
    "HourlyCounts",
    "LandUseLabel",
    "OverlapReport",
    "ReferenceTemplate",
    "SessionStatus",
    "SpatialIndex",
    "TemporalSignature",
    "Zone",
    "ZonePolygon",
    "ZoneProfile",
    "assign_label",
    "auto_grow",
    "build_index",
    "build_template",
    "clip_rect_polygon",
    "default_profiles",
    "finalize_session",
    "generate_city",
    "hourly_histogram",
    "is_complete",
    "label_from_errors",
    "load_dataset",
    "load_store",
    "load_template",
    "load_zones",
    "local_hour",
    "mse",
    "normalize",
    "open_session",
    "overlap_report",
    "parse_event_record",
    "query_bbox",
    "revise_session",
    "ring_area_m2",
    "save_store",
    "save_template",
    "validate_bbox",
]
