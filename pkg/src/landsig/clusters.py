"""Incremental cluster growing: interactive sessions and an automated policy.

A session wraps a live bounding box whose hourly counts are recomputed on
every revision; the analyst (or the growth loop) keeps enlarging the box
until the temporal curve has activity in every hour, then accepts it as a
cluster or discards it. No cluster with a zero-count hour can ever be
produced — the gate sits in both finalization paths.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field
from enum import Enum

from .errors import IncompleteClusterError, SessionClosedError
from .grid import SpatialIndex, hourly_histogram
from .model import BoundingBox, HourlyCounts, TemporalSignature, validate_bbox
from .signature import is_complete, missing_hours, normalize


class SessionStatus(str, Enum):
    INCOMPLETE = "incomplete"
    COMPLETE = "complete"
    DISCARDED = "discarded"
    ACCEPTED = "accepted"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class GrowthPolicy:
    """Automated expansion schedule.

    Defaults bracket typical published cluster extents: one city-block step
    (~250 m), a 0.05-degree span ceiling, and at most 20 expansions.
    """

    step_deg: float = 0.0025
    max_span_deg: float = 0.05
    max_iterations: int = 20

    def __post_init__(self):
        if self.step_deg <= 0:
            raise ValueError("step_deg must be positive")
        if self.max_span_deg <= 0:
            raise ValueError("max_span_deg must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")

    def as_dict(self) -> dict:
        return {
            "step_deg": self.step_deg,
            "max_span_deg": self.max_span_deg,
            "max_iterations": self.max_iterations,
        }


@dataclass(frozen=True)
class Cluster:
    """An accepted rectangle with its normalized signature and provenance."""

    bbox: BoundingBox
    signature: TemporalSignature
    event_total: int
    origin: dict

    def as_dict(self) -> dict:
        return {
            "bbox": self.bbox.as_dict(),
            "signature": self.signature.tolist(),
            "event_total": self.event_total,
            "origin": self.origin,
        }


@dataclass(frozen=True)
class GrowthStep:
    bbox: BoundingBox
    counts: HourlyCounts
    event_total: int
    complete: bool


@dataclass(frozen=True)
class GrowthOutcome:
    """Result of one automated run: a cluster or a discard, plus the trace."""

    cluster: Cluster | None
    reason: str  # "complete" | "max_span" | "max_iterations"
    trace: tuple[GrowthStep, ...]

    @property
    def discarded(self) -> bool:
        return self.cluster is None


@dataclass
class ClusterSession:
    """Mutable state of one interactive growing session."""

    session_id: str
    dataset: str
    bbox: BoundingBox
    counts: HourlyCounts
    event_total: int
    status: SessionStatus
    history: list[BoundingBox] = field(default_factory=list)

    @property
    def closed(self) -> bool:
        return self.status in (SessionStatus.DISCARDED, SessionStatus.ACCEPTED)


def _live_status(counts: HourlyCounts) -> SessionStatus:
    return SessionStatus.COMPLETE if is_complete(counts) else SessionStatus.INCOMPLETE


def open_session(
    seed: BoundingBox,
    index: SpatialIndex,
    tz_offset_minutes: int,
    dataset: str = "",
    session_id: str | None = None,
) -> ClusterSession:
    """Start a session on a seed rectangle with live counts and status."""
    validate_bbox(seed)
    counts = hourly_histogram(index, seed, tz_offset_minutes)
    return ClusterSession(
        session_id=session_id or uuid.uuid4().hex,
        dataset=dataset,
        bbox=seed,
        counts=counts,
        event_total=counts.total,
        status=_live_status(counts),
    )


def revise_session(
    session: ClusterSession,
    new_bbox: BoundingBox,
    index: SpatialIndex,
    tz_offset_minutes: int,
) -> ClusterSession:
    """Replace the rectangle (grow, shrink, or move) and recompute the curve.

    The previous rectangle is appended to the history so the whole growth
    path stays reviewable.
    """
    if session.closed:
        raise SessionClosedError(f"session {session.session_id} is {session.status}")
    validate_bbox(new_bbox)
    counts = hourly_histogram(index, new_bbox, tz_offset_minutes)
    session.history.append(session.bbox)
    session.bbox = new_bbox
    session.counts = counts
    session.event_total = counts.total
    session.status = _live_status(counts)
    return session


def finalize_session(session: ClusterSession, decision: str) -> Cluster | None:
    """Close the session: ``accept`` (complete curves only) or ``discard``.

    Accepting returns the Cluster; discarding returns None. Accepting an
    incomplete session raises :class:`IncompleteClusterError` and leaves the
    session open.
    """
    if session.closed:
        raise SessionClosedError(f"session {session.session_id} is {session.status}")
    if decision == "discard":
        session.status = SessionStatus.DISCARDED
        return None
    if decision != "accept":
        raise ValueError(f"decision must be 'accept' or 'discard', got {decision!r}")
    if session.status != SessionStatus.COMPLETE:
        raise IncompleteClusterError(
            f"session {session.session_id} has no events for hour(s) "
            f"{missing_hours(session.counts)}",
            detail={"missing_hours": missing_hours(session.counts)},
        )
    cluster = Cluster(
        bbox=session.bbox,
        signature=normalize(session.counts),
        event_total=session.event_total,
        origin={
            "mode": "manual",
            "dataset": session.dataset,
            "history": [list(b.as_tuple()) for b in session.history],
        },
    )
    session.status = SessionStatus.ACCEPTED
    return cluster


def auto_grow(
    seed: BoundingBox,
    policy: GrowthPolicy,
    index: SpatialIndex,
    tz_offset_minutes: int,
    dataset: str = "",
) -> GrowthOutcome:
    """Headless analogue of the manual loop.

    Expands all four edges outward by ``step_deg`` per iteration until the
    curve is complete, the next box would exceed ``max_span_deg`` on either
    axis, or ``max_iterations`` expansions have been spent. Deterministic:
    the same seed, policy, and store always produce an identical trace.
    """
    validate_bbox(seed)
    bbox = seed
    trace: list[GrowthStep] = []
    for iteration in range(policy.max_iterations + 1):
        counts = hourly_histogram(index, bbox, tz_offset_minutes)
        complete = is_complete(counts)
        trace.append(GrowthStep(bbox=bbox, counts=counts, event_total=counts.total, complete=complete))
        if complete:
            cluster = Cluster(
                bbox=bbox,
                signature=normalize(counts),
                event_total=counts.total,
                origin={
                    "mode": "auto",
                    "dataset": dataset,
                    "seed": list(seed.as_tuple()),
                    "policy": policy.as_dict(),
                    "iterations": iteration,
                },
            )
            return GrowthOutcome(cluster=cluster, reason="complete", trace=tuple(trace))
        if iteration == policy.max_iterations:
            break
        grown = bbox.expand(policy.step_deg)
        if max(grown.lat_span, grown.lon_span) > policy.max_span_deg:
            return GrowthOutcome(cluster=None, reason="max_span", trace=tuple(trace))
        bbox = grown
    return GrowthOutcome(cluster=None, reason="max_iterations", trace=tuple(trace))
