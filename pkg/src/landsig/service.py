"""HTTP service exposing the pipeline to interactive clients.

State is split the same way the library splits it: immutable stores, grid
indexes, zones, and the template are loaded once at startup; the only
mutable piece is the session table, and mutations are serialized per
session id. Every error crossing the wire carries one documented code and
never a stack trace.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.encoders import jsonable_encoder
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import classify as classify_mod
from . import clusters as clusters_mod
from .errors import EmptySignatureError, LandsigError, NotFoundError, StoreIoError
from .grid import SpatialIndex, build_index, hourly_histogram
from .ingest import EventStore, load_store
from .model import BoundingBox, DatasetManifest, Zone, parse_label
from .overlap import load_label_map, load_zones, overlap_report, zones_to_feature_collection
from .signature import is_complete, normalize

_STATUS_BY_CODE = {
    "BadRequest": 400,
    "NotFound": 404,
    "SessionClosed": 409,
    "IncompleteCluster": 409,
    "EmptySignature": 409,
    "NoZonesForLabel": 404,
    "IoError": 500,
}


@dataclass
class DatasetEntry:
    name: str
    store_path: str
    zones_path: str | None = None
    label_map_path: str | None = None


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    datasets: list[DatasetEntry] = field(default_factory=list)
    template_path: str | None = None
    default_policy: clusters_mod.GrowthPolicy = field(default_factory=clusters_mod.GrowthPolicy)
    cell_size_deg: float = 0.005
    near_miss_margin: float = 0.05
    headline_definition: str = "pct_of_zone"
    ui_dir: str | None = None

    @classmethod
    def from_file(cls, path: str | Path) -> "ServiceConfig":
        try:
            raw = json.loads(Path(path).read_text())
        except OSError as exc:
            raise StoreIoError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise StoreIoError(f"config {path} is not valid JSON: {exc}") from exc
        policy = clusters_mod.GrowthPolicy(**raw.get("default_policy", {}))
        datasets = [DatasetEntry(**entry) for entry in raw.get("datasets", [])]
        return cls(
            host=raw.get("host", "127.0.0.1"),
            port=int(raw.get("port", 8000)),
            datasets=datasets,
            template_path=raw.get("template"),
            default_policy=policy,
            cell_size_deg=float(raw.get("cell_size_deg", 0.005)),
            near_miss_margin=float(raw.get("near_miss_margin", 0.05)),
            headline_definition=raw.get("headline_definition", "pct_of_zone"),
            ui_dir=raw.get("ui_dir"),
        )


@dataclass
class _Dataset:
    manifest: DatasetManifest
    store: EventStore
    index: SpatialIndex
    zones: list[Zone] | None = None


class BboxBody(BaseModel):
    lat_min: float
    lat_max: float
    lon_min: float
    lon_max: float

    def to_box(self) -> BoundingBox:
        return BoundingBox(self.lat_min, self.lat_max, self.lon_min, self.lon_max)


class SignatureRequest(BaseModel):
    dataset: str
    bbox: BboxBody


class OverlapRequest(BaseModel):
    dataset: str
    bbox: BboxBody
    label: str


class SessionOpenRequest(BaseModel):
    dataset: str
    bbox: BboxBody


class SessionReviseRequest(BaseModel):
    bbox: BboxBody


class FinalizeRequest(BaseModel):
    decision: str


def _signature_payload(counts, include_values: bool) -> dict:
    payload = {
        "counts": counts.tolist(),
        "event_total": counts.total,
        "complete": is_complete(counts),
        "values": None,
    }
    if include_values and counts.total > 0:
        payload["values"] = normalize(counts).tolist()
    return payload


def _session_view(session: clusters_mod.ClusterSession) -> dict:
    view = {
        "session_id": session.session_id,
        "dataset": session.dataset,
        "bbox": session.bbox.as_dict(),
        "status": session.status.value,
        "history": [b.as_dict() for b in session.history],
    }
    view.update(_signature_payload(session.counts, include_values=True))
    return view


def create_app(config: ServiceConfig) -> FastAPI:
    """Load all configured artifacts and wire up the endpoints."""
    app = FastAPI(title="landsig", docs_url=None, redoc_url=None)

    datasets: dict[str, _Dataset] = {}
    for entry in config.datasets:
        store, manifest = load_store(entry.store_path)
        zones = None
        if entry.zones_path:
            label_map = load_label_map(entry.label_map_path) if entry.label_map_path else None
            zones = load_zones(entry.zones_path, label_map)
        datasets[entry.name] = _Dataset(
            manifest=manifest,
            store=store,
            index=build_index(store, config.cell_size_deg),
            zones=zones,
        )

    template = None
    if config.template_path:
        template = classify_mod.load_template(config.template_path)

    sessions: dict[str, clusters_mod.ClusterSession] = {}
    session_locks: dict[str, threading.Lock] = {}
    table_lock = threading.Lock()

    def get_dataset(name: str) -> _Dataset:
        if name not in datasets:
            raise NotFoundError(f"unknown dataset {name!r}")
        return datasets[name]

    def get_session(session_id: str) -> tuple[clusters_mod.ClusterSession, threading.Lock]:
        with table_lock:
            if session_id not in sessions:
                raise NotFoundError(f"unknown session {session_id!r}")
            return sessions[session_id], session_locks[session_id]

    @app.exception_handler(LandsigError)
    async def landsig_error_handler(request: Request, exc: LandsigError):
        return JSONResponse(
            status_code=_STATUS_BY_CODE.get(exc.code, 400),
            content={"code": exc.code, "message": exc.message, "detail": exc.detail},
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={
                "code": "BadRequest",
                "message": "invalid request body",
                "detail": {"errors": jsonable_encoder(exc.errors())},
            },
        )

    @app.exception_handler(Exception)
    async def fallback_error_handler(request: Request, exc: Exception):
        return JSONResponse(
            status_code=500,
            content={"code": "IoError", "message": "internal error", "detail": {}},
        )

    @app.get("/datasets")
    def list_datasets():
        # name reflects the registry key clients pass in request bodies,
        # which may differ from the name recorded at ingest time
        return [
            dict(ds.manifest.as_dict(), name=name, has_zones=ds.zones is not None)
            for name, ds in datasets.items()
        ]

    @app.get("/template")
    def get_template():
        if template is None:
            raise NotFoundError("no template loaded")
        return template.as_dict()

    @app.get("/zones")
    def get_zones(dataset: str):
        ds = get_dataset(dataset)
        if ds.zones is None:
            raise NotFoundError(f"dataset {dataset!r} has no zones loaded")
        return zones_to_feature_collection(ds.zones)

    @app.post("/signature")
    def post_signature(body: SignatureRequest):
        ds = get_dataset(body.dataset)
        counts = hourly_histogram(ds.index, body.bbox.to_box(), ds.manifest.tz_offset_minutes)
        return _signature_payload(counts, include_values=True)

    @app.post("/classify")
    def post_classify(body: SignatureRequest):
        if template is None:
            raise NotFoundError("no template loaded")
        ds = get_dataset(body.dataset)
        counts = hourly_histogram(ds.index, body.bbox.to_box(), ds.manifest.tz_offset_minutes)
        if counts.total == 0:
            raise EmptySignatureError("no events in the requested rectangle")
        result = classify_mod.assign_label(
            normalize(counts), template, near_miss_margin=config.near_miss_margin
        )
        return result.as_dict()

    @app.post("/overlap")
    def post_overlap(body: OverlapRequest):
        ds = get_dataset(body.dataset)
        if ds.zones is None:
            raise NotFoundError(f"dataset {body.dataset!r} has no zones loaded")
        report = overlap_report(
            body.bbox.to_box(),
            parse_label(body.label),
            ds.zones,
            headline_definition=config.headline_definition,
        )
        return report.as_dict()

    @app.post("/sessions", status_code=201)
    def open_session(body: SessionOpenRequest):
        ds = get_dataset(body.dataset)
        session = clusters_mod.open_session(
            body.bbox.to_box(), ds.index, ds.manifest.tz_offset_minutes, dataset=body.dataset
        )
        with table_lock:
            sessions[session.session_id] = session
            session_locks[session.session_id] = threading.Lock()
        return _session_view(session)

    @app.get("/sessions/{session_id}")
    def view_session(session_id: str):
        session, _ = get_session(session_id)
        return _session_view(session)

    @app.patch("/sessions/{session_id}")
    def revise_session(session_id: str, body: SessionReviseRequest):
        session, lock = get_session(session_id)
        with lock:
            ds = get_dataset(session.dataset)
            clusters_mod.revise_session(
                session, body.bbox.to_box(), ds.index, ds.manifest.tz_offset_minutes
            )
            return _session_view(session)

    @app.post("/sessions/{session_id}/finalize")
    def finalize_session(session_id: str, body: FinalizeRequest):
        session, lock = get_session(session_id)
        with lock:
            cluster = clusters_mod.finalize_session(session, body.decision)
            view = {"session_id": session.session_id, "status": session.status.value}
            if cluster is not None:
                view["cluster"] = cluster.as_dict()
            return view

    if config.ui_dir:
        app.mount("/", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app


def serve(config: ServiceConfig) -> None:
    """Run the service until interrupted."""
    import uvicorn

    uvicorn.run(create_app(config), host=config.host, port=config.port)
