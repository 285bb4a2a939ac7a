"""Command-line front end for headless and batch runs.

Subcommands: ingest, template, classify, auto-grow, validate, synth, serve,
report. Failures print one ``CODE: message`` line on stderr and exit
nonzero. All artifacts (stores, templates, cluster files, CSV, SVG) are
byte-deterministic for identical inputs.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .classify import assign_label, build_template, load_template, save_template
from .clusters import Cluster, GrowthPolicy, auto_grow
from .errors import LandsigError, StoreIoError
from .grid import build_index, hourly_histogram
from .ingest import load_dataset, load_store, save_store
from .model import BoundingBox, LandUseLabel, TemporalSignature
from .overlap import load_label_map, load_zones, overlap_report
from .signature import chart_svg, normalize, to_csv
from .synth import DEFAULT_TZ_OFFSET_MINUTES, default_profiles, generate_city, write_city

CLUSTERS_FORMAT_VERSION = 1


def _bbox(values: list[float]) -> BoundingBox:
    return BoundingBox(*values)


def _load_clusters(path: str) -> list[Cluster]:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise StoreIoError(f"cannot read clusters {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise StoreIoError(f"clusters {path} is not valid JSON: {exc}") from exc
    if raw.get("format_version") != CLUSTERS_FORMAT_VERSION:
        raise StoreIoError(f"clusters {path} has unsupported format version")
    out = []
    for item in raw["clusters"]:
        out.append(
            Cluster(
                bbox=BoundingBox(**item["bbox"]),
                signature=TemporalSignature(np.array(item["signature"])),
                event_total=int(item["event_total"]),
                origin=item.get("origin", {}),
            )
        )
    return out


def _write_clusters(clusters: list[Cluster], path: str, append: bool) -> None:
    existing = _load_clusters(path) if append and Path(path).exists() else []
    payload = {
        "format_version": CLUSTERS_FORMAT_VERSION,
        "clusters": [c.as_dict() for c in existing + clusters],
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _zones_as_template_input(zones) -> list[tuple[LandUseLabel, list[BoundingBox]]]:
    grouped: dict[LandUseLabel, list[BoundingBox]] = {}
    for zone in zones:
        grouped.setdefault(zone.label, []).append(zone.bbox())
    return list(grouped.items())


def cmd_ingest(args) -> int:
    store, manifest = load_dataset(
        args.infile, args.format, args.tz_offset, name=args.name
    )
    save_store(store, manifest, args.out)
    print(
        f"ingested {manifest.record_count} events "
        f"({manifest.skipped} skipped, {manifest.malformed} malformed) -> {args.out}"
    )
    return 0


def cmd_template(args) -> int:
    store, manifest = load_store(args.store)
    index = build_index(store, args.cell_size)
    label_map = load_label_map(args.label_map) if args.label_map else None
    zones = load_zones(args.zones, label_map)
    template = build_template(
        _zones_as_template_input(zones),
        index,
        manifest.tz_offset_minutes,
        source=manifest.name,
    )
    save_template(template, args.out)
    print(f"template with {len(template.entries)} entries -> {args.out}")
    return 0


def cmd_classify(args) -> int:
    template = load_template(args.template)
    store, manifest = load_store(args.store)
    index = build_index(store, args.cell_size)
    counts = hourly_histogram(index, _bbox(args.bbox), manifest.tz_offset_minutes)
    result = assign_label(normalize(counts), template)
    print(json.dumps(result.as_dict(), indent=2, sort_keys=True))
    return 0


def cmd_auto_grow(args) -> int:
    store, manifest = load_store(args.store)
    index = build_index(store, args.cell_size)
    policy = GrowthPolicy(
        step_deg=args.step, max_span_deg=args.max_span, max_iterations=args.max_iterations
    )
    accepted = []
    for seed_values in args.seed_bbox:
        outcome = auto_grow(
            _bbox(seed_values), policy, index, manifest.tz_offset_minutes, dataset=manifest.name
        )
        if outcome.cluster is not None:
            accepted.append(outcome.cluster)
            print(
                f"seed {seed_values}: complete after "
                f"{outcome.cluster.origin['iterations']} expansion(s), "
                f"{outcome.cluster.event_total} events"
            )
        else:
            print(f"seed {seed_values}: discarded ({outcome.reason})")
    if args.out:
        _write_clusters(accepted, args.out, append=args.append)
        print(f"{len(accepted)} cluster(s) -> {args.out}")
    return 0


def _validation_rows(clusters, template, zones, headline_definition):
    rows = []
    for i, cluster in enumerate(clusters):
        result = assign_label(cluster.signature, template)
        report = overlap_report(
            cluster.bbox,
            result.label,
            zones,
            cluster_id=f"cluster-{i}",
            headline_definition=headline_definition,
        )
        rows.append((f"cluster-{i}", result, report))
    return rows


def _write_validation_csv(rows, path) -> None:
    labels = [label.value for label in LandUseLabel]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["cluster_id", "predicted_land_use", *labels])
        for cluster_id, result, report in rows:
            cells = {label: "" for label in labels}
            cells[result.label.value] = f"{report.headline_pct:.1f}%"
            writer.writerow([cluster_id, result.label.value, *[cells[l] for l in labels]])


def cmd_validate(args) -> int:
    template = load_template(args.template)
    clusters = _load_clusters(args.clusters)
    label_map = load_label_map(args.label_map) if args.label_map else None
    zones = load_zones(args.zones, label_map)
    rows = _validation_rows(clusters, template, zones, args.headline)
    _write_validation_csv(rows, args.out)
    for cluster_id, result, report in rows:
        print(
            f"{cluster_id}: {result.label.value} "
            f"(margin {result.margin:.3f}, overlap {report.headline_pct:.1f}%)"
        )
    print(f"validation table -> {args.out}")
    return 0


def cmd_synth(args) -> int:
    profiles = default_profiles(daily_rate=args.rate)
    events, truth = generate_city(
        profiles, days=args.days, seed=args.seed, tz_offset_minutes=args.tz_offset
    )
    paths = write_city(
        args.out_dir, profiles, events, truth, seed=args.seed, days=args.days,
        tz_offset_minutes=args.tz_offset,
    )
    print(f"{len(events)} events over {args.days} day(s) -> {paths['events']}")
    return 0


def cmd_serve(args) -> int:
    from .service import ServiceConfig, serve

    serve(ServiceConfig.from_file(args.config))
    return 0


def cmd_report(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    template = load_template(args.template) if args.template else None

    if template is not None:
        series = [(label.value, sig) for label, sig in template.entries]
        (out_dir / "template.svg").write_text(chart_svg(series, title="Reference signatures"))
        for label, sig in template.entries:
            (out_dir / f"signature_{label.value.lower()}.csv").write_text(to_csv(sig))

    clusters = _load_clusters(args.clusters) if args.clusters else []
    for i, cluster in enumerate(clusters):
        name = f"cluster_{i}"
        (out_dir / f"{name}.svg").write_text(
            chart_svg([(name, cluster.signature)], title=f"Cluster {i} signature")
        )
        (out_dir / f"{name}.csv").write_text(to_csv(cluster.signature))

    if clusters and template is not None and args.zones:
        label_map = load_label_map(args.label_map) if args.label_map else None
        zones = load_zones(args.zones, label_map)
        rows = _validation_rows(clusters, template, zones, args.headline)
        _write_validation_csv(rows, out_dir / "validation.csv")

    print(f"report artifacts -> {out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="landsig",
        description="Detect urban land use from geo-tagged event streams.",
    )
    parser.add_argument("--version", action="version", version=f"landsig {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse an archived event file into a store")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--format", choices=["tweet-json", "csv"], required=True)
    p.add_argument("--tz-offset", type=int, required=True, help="local = UTC + offset minutes")
    p.add_argument("--out", required=True)
    p.add_argument("--name", default=None)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("template", help="build the labelled reference template")
    p.add_argument("--store", required=True)
    p.add_argument("--zones", required=True)
    p.add_argument("--label-map", default=None)
    p.add_argument("--cell-size", type=float, default=0.005)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_template)

    p = sub.add_parser("classify", help="label one rectangle against a template")
    p.add_argument("--template", required=True)
    p.add_argument("--store", required=True)
    p.add_argument("--bbox", type=float, nargs=4, required=True,
                   metavar=("LAT_MIN", "LAT_MAX", "LON_MIN", "LON_MAX"))
    p.add_argument("--cell-size", type=float, default=0.005)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("auto-grow", help="grow clusters from seed rectangles")
    p.add_argument("--store", required=True)
    p.add_argument("--seed-bbox", type=float, nargs=4, action="append", required=True,
                   metavar=("LAT_MIN", "LAT_MAX", "LON_MIN", "LON_MAX"))
    p.add_argument("--step", type=float, default=0.0025)
    p.add_argument("--max-span", type=float, default=0.05)
    p.add_argument("--max-iterations", type=int, default=20)
    p.add_argument("--cell-size", type=float, default=0.005)
    p.add_argument("--out", default=None)
    p.add_argument("--append", action="store_true")
    p.set_defaults(func=cmd_auto_grow)

    p = sub.add_parser("validate", help="overlap predicted clusters with official zones")
    p.add_argument("--clusters", required=True)
    p.add_argument("--zones", required=True)
    p.add_argument("--template", required=True)
    p.add_argument("--label-map", default=None)
    p.add_argument("--headline", choices=["pct_of_zone", "pct_of_cluster", "iou"],
                   default="pct_of_zone")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("synth", help="generate a synthetic city")
    p.add_argument("--days", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--rate", type=float, default=200.0)
    p.add_argument("--tz-offset", type=int, default=DEFAULT_TZ_OFFSET_MINUTES)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("report", help="emit signature charts and the validation table")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--template", default=None)
    p.add_argument("--clusters", default=None)
    p.add_argument("--zones", default=None)
    p.add_argument("--label-map", default=None)
    p.add_argument("--headline", choices=["pct_of_zone", "pct_of_cluster", "iou"],
                   default="pct_of_zone")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    # CLI flag uses the short format name; the parser wants the full one.
    if getattr(args, "format", None) == "tweet-json":
        args.format = "tweet-json-ndjson"
    try:
        return args.func(args)
    except LandsigError as exc:
        print(f"{exc.code}: {exc.message}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"IoError: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
