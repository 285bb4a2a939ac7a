/** Wire types mirroring the service's JSON payloads, field for field. */

export interface Bbox {
  lat_min: number;
  lat_max: number;
  lon_min: number;
  lon_max: number;
}

export interface DatasetInfo {
  name: string;
  tz_offset_minutes: number;
  record_count: number;
  unique_users: number;
  time_span: [number, number];
  source_format: string;
  skipped: number;
  malformed: number;
  has_zones: boolean;
}

/** Live view of one growing session; `complete` is authoritative. */
export interface SessionView {
  session_id: string;
  dataset: string;
  bbox: Bbox;
  status: "incomplete" | "complete" | "discarded" | "accepted";
  history: Bbox[];
  counts: number[];
  event_total: number;
  complete: boolean;
  values: number[] | null;
}

export interface ClusterView {
  bbox: Bbox;
  signature: number[];
  event_total: number;
  origin: Record<string, unknown>;
}

export interface FinalizeView {
  session_id: string;
  status: string;
  cluster?: ClusterView;
}

export interface ClassificationView {
  label: string;
  mse_row: Record<string, number>;
  margin: number;
  near_miss: boolean;
}

export interface OverlapRow {
  source_id: string;
  zone_label: string;
  intersection_area_m2: number;
  pct_of_cluster: number;
  pct_of_zone: number;
  iou: number;
}

export interface OverlapView {
  cluster_id: string;
  predicted_label: string;
  rows: OverlapRow[];
  cluster_area_m2: number;
  zone_area_m2: number;
  intersection_area_m2: number;
  headline_definition: string;
  headline_pct: number;
}

export interface ZoneFeatureCollection {
  type: "FeatureCollection";
  features: Array<{
    type: "Feature";
    properties: { landuse: string; id: string };
    geometry:
      | { type: "Polygon"; coordinates: number[][][] }
      | { type: "MultiPolygon"; coordinates: number[][][][] };
  }>;
}

export interface TemplateView {
  format_version: number;
  source: string;
  entries: Array<{ label: string; values: number[] }>;
}
