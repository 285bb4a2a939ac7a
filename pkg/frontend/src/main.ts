/**
 * Wire the map, workflow, and sidebar together.
 *
 * Config via query parameters:
 *   ?api=http://host:port   service base URL (default: same origin)
 *   ?dataset=name           dataset to explore (default: first listed)
 *   ?tiles=https://.../{z}/{x}/{y}.png   tile server template
 */

import { LandsigApi } from "./api.js";
import { MapPane } from "./map.js";
import {
  renderBadge,
  renderCurve,
  renderLegend,
  renderMseTable,
  renderOverlapPanel,
  renderStats,
  renderToast,
} from "./panels.js";
import { SessionWorkflow } from "./workflow.js";
import type { Bbox } from "./types.js";

const DEFAULT_TILES = "https://tile.openstreetmap.org/{z}/{x}/{y}.png";

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const api = new LandsigApi(params.get("api") ?? "");

  const datasets = await api.getDatasets();
  if (datasets.length === 0) throw new Error("service has no datasets");
  const datasetName = params.get("dataset") ?? datasets[0]!.name;
  const dataset = datasets.find((d) => d.name === datasetName) ?? datasets[0]!;
  byId("dataset-name").textContent = dataset.name;
  byId("dataset-stats").textContent =
    `${String(dataset.record_count)} events, ${String(dataset.unique_users)} users`;

  const workflow = new SessionWorkflow(api, dataset.name);
  const map = new MapPane(byId("map"), {
    tileTemplate: params.get("tiles") ?? DEFAULT_TILES,
    attribution: "tiles (c) OpenStreetMap contributors",
  });
  renderLegend(byId("legend"));

  if (dataset.has_zones) {
    const zones = await api.getZones(dataset.name);
    map.setZones(zones);
    const lats: number[] = [];
    const lons: number[] = [];
    for (const f of zones.features) {
      const polys = f.geometry.type === "Polygon" ? [f.geometry.coordinates] : f.geometry.coordinates;
      for (const rings of polys) {
        for (const pos of rings[0] ?? []) {
          lons.push(pos[0] as number);
          lats.push(pos[1] as number);
        }
      }
    }
    if (lats.length) {
      map.fitBbox({
        lat_min: Math.min(...lats),
        lat_max: Math.max(...lats),
        lon_min: Math.min(...lons),
        lon_max: Math.max(...lons),
      });
    }
  }

  map.rectangleListener((bbox: Bbox) => {
    void workflow.placeRectangle(bbox);
  });

  const acceptBtn = byId("accept") as HTMLButtonElement;
  const discardBtn = byId("discard") as HTMLButtonElement;
  const resetBtn = byId("reset") as HTMLButtonElement;
  acceptBtn.addEventListener("click", () => void workflow.accept());
  discardBtn.addEventListener("click", () => void workflow.discard());
  resetBtn.addEventListener("click", () => {
    workflow.reset();
    map.setSession(null);
  });

  workflow.subscribe((state) => {
    renderBadge(byId("badge"), state.session);
    renderStats(byId("stats"), state.session);
    renderCurve(byId("curve"), state.session);
    renderMseTable(byId("mse"), state.classification);
    renderOverlapPanel(byId("overlap"), state.overlap, state.overlapDisabled);
    renderToast(byId("toast"), state.lastError);
    map.setSession(state.session);
    const active = state.stage === "active";
    acceptBtn.disabled = !active || !state.session?.complete || state.busy;
    discardBtn.disabled = !active || state.busy;
    resetBtn.disabled = state.stage === "idle" || state.busy;
    byId("busy").style.visibility = state.busy ? "visible" : "hidden";
  });
}

boot().catch((err) => {
  const toast = document.getElementById("toast");
  if (toast) toast.textContent = `startup failed: ${String(err)}`;
});
