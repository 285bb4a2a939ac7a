/**
 * Sidebar rendering: status badge, live curve, MSE table, overlap panel.
 *
 * Numbers are rendered with String(value) straight off the wire payloads;
 * no rounding, no local arithmetic. The highlighted MSE row is the label the
 * service assigned, not a client-side minimum.
 */

import { curveSvg } from "./chart.js";
import type { ApiError } from "./api.js";
import type { ClassificationView, OverlapView, SessionView } from "./types.js";

export const LABEL_COLORS: Record<string, string> = {
  Business: "#2e6fb7",
  Residential: "#d65fa4",
  Education: "#d9a400",
  Recreation: "#6e6e6e",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderBadge(container: HTMLElement, session: SessionView | null): void {
  container.textContent = "";
  if (!session) {
    container.append(el("span", "badge badge-idle", "draw a seed rectangle"));
    return;
  }
  // the flag is the backend's verbatim; never recomputed from counts
  const complete = session.complete;
  const badge = el(
    "span",
    complete ? "badge badge-complete" : "badge badge-incomplete",
    complete ? "complete" : "incomplete",
  );
  badge.dataset.complete = String(complete);
  container.append(badge);
  if (session.status === "accepted" || session.status === "discarded") {
    container.append(el("span", "badge badge-closed", session.status));
  }
}

export function renderStats(container: HTMLElement, session: SessionView | null): void {
  container.textContent = "";
  if (!session) return;
  const dl = el("dl", "stats");
  const add = (k: string, v: string, cls?: string) => {
    dl.append(el("dt", undefined, k));
    const dd = el("dd", cls, v);
    dl.append(dd);
  };
  add("events", String(session.event_total), "stat-events");
  add("revisions", String(session.history.length));
  add(
    "box",
    `${String(session.bbox.lat_min)} .. ${String(session.bbox.lat_max)} / ` +
      `${String(session.bbox.lon_min)} .. ${String(session.bbox.lon_max)}`,
  );
  container.append(dl);
}

export function renderCurve(container: HTMLElement, session: SessionView | null): void {
  container.innerHTML = session ? curveSvg({ values: session.values }) : "";
}

export function renderMseTable(
  container: HTMLElement,
  classification: ClassificationView | null,
): void {
  container.textContent = "";
  if (!classification) return;
  const caption = el("div", "panel-title", "similarity to reference zones (MSE)");
  const table = el("table", "mse-table");
  for (const [label, value] of Object.entries(classification.mse_row)) {
    const tr = el("tr");
    if (label === classification.label) tr.className = "mse-min"; // service's argmin
    const swatch = el("td", "swatch");
    swatch.style.background = LABEL_COLORS[label] ?? "#333";
    tr.append(swatch, el("td", "mse-label", label), el("td", "mse-value", String(value)));
    table.append(tr);
  }
  container.append(caption, table);
  const verdict = el("div", "verdict");
  verdict.append(el("span", undefined, "assigned: "));
  const strong = el("strong", "assigned-label", classification.label);
  strong.style.color = LABEL_COLORS[classification.label] ?? "#000";
  verdict.append(strong);
  verdict.append(el("span", "margin", ` margin ${String(classification.margin)}`));
  container.append(verdict);
  if (classification.near_miss) {
    container.append(
      el("div", "near-miss-warning", "near miss: runner-up is close, treat with care"),
    );
  }
}

export function renderOverlapPanel(
  container: HTMLElement,
  overlap: OverlapView | null,
  disabledReason: string | null,
): void {
  container.textContent = "";
  if (disabledReason) {
    container.append(el("div", "panel-disabled", disabledReason));
    return;
  }
  if (!overlap) return;
  container.append(el("div", "panel-title", "overlap with official zoning"));
  const table = el("table", "overlap-table");
  const head = el("tr");
  for (const h of ["zone", "label", "% of cluster", "% of zone", "IoU"]) {
    head.append(el("th", undefined, h));
  }
  table.append(head);
  for (const row of overlap.rows) {
    const tr = el("tr");
    tr.append(
      el("td", undefined, row.source_id),
      el("td", undefined, row.zone_label),
      el("td", "pct", String(row.pct_of_cluster)),
      el("td", "pct", String(row.pct_of_zone)),
      el("td", "pct", String(row.iou)),
    );
    table.append(tr);
  }
  container.append(table);
  container.append(
    el(
      "div",
      "headline",
      `headline (${overlap.headline_definition}): ${String(overlap.headline_pct)}%`,
    ),
  );
}

export function renderToast(container: HTMLElement, error: ApiError | null): void {
  container.textContent = "";
  if (!error) return;
  const toast = el("div", "toast", `${error.code}: ${error.message}`);
  toast.dataset.code = error.code;
  container.append(toast);
}

export function renderLegend(container: HTMLElement): void {
  container.textContent = "";
  for (const [label, color] of Object.entries(LABEL_COLORS)) {
    const item = el("span", "legend-item");
    const dot = el("span", "legend-dot");
    dot.style.background = color;
    item.append(dot, el("span", undefined, label));
    container.append(item);
  }
}
