/**
 * Slippy-tile map pane with rectangle drawing.
 *
 * Tiles come from a configurable template URL. On top sits one SVG overlay
 * with the zoning polygons (label-colored), the session's history trail as
 * faded rectangles, and the live rectangle. Gestures: drag draws (or
 * replaces) the rectangle, wheel zooms, right-drag or space+drag pans. A
 * gesture only becomes state when the rectangle-complete callback's API
 * round-trip succeeds; the provisional outline is cosmetic.
 */

import { bboxCenter, cornersToBbox, project, tileUrl, unproject, zoomToFit, TILE_SIZE } from "./mercator.js";
import { LABEL_COLORS } from "./panels.js";
import type { Bbox, SessionView, ZoneFeatureCollection } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface MapOptions {
  tileTemplate: string;
  attribution?: string;
}

export class MapPane {
  private center = { lat: -27.47, lon: 153.02 };
  private zoom = 13;
  private tileLayer: HTMLDivElement;
  private overlay: SVGSVGElement;
  private zones: ZoneFeatureCollection | null = null;
  private session: SessionView | null = null;
  private provisional: Bbox | null = null;
  private onRectangle: ((bbox: Bbox) => void) | null = null;
  private drag: { mode: "draw" | "pan"; startX: number; startY: number } | null = null;
  private panStartCenter = { lat: 0, lon: 0 };
  private spaceHeld = false;

  constructor(
    private container: HTMLElement,
    private options: MapOptions,
  ) {
    container.classList.add("map-pane");
    this.tileLayer = document.createElement("div");
    this.tileLayer.className = "tile-layer";
    this.overlay = document.createElementNS(SVG_NS, "svg");
    this.overlay.classList.add("map-overlay");
    container.append(this.tileLayer, this.overlay);

    container.addEventListener("mousedown", (e) => this.handleMouseDown(e));
    window.addEventListener("mousemove", (e) => this.handleMouseMove(e));
    window.addEventListener("mouseup", (e) => this.handleMouseUp(e));
    container.addEventListener("wheel", (e) => this.handleWheel(e), { passive: false });
    container.addEventListener("contextmenu", (e) => e.preventDefault());
    window.addEventListener("keydown", (e) => {
      if (e.code === "Space") this.spaceHeld = true;
    });
    window.addEventListener("keyup", (e) => {
      if (e.code === "Space") this.spaceHeld = false;
    });
    if (options.attribution) {
      const credit = document.createElement("div");
      credit.className = "map-attribution";
      credit.textContent = options.attribution;
      container.append(credit);
    }
  }

  rectangleListener(cb: (bbox: Bbox) => void): void {
    this.onRectangle = cb;
  }

  setZones(zones: ZoneFeatureCollection | null): void {
    this.zones = zones;
    this.render();
  }

  setSession(session: SessionView | null): void {
    this.session = session;
    this.render();
  }

  fitBbox(bbox: Bbox, padding = 1.4): void {
    const { width, height } = this.viewport();
    const spanLat = (bbox.lat_max - bbox.lat_min) * padding;
    const spanLon = (bbox.lon_max - bbox.lon_min) * padding;
    const c = bboxCenter(bbox);
    const padded: Bbox = {
      lat_min: c.lat - spanLat / 2,
      lat_max: c.lat + spanLat / 2,
      lon_min: c.lon - spanLon / 2,
      lon_max: c.lon + spanLon / 2,
    };
    this.center = c;
    this.zoom = zoomToFit(padded, width, height);
    this.render();
  }

  setView(lat: number, lon: number, zoom: number): void {
    this.center = { lat, lon };
    this.zoom = zoom;
    this.render();
  }

  private viewport(): { width: number; height: number } {
    return {
      width: this.container.clientWidth || 800,
      height: this.container.clientHeight || 600,
    };
  }

  /** Screen px of a lat/lon under the current view. */
  toScreen(lat: number, lon: number): { x: number; y: number } {
    const { width, height } = this.viewport();
    const c = project(this.center.lat, this.center.lon, this.zoom);
    const p = project(lat, lon, this.zoom);
    return { x: p.x - c.x + width / 2, y: p.y - c.y + height / 2 };
  }

  toLatLon(x: number, y: number): { lat: number; lon: number } {
    const { width, height } = this.viewport();
    const c = project(this.center.lat, this.center.lon, this.zoom);
    return unproject(c.x + x - width / 2, c.y + y - height / 2, this.zoom);
  }

  private localXY(e: MouseEvent): { x: number; y: number } {
    const rect = this.container.getBoundingClientRect();
    return { x: e.clientX - rect.left, y: e.clientY - rect.top };
  }

  private handleMouseDown(e: MouseEvent): void {
    const { x, y } = this.localXY(e);
    const pan = e.button === 2 || this.spaceHeld;
    this.drag = { mode: pan ? "pan" : "draw", startX: x, startY: y };
    this.panStartCenter = { ...this.center };
    e.preventDefault();
  }

  private handleMouseMove(e: MouseEvent): void {
    if (!this.drag) return;
    const { x, y } = this.localXY(e);
    if (this.drag.mode === "pan") {
      const c = project(this.panStartCenter.lat, this.panStartCenter.lon, this.zoom);
      const moved = unproject(
        c.x - (x - this.drag.startX),
        c.y - (y - this.drag.startY),
        this.zoom,
      );
      this.center = moved;
      this.render();
      return;
    }
    this.provisional = cornersToBbox(
      this.toLatLon(this.drag.startX, this.drag.startY),
      this.toLatLon(x, y),
    );
    this.render();
  }

  private handleMouseUp(e: MouseEvent): void {
    if (!this.drag) return;
    const drag = this.drag;
    this.drag = null;
    if (drag.mode === "pan") return;
    const { x, y } = this.localXY(e);
    const bbox = cornersToBbox(this.toLatLon(drag.startX, drag.startY), this.toLatLon(x, y));
    this.provisional = null;
    this.render();
    // zero-drag clicks fall through too: the service rejects degenerate
    // boxes with BadRequest and the UI surfaces the toast
    if (this.onRectangle) this.onRectangle(bbox);
  }

  private handleWheel(e: WheelEvent): void {
    e.preventDefault();
    const next = this.zoom + (e.deltaY < 0 ? 1 : -1);
    this.zoom = Math.min(18, Math.max(3, next));
    this.render();
  }

  render(): void {
    this.renderTiles();
    this.renderOverlay();
  }

  private renderTiles(): void {
    const { width, height } = this.viewport();
    const c = project(this.center.lat, this.center.lon, this.zoom);
    const x0 = Math.floor((c.x - width / 2) / TILE_SIZE);
    const x1 = Math.floor((c.x + width / 2) / TILE_SIZE);
    const y0 = Math.max(0, Math.floor((c.y - height / 2) / TILE_SIZE));
    const y1 = Math.min(2 ** this.zoom - 1, Math.floor((c.y + height / 2) / TILE_SIZE));

    this.tileLayer.textContent = "";
    for (let tx = x0; tx <= x1; tx++) {
      for (let ty = y0; ty <= y1; ty++) {
        const img = document.createElement("img");
        img.className = "tile";
        img.src = tileUrl(this.options.tileTemplate, this.zoom, tx, ty);
        img.style.left = `${tx * TILE_SIZE - (c.x - width / 2)}px`;
        img.style.top = `${ty * TILE_SIZE - (c.y - height / 2)}px`;
        img.decoding = "async";
        img.loading = "lazy";
        this.tileLayer.append(img);
      }
    }
  }

  private svgRect(bbox: Bbox, className: string): SVGRectElement {
    const a = this.toScreen(bbox.lat_max, bbox.lon_min); // top-left
    const b = this.toScreen(bbox.lat_min, bbox.lon_max); // bottom-right
    const rect = document.createElementNS(SVG_NS, "rect");
    rect.setAttribute("x", String(a.x));
    rect.setAttribute("y", String(a.y));
    rect.setAttribute("width", String(Math.max(0, b.x - a.x)));
    rect.setAttribute("height", String(Math.max(0, b.y - a.y)));
    rect.setAttribute("class", className);
    return rect;
  }

  private renderOverlay(): void {
    const { width, height } = this.viewport();
    this.overlay.setAttribute("viewBox", `0 0 ${width} ${height}`);
    this.overlay.textContent = "";

    if (this.zones) {
      for (const feature of this.zones.features) {
        const color = LABEL_COLORS[feature.properties.landuse] ?? "#555";
        const polygons =
          feature.geometry.type === "Polygon"
            ? [feature.geometry.coordinates]
            : feature.geometry.coordinates;
        for (const rings of polygons) {
          const path = document.createElementNS(SVG_NS, "path");
          let d = "";
          for (const ring of rings) {
            ring.forEach((pos, i) => {
              const [lon, lat] = pos as unknown as [number, number];
              const p = this.toScreen(lat, lon);
              d += `${i === 0 ? "M" : "L"}${p.x.toFixed(1)},${p.y.toFixed(1)}`;
            });
            d += "Z";
          }
          path.setAttribute("d", d);
          path.setAttribute("class", "zone-shape");
          path.setAttribute("fill", color);
          path.setAttribute("stroke", color);
          this.overlay.append(path);
        }
      }
    }

    if (this.session) {
      for (const past of this.session.history) {
        this.overlay.append(this.svgRect(past, "history-rect"));
      }
      this.overlay.append(
        this.svgRect(
          this.session.bbox,
          this.session.complete ? "session-rect rect-complete" : "session-rect rect-incomplete",
        ),
      );
    }
    if (this.provisional) {
      this.overlay.append(this.svgRect(this.provisional, "provisional-rect"));
    }
  }
}
